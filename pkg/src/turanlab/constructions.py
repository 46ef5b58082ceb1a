"""Deterministic generators for the extremal hypergraphs.

Conventions shared by every partitioned construction:

* balanced parts have sizes ``n // k`` or ``n // k + 1``, larger parts first;
* the special part (``V_0`` / ``X``) takes the lowest vertex ids, then the
  remaining parts follow consecutively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .hypercore import Hypergraph, mask_of


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionedHypergraph:
    hypergraph: Hypergraph
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen = [v for p in self.parts for v in p]
        if sorted(seen) != list(range(self.hypergraph.n)):
            raise ConstructionError("parts must be disjoint and cover every vertex")

    def __len__(self) -> int:
        return len(self.hypergraph)

    @property
    def sizes(self) -> list[int]:
        return [len(p) for p in self.parts]


def balanced_sizes(n: int, k: int) -> list[int]:
    if k <= 0:
        if n:
            raise ConstructionError(f"cannot split {n} vertices into {k} parts")
        return []
    q, rem = divmod(n, k)
    return [q + 1] * rem + [q] * (k - rem)


def _blocks(sizes: Sequence[int], start: int = 0) -> list[tuple[int, ...]]:
    out = []
    for size in sizes:
        out.append(tuple(range(start, start + size)))
        start += size
    return out


def _crossing_sets(parts: Sequence[Sequence[int]], k: int) -> list[int]:
    """Masks of all ``k``-sets taking at most one vertex from each part."""
    out = []
    for chosen in combinations(parts, k):
        for verts in product(*chosen):
            out.append(mask_of(verts))
    return out


def turan_graph(n: int, l: int) -> PartitionedHypergraph:
    """Complete balanced ``l``-partite graph T(n, l)."""
    if l < 0 or n < 0:
        raise ConstructionError("n and l must be nonnegative")
    if l == 0 and n > 0:
        raise ConstructionError("T(n, 0) is undefined for n > 0")
    parts = _blocks(balanced_sizes(n, l))
    return PartitionedHypergraph(Hypergraph.from_masks(n, 2, _crossing_sets(parts, 2)), tuple(parts))


def generalized_turan(n: int, l: int, r: int) -> PartitionedHypergraph:
    """All crossing ``r``-sets of a balanced ``l``-partition of ``n`` vertices."""
    if r < 2 or l < r:
        raise ConstructionError(f"generalized Turan needs l >= r >= 2, got l={l}, r={r}")
    if n < 0:
        raise ConstructionError("n must be nonnegative")
    parts = _blocks(balanced_sizes(n, l))
    return PartitionedHypergraph(Hypergraph.from_masks(n, r, _crossing_sets(parts, r)), tuple(parts))


def alon_frankl_graph(n: int, l: int, s: int) -> PartitionedHypergraph:
    """G(n, l, s): one part of size ``n - s`` joined to a T(s, l - 1).

    The ``l - 1`` small parts come first (vertices ``0..s-1``), the large part
    last, so G(5, 2, 1) is the star centred at vertex 0.
    """
    if l < 2:
        raise ConstructionError(f"alon_frankl_graph needs l >= 2, got {l}")
    if s < 0 or n < s:
        raise ConstructionError(f"alon_frankl_graph needs n >= s >= 0, got n={n}, s={s}")
    parts = _blocks(balanced_sizes(s, l - 1)) + _blocks([n - s], s)
    return PartitionedHypergraph(Hypergraph.from_masks(n, 2, _crossing_sets(parts, 2)), tuple(parts))


def _check_main_params(n: int, l: int, s: int, r: int) -> None:
    if not (l >= r >= 3):
        raise ConstructionError(f"need l >= r >= 3, got l={l}, r={r}")
    if s < 1:
        raise ConstructionError(f"need s >= 1, got s={s}")
    if n < s + l:
        raise ConstructionError(f"need n >= s + l = {s + l}, got n={n}")


def main_extremal(n: int, l: int, s: int, r: int) -> PartitionedHypergraph:
    """G(n, l, s, r): each of the ``s`` vertices of V_0 is joined to every
    crossing ``(r-1)``-set of a balanced ``(l-1)``-partition of the rest."""
    _check_main_params(n, l, s, r)
    v0 = tuple(range(s))
    rest = _blocks(balanced_sizes(n - s, l - 1), s)
    crossing = _crossing_sets(rest, r - 1)
    masks = [(1 << v) | a for v in v0 for a in crossing]
    return PartitionedHypergraph(Hypergraph.from_masks(n, r, masks), (v0, *rest))


def conjecture_witness(n: int, l: int, s: int, r: int) -> PartitionedHypergraph:
    """G(n, l, s, r) plus one edge with ``r - 1`` vertices in V_0.

    The extra edge is the lexicographically least valid choice: the ``r - 1``
    lowest vertices of V_0 together with the first vertex of V_1.
    """
    _check_main_params(n, l, s, r)
    if s < r - 1:
        raise ConstructionError(f"extra edge needs s >= r - 1 = {r - 1}, got s={s}")
    if s < l - 1:
        raise ConstructionError(f"witness is defined for s >= l - 1 = {l - 1}, got s={s}")
    base = main_extremal(n, l, s, r)
    extra = mask_of(range(r - 1)) | (1 << s)
    H = Hypergraph.from_masks(n, r, base.hypergraph.edges + (extra,))
    return PartitionedHypergraph(H, base.parts)


FANO_LINES: tuple[tuple[int, int, int], ...] = (
    (0, 1, 2),
    (2, 3, 4),
    (4, 5, 0),
    (0, 6, 3),
    (1, 6, 4),
    (2, 6, 5),
    (1, 3, 5),
)
"""The lines 123, 345, 561, 174, 275, 376, 246 relabelled to 0..6."""


def fano_plane() -> Hypergraph:
    return Hypergraph.from_edges(7, 3, FANO_LINES)


def fano_extremal(n: int, s: int) -> PartitionedHypergraph:
    """F(n, s): triples with exactly one or exactly two vertices in X = 0..s-1."""
    if not 0 <= s < n:
        raise ConstructionError(f"fano_extremal needs n > s >= 0, got n={n}, s={s}")
    X = tuple(range(s))
    Y = tuple(range(s, n))
    masks = [mask_of((*xs, y)) for xs in combinations(X, 2) for y in Y]
    masks += [mask_of((x, *ys)) for x in X for ys in combinations(Y, 2)]
    return PartitionedHypergraph(Hypergraph.from_masks(n, 3, masks), (X, Y))


def expansion(l: int, r: int) -> Hypergraph:
    """K_{l+1} with every edge padded by ``r - 2`` private vertices.

    Core vertices are ``0..l``; padding vertices follow, allocated pair by
    pair in lexicographic order.
    """
    if r < 2 or l < 1:
        raise ConstructionError(f"expansion needs l >= 1 and r >= 2, got l={l}, r={r}")
    pairs = list(combinations(range(l + 1), 2))
    nxt = l + 1
    edges = []
    for x, y in pairs:
        pad = range(nxt, nxt + r - 2)
        nxt += r - 2
        edges.append((x, y, *pad))
    return Hypergraph.from_edges(nxt, r, edges)


def frankl_star(n: int, r: int, s: int) -> Hypergraph:
    """A(n, r, s): every ``r``-set meeting {0, ..., s-1}."""
    if r < 1 or n < r:
        raise ConstructionError(f"frankl_star needs n >= r >= 1, got n={n}, r={r}")
    if not 0 <= s <= n:
        raise ConstructionError(f"frankl_star needs 0 <= s <= n, got s={s}")
    core = (1 << s) - 1
    return Hypergraph.from_masks(n, r, (mask_of(c) for c in combinations(range(n), r) if mask_of(c) & core))


def matching_hypergraph(k: int, r: int) -> Hypergraph:
    if k < 0 or r < 1:
        raise ConstructionError(f"matching needs k >= 0 and r >= 1, got k={k}, r={r}")
    return Hypergraph.from_edges(k * r, r, (range(i * r, (i + 1) * r) for i in range(k)))


def complete_r_graph(n: int, r: int) -> Hypergraph:
    if r < 1 or n < r:
        raise ConstructionError(f"complete r-graph needs n >= r >= 1, got n={n}, r={r}")
    return Hypergraph.from_edges(n, r, combinations(range(n), r))


def pad_vertices(H: Hypergraph, n: int) -> Hypergraph:
    """Same edges on a larger vertex set (extra vertices isolated)."""
    if n < H.n:
        raise ConstructionError(f"cannot pad {H.n} vertices down to {n}")
    return Hypergraph(n, H.r, H.edges)


# -- named dispatch -----------------------------------------------------------

KINDS = {
    "turan": ("TuranGraph", ("n", "l")),
    "gen-turan": ("GeneralizedTuran", ("n", "l", "r")),
    "alon-frankl": ("AlonFranklGraph", ("n", "l", "s")),
    "main-extremal": ("MainExtremal", ("n", "l", "s", "r")),
    "fano": ("FanoPlane", ()),
    "fano-extremal": ("FanoExtremal", ("n", "s")),
    "expansion": ("Expansion", ("l", "r")),
    "frankl-star": ("FranklStar", ("n", "r", "s")),
    "matching": ("Matching", ("k", "r")),
    "complete": ("CompleteRGraph", ("n", "r")),
    "conjecture-witness": ("ConjectureWitness", ("n", "l", "s", "r")),
}

_BUILDERS = {
    "turan": turan_graph,
    "gen-turan": generalized_turan,
    "alon-frankl": alon_frankl_graph,
    "main-extremal": main_extremal,
    "fano": fano_plane,
    "fano-extremal": fano_extremal,
    "expansion": expansion,
    "frankl-star": frankl_star,
    "matching": matching_hypergraph,
    "complete": complete_r_graph,
    "conjecture-witness": conjecture_witness,
}


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    params: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConstructionError(f"unknown construction {self.kind!r}; choose from {', '.join(KINDS)}")
        needed = KINDS[self.kind][1]
        missing = [p for p in needed if self.params.get(p) is None]
        if missing:
            raise ConstructionError(f"{self.kind} needs parameters {', '.join(missing)}")
        if any(self.params[p] < 0 for p in needed):
            raise ConstructionError("parameters must be nonnegative integers")

    def build(self) -> tuple[Hypergraph, tuple[tuple[int, ...], ...] | None]:
        args = [self.params[p] for p in KINDS[self.kind][1]]
        out = _BUILDERS[self.kind](*args)
        if isinstance(out, PartitionedHypergraph):
            return out.hypergraph, out.parts
        return out, None


def build(kind: str, **params: int) -> tuple[Hypergraph, tuple[tuple[int, ...], ...] | None]:
    return ConstructionSpec(kind, params).build()
