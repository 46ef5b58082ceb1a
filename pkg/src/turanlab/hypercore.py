"""Uniform hypergraph data model and structural primitives.

Vertices are the integers ``0..n-1``. Every edge is stored as an int bitmask
over the vertex set (bit ``v`` set iff ``v`` is in the edge), so intersection
and containment tests are single mask operations. Edges are kept in
lexicographic order of their sorted vertex tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence


class CanonicalFormBudgetExceeded(ValueError):
    """Raised when a hypergraph is too large for brute canonicalization."""


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def lex_key(mask: int) -> tuple[int, ...]:
    return vertices_of(mask)


@dataclass(frozen=True)
class Hypergraph:
    """An ``r``-uniform hypergraph on vertices ``0..n-1``.

    Build instances with :meth:`from_edges`; the raw constructor expects
    ``edges`` to already be a duplicate-free, lex-sorted tuple of masks.
    """

    n: int
    r: int
    edges: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError(f"uniformity must be positive, got r={self.r}")
        if self.n < 0:
            raise ValueError(f"vertex count must be nonnegative, got n={self.n}")
        full = (1 << self.n) - 1
        seen = set()
        for e in self.edges:
            if e.bit_count() != self.r or e & ~full:
                raise ValueError(f"edge {vertices_of(e)} is not an {self.r}-subset of 0..{self.n - 1}")
            if e in seen:
                raise ValueError(f"duplicate edge {vertices_of(e)}")
            seen.add(e)

    @classmethod
    def from_edges(cls, n: int, r: int, edges: Iterable[Iterable[int]] = ()) -> "Hypergraph":
        """Build from vertex collections. Repeated edges collapse silently."""
        masks = set()
        for e in edges:
            verts = tuple(e)
            m = mask_of(verts)
            if len(verts) != r or m.bit_count() != r:
                raise ValueError(f"edge {verts} does not have {r} distinct vertices")
            if any(v < 0 or v >= n for v in verts):
                raise ValueError(f"edge {verts} has a vertex outside 0..{n - 1}")
            masks.add(m)
        return cls(n, r, tuple(sorted(masks, key=lex_key)))

    @classmethod
    def from_masks(cls, n: int, r: int, masks: Iterable[int]) -> "Hypergraph":
        return cls(n, r, tuple(sorted(set(masks), key=lex_key)))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: object) -> bool:
        if isinstance(edge, int):
            return edge in self.edge_set
        return mask_of(edge) in self.edge_set  # type: ignore[arg-type]

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return (vertices_of(e) for e in self.edges)

    @cached_property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for e in self.edges:
            for v in vertices_of(e):
                deg[v] += 1
        return tuple(deg)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def edge_tuples(self) -> list[tuple[int, ...]]:
        return [vertices_of(e) for e in self.edges]

    def with_edges(self, masks: Iterable[int]) -> "Hypergraph":
        return Hypergraph.from_masks(self.n, self.r, masks)

    def relabel(self, perm: Sequence[int]) -> "Hypergraph":
        """Image under the vertex map ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("relabel needs a permutation of 0..n-1")
        return Hypergraph.from_masks(self.n, self.r, (mask_of(perm[v] for v in vertices_of(e)) for e in self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, r={self.r}, m={len(self.edges)})"


def _check_vertex(H: Hypergraph, v: int) -> None:
    if not 0 <= v < H.n:
        raise ValueError(f"vertex {v} out of range 0..{H.n - 1}")


def degree(H: Hypergraph, v: int) -> int:
    _check_vertex(H, v)
    return H.degrees[v]


def restricted_degree(H: Hypergraph, roots: Sequence[int], A: Iterable[int]) -> int:
    """Count edges containing every root whose other vertices all lie in ``A``."""
    if len(set(roots)) != len(roots):
        raise ValueError("roots must be distinct")
    if not 1 <= len(roots) <= H.r:
        raise ValueError(f"need 1 <= len(roots) <= r={H.r}, got {len(roots)}")
    for v in roots:
        _check_vertex(H, v)
    root_mask = mask_of(roots)
    a_mask = mask_of(A)
    if a_mask & root_mask:
        raise ValueError("roots and A must be disjoint")
    return sum(1 for e in H.edges if e & root_mask == root_mask and (e & ~root_mask) & ~a_mask == 0)


@dataclass(frozen=True)
class VertexLink:
    owner: int
    edges: Hypergraph

    def __len__(self) -> int:
        return len(self.edges)


def link(H: Hypergraph, v: int) -> VertexLink:
    _check_vertex(H, v)
    if H.r < 2:
        raise ValueError("links are defined for r >= 2")
    bit = 1 << v
    rem = [e ^ bit for e in H.edges if e & bit]
    return VertexLink(v, Hypergraph.from_masks(H.n, H.r - 1, rem))


@dataclass(frozen=True)
class CoOccurrenceGraph:
    """Pairs of vertices that share at least one hyperedge.

    ``adjacency[v]`` is the neighbour bitmask of ``v``.
    """

    n: int
    adjacency: tuple[int, ...]

    def adjacent(self, x: int, y: int) -> bool:
        return bool(self.adjacency[x] >> y & 1)

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in range(x + 1, self.n) if self.adjacent(x, y)]

    def as_graph(self) -> Hypergraph:
        return Hypergraph.from_edges(self.n, 2, self.pairs())


def co_occurrence(H: Hypergraph) -> CoOccurrenceGraph:
    adj = [0] * H.n
    for e in H.edges:
        for v in vertices_of(e):
            adj[v] |= e
    return CoOccurrenceGraph(H.n, tuple(a & ~(1 << v) for v, a in enumerate(adj)))


@dataclass(frozen=True)
class LineGraph:
    """Intersection graph on the edges of a hypergraph.

    Vertex ``i`` is ``source.edges[i]``; ``adjacency[i]`` is a bitmask over
    edge indices.
    """

    source: Hypergraph
    adjacency: tuple[int, ...] = field(repr=False)

    def degree(self, i: int) -> int:
        return self.adjacency[i].bit_count()

    @property
    def max_degree(self) -> int:
        return max((a.bit_count() for a in self.adjacency), default=0)


def line_graph(H: Hypergraph) -> LineGraph:
    # bucket edge indices by vertex so we only touch intersecting pairs
    through = [0] * H.n
    for i, e in enumerate(H.edges):
        for v in vertices_of(e):
            through[v] |= 1 << i
    adj = []
    for i, e in enumerate(H.edges):
        a = 0
        for v in vertices_of(e):
            a |= through[v]
        adj.append(a & ~(1 << i))
    return LineGraph(H, tuple(adj))


def induced(H: Hypergraph, S: Iterable[int]) -> Hypergraph:
    """Sub-hypergraph on ``S`` relabelled ``0..|S|-1`` preserving order."""
    verts = sorted(set(S))
    for v in verts:
        _check_vertex(H, v)
    s_mask = mask_of(verts)
    pos = {v: i for i, v in enumerate(verts)}
    inside = (e for e in H.edges if e & ~s_mask == 0)
    return Hypergraph.from_masks(len(verts), H.r, (mask_of(pos[v] for v in vertices_of(e)) for e in inside))


def complete_graph_on(n: int, r: int) -> Iterator[int]:
    for c in combinations(range(n), r):
        yield mask_of(c)


# -- canonical form ---------------------------------------------------------


def _refine(n: int, incidence: list[list[tuple[int, ...]]], colors: list[int]) -> list[int]:
    """Colour refinement on the vertex/edge incidence structure.

    Colours are always dense ranks of label-independent signatures, so the
    result is an isomorphism invariant of (H, initial colouring).
    """
    ncolors = len(set(colors))
    while True:
        sigs = []
        for v in range(n):
            around = sorted(tuple(sorted(colors[u] for u in e if u != v)) for e in incidence[v])
            sigs.append((colors[v], tuple(around)))
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [ranks[s] for s in sigs]
        if len(ranks) == ncolors:
            return colors
        ncolors = len(ranks)


def canonical_form(H: Hypergraph, max_n: int = 10) -> bytes:
    """Isomorphism-invariant encoding of ``H``.

    The minimum, over all vertex orderings compatible with the refined degree
    partition, of the lexicographically sorted relabelled edge list. Two
    hypergraphs get equal strings iff they are isomorphic.
    """
    header = f"{H.n} {H.r} {len(H.edges)}|".encode()
    if not H.edges or len(H.edges) == comb(H.n, H.r):
        # empty and complete hypergraphs are fixed by every permutation
        return header + _encode(sorted(H.edge_tuples()))
    if H.n > max_n:
        raise CanonicalFormBudgetExceeded(f"n={H.n} exceeds canonicalization budget {max_n}")

    n = H.n
    tuples = H.edge_tuples()
    incidence: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for t in tuples:
        for v in t:
            incidence[v].append(t)

    best: list[tuple[int, ...]] | None = None

    def search(colors: list[int]) -> None:
        nonlocal best
        colors = _refine(n, incidence, colors)
        if len(set(colors)) == n:
            relabelled = sorted(tuple(sorted(colors[v] for v in t)) for t in tuples)
            if best is None or relabelled < best:
                best = relabelled
            return
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min(c for c, k in counts.items() if k > 1)
        for v in range(n):
            if colors[v] == target:
                split = [2 * c + (0 if u == v or c != target else 1) for u, c in enumerate(colors)]
                search(split)

    search(list(H.degrees))
    assert best is not None
    return header + _encode(best)


def _encode(edges: list[tuple[int, ...]]) -> bytes:
    return ";".join(",".join(map(str, e)) for e in edges).encode()


def is_isomorphic(H1: Hypergraph, H2: Hypergraph, max_n: int = 10) -> bool:
    if (H1.n, H1.r, len(H1)) != (H2.n, H2.r, len(H2)):
        return False
    if sorted(H1.degrees) != sorted(H2.degrees):
        return False
    return canonical_form(H1, max_n) == canonical_form(H2, max_n)
