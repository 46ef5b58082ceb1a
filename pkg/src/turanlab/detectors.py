"""Exact decision procedures for forbidden structures and structural predicates.

All witnesses are deterministic: candidates are always tried in increasing
vertex / lexicographic edge order, so the same input yields the same witness
byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .constructions import FANO_LINES
from .hypercore import Hypergraph, co_occurrence, line_graph, link, mask_of, vertices_of


class DetectorError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    """Embedding data backing a positive answer.

    ``core`` is the core vertex set (K-family, expansion); ``vertex_map`` is an
    injection pattern-vertex -> host-vertex (Fano, Berge); ``pairs[i]`` is the
    pattern/core pair covered by ``edges[i]``. For matchings only ``edges`` is
    filled.
    """

    kind: str
    edges: tuple[tuple[int, ...], ...] = ()
    core: tuple[int, ...] = ()
    vertex_map: tuple[int, ...] = ()
    pairs: tuple[tuple[int, int], ...] = ()

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "edges": [list(e) for e in self.edges]}
        if self.core:
            out["core"] = list(self.core)
        if self.vertex_map:
            out["vertex_map"] = list(self.vertex_map)
        if self.pairs:
            out["pairs"] = [list(p) for p in self.pairs]
        return out


class Detection(NamedTuple):
    found: bool
    witness: Witness | None


# -- matching number -----------------------------------------------------------


def _greedy_packing(edges: Sequence[int]) -> int:
    used = 0
    k = 0
    for e in edges:
        if not e & used:
            used |= e
            k += 1
    return k


def max_matching(edges: Sequence[int], r: int, target: int | None = None) -> list[int]:
    """Branch-and-bound maximum matching over edge masks.

    Branches on a vertex of minimum positive degree: either one of its edges
    is matched, or the vertex is deleted. Stops early once a matching of size
    ``target`` is found.
    """
    best: list[int] = []

    def solve(pool: list[int], chosen: list[int]) -> bool:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
            if target is not None and len(best) >= target:
                return True
        if not pool:
            return False
        union = 0
        for e in pool:
            union |= e
        ub = min(union.bit_count() // r, r * _greedy_packing(pool))
        if len(chosen) + ub <= len(best):
            return False
        deg: dict[int, int] = {}
        for e in pool:
            m = e
            while m:
                low = m & -m
                deg[low] = deg.get(low, 0) + 1
                m ^= low
        pivot = min(deg, key=lambda b: (deg[b], b))
        for e in pool:
            if e & pivot:
                chosen.append(e)
                if solve([f for f in pool if not f & e], chosen):
                    return True
                chosen.pop()
        return solve([f for f in pool if not f & pivot], chosen)

    solve(list(edges), [])
    return best


def matching_number(H: Hypergraph, cap: int | None = None) -> tuple[int, Witness]:
    """Exact matching number, or ``min(nu, cap + 1)`` when ``cap`` is given."""
    target = None if cap is None else cap + 1
    m = max_matching(H.edges, H.r, target)
    return len(m), Witness("matching", tuple(sorted(vertices_of(e) for e in m)))


# -- cliques in the co-occurrence graph ----------------------------------------


def max_clique(adj: Sequence[int], candidates: int) -> int:
    """Bron-Kerbosch with Tomita pivoting; returns a maximum clique mask."""
    best = 0

    def expand(R: int, P: int, X: int) -> None:
        nonlocal best
        if not P and not X:
            if R.bit_count() > best.bit_count():
                best = R
            return
        if R.bit_count() + P.bit_count() <= best.bit_count():
            return
        PX = P | X
        pivot, pivot_deg = -1, -1
        while PX:
            low = PX & -PX
            u = low.bit_length() - 1
            d = (adj[u] & P).bit_count()
            if d > pivot_deg:
                pivot, pivot_deg = u, d
            PX ^= low
        ext = P & ~adj[pivot]
        while ext:
            low = ext & -ext
            v = low.bit_length() - 1
            expand(R | low, P & adj[v], X & adj[v])
            P &= ~low
            X |= low
            ext ^= low

    expand(0, candidates, 0)
    return best


def first_clique(adj: Sequence[int], candidates: int, k: int) -> int | None:
    """Lexicographically least ``k``-clique inside ``candidates``, as a mask."""

    def go(cand: int, k: int) -> int | None:
        if k == 0:
            return 0
        while cand.bit_count() >= k:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            rest = go(cand & adj[v], k - 1)
            if rest is not None:
                return rest | low
        return None

    return go(candidates, k)


def iter_cliques(adj: Sequence[int], candidates: int, k: int) -> Iterable[int]:
    """All ``k``-cliques inside ``candidates`` in lexicographic order."""
    if k == 0:
        yield 0
        return
    cand = candidates
    while cand.bit_count() >= k:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        for rest in iter_cliques(adj, cand & adj[v], k - 1):
            yield rest | low


def clique_number(H: Hypergraph) -> int:
    adj = co_occurrence(H).adjacency
    return max_clique(adj, (1 << H.n) - 1).bit_count()


def _cover_edges(H: Hypergraph, core: int) -> tuple[tuple[tuple[int, int], ...], tuple[tuple[int, ...], ...]]:
    pairs, edges = [], []
    for x, y in combinations(vertices_of(core), 2):
        pm = (1 << x) | (1 << y)
        e = next(e for e in H.edges if e & pm == pm)
        pairs.append((x, y))
        edges.append(vertices_of(e))
    return tuple(pairs), tuple(edges)


def contains_k_family(H: Hypergraph, l: int) -> Detection:
    """Is there an ``(l+1)``-set all of whose pairs are covered by edges?

    Equivalent to an ``(l+1)``-clique in the co-occurrence graph: picking one
    covering edge per pair gives a member with at most C(l+1, 2) edges.
    """
    if l < H.r:
        raise DetectorError(f"K-family needs l >= r, got l={l}, r={H.r}")
    adj = co_occurrence(H).adjacency
    every = (1 << H.n) - 1
    if max_clique(adj, every).bit_count() < l + 1:
        return Detection(False, None)
    core = first_clique(adj, every, l + 1)
    assert core is not None
    pairs, edges = _cover_edges(H, core)
    return Detection(True, Witness("k-family", edges, vertices_of(core), pairs=pairs))


# -- Fano plane ----------------------------------------------------------------


def _third_index(edges: Iterable[int], n: int) -> dict[int, int]:
    """pair mask -> mask of vertices completing the pair to an edge."""
    third: dict[int, int] = {}
    for e in edges:
        a, b, c = vertices_of(e)
        for pm, w in (((1 << a) | (1 << b), c), ((1 << a) | (1 << c), b), ((1 << b) | (1 << c), a)):
            third[pm] = third.get(pm, 0) | (1 << w)
    return third


def _fano_extend(
    third: dict[int, int], adj: Sequence[int], eligible: int, phi: list[int], used: int
) -> list[int] | None:
    p = len(phi)
    if p == 7:
        return phi
    cand = eligible & ~used
    for img in phi:
        cand &= adj[img]
    for line in FANO_LINES:
        if p in line:
            others = [q for q in line if q != p]
            if all(q < p for q in others):
                cand &= third.get((1 << phi[others[0]]) | (1 << phi[others[1]]), 0)
    while cand:
        low = cand & -cand
        phi.append(low.bit_length() - 1)
        got = _fano_extend(third, adj, eligible, phi, used | low)
        if got is not None:
            return got
        phi.pop()
        cand ^= low
    return None


def _fano_witness(phi: Sequence[int]) -> Witness:
    edges = tuple(tuple(sorted(phi[q] for q in line)) for line in FANO_LINES)
    return Witness("fano", edges, vertex_map=tuple(phi))


def contains_fano(H: Hypergraph) -> Detection:
    """Injective embedding of the Fano plane, found by pruned backtracking.

    Candidate images need degree >= 3, must co-occur with every image placed
    so far, and must complete each already-fixed pair of a line to an edge.
    """
    if H.r != 3:
        raise DetectorError(f"Fano detection needs a 3-graph, got r={H.r}")
    if len(H) < 7:
        return Detection(False, None)
    adj = co_occurrence(H).adjacency
    eligible = mask_of(v for v, d in enumerate(H.degrees) if d >= 3)
    phi = _fano_extend(_third_index(H.edges, H.n), adj, eligible, [], 0)
    if phi is None:
        return Detection(False, None)
    return Detection(True, _fano_witness(phi))


def fano_through_edge(n: int, edges: Sequence[int], e: int) -> list[int] | None:
    """Fano embedding into ``edges + [e]`` that uses ``e``.

    The Fano plane's automorphism group acts as S_3 on any line, so it is
    enough to send line (0, 1, 2) onto ``e`` in one fixed order.
    """
    allm = list(edges) + [e]
    third = _third_index(allm, n)
    adj = [0] * n
    deg = [0] * n
    for f in allm:
        for v in vertices_of(f):
            adj[v] |= f
            deg[v] += 1
    adj = [a & ~(1 << v) for v, a in enumerate(adj)]
    eligible = mask_of(v for v in range(n) if deg[v] >= 3)
    start = list(vertices_of(e))
    if any(deg[v] < 3 for v in start):
        return None
    return _fano_extend(third, adj, eligible, start, e)


# -- expansion -----------------------------------------------------------------


def _pack_core(edges: Sequence[int], core: int, pairs: Sequence[tuple[int, int]], forced: dict | None = None):
    """Choose one edge per core pair, meeting the core exactly in that pair,
    with pairwise disjoint outside parts. Returns the chosen edges or None."""
    options = []
    for x, y in pairs:
        pm = (1 << x) | (1 << y)
        if forced and (x, y) in forced:
            opts = [forced[(x, y)]]
        else:
            opts = [f for f in edges if f & core == pm]
        if not opts:
            return None
        options.append(opts)
    order = sorted(range(len(pairs)), key=lambda i: (len(options[i]), i))
    chosen: list[int] = [0] * len(pairs)

    def go(k: int, used: int) -> bool:
        if k == len(order):
            return True
        i = order[k]
        for f in options[i]:
            outside = f & ~core
            if not outside & used:
                chosen[i] = f
                if go(k + 1, used | outside):
                    return True
        return False

    return chosen if go(0, 0) else None


def _expansion_witness(core: int, pairs, chosen) -> Witness:
    return Witness("expansion", tuple(vertices_of(f) for f in chosen), vertices_of(core), pairs=tuple(pairs))


def contains_expansion(H: Hypergraph, l: int) -> Detection:
    """Copy of the expanded clique with ``l + 1`` core vertices.

    Cores are the ``(l+1)``-cliques of the co-occurrence graph, tried in
    lexicographic order; for each core an exact set-packing search picks one
    edge per pair with pairwise disjoint non-core parts.
    """
    if l < H.r:
        raise DetectorError(f"expansion needs l >= r, got l={l}, r={H.r}")
    adj = co_occurrence(H).adjacency
    for core in iter_cliques(adj, (1 << H.n) - 1, l + 1):
        pairs = list(combinations(vertices_of(core), 2))
        chosen = _pack_core(H.edges, core, pairs)
        if chosen is not None:
            return Detection(True, _expansion_witness(core, pairs, chosen))
    return Detection(False, None)


def expansion_through_edge(n: int, r: int, edges: Sequence[int], adj: Sequence[int], e: int, l: int) -> bool:
    """Does ``edges + [e]`` contain an expansion that uses ``e``?

    ``adj`` must be the co-occurrence adjacency of ``edges + [e]``.
    """
    allm = list(edges) + [e]
    for x, y in combinations(vertices_of(e), 2):
        pm = (1 << x) | (1 << y)
        common = adj[x] & adj[y] & ~e
        for rest in iter_cliques(adj, common, l - 1):
            core = rest | pm
            pairs = list(combinations(vertices_of(core), 2))
            if _pack_core(allm, core, pairs, {(x, y): e}) is not None:
                return True
    return False


# -- Berge copies --------------------------------------------------------------


def _sdr(options: Sequence[Sequence[int]]) -> list[int] | None:
    """Distinct representatives via augmenting paths (Kuhn)."""
    owner: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for f in options[i]:
            if f in seen:
                continue
            seen.add(f)
            if f not in owner or augment(owner[f], seen):
                owner[f] = i
                return True
        return False

    for i in range(len(options)):
        if not augment(i, set()):
            return None
    rep = [0] * len(options)
    for f, i in owner.items():
        rep[i] = f
    return rep


def contains_berge(H: Hypergraph, G: Hypergraph) -> Detection:
    """Berge copy of the graph ``G``: an injection ``phi`` of V(G) and distinct
    host edges ``f(uv) ⊇ {phi(u), phi(v)}``."""
    if G.r != 2:
        raise DetectorError(f"Berge pattern must be a graph, got r={G.r}")
    if G.n > H.n or len(G) > len(H):
        return Detection(False, None)
    adj = co_occurrence(H).adjacency
    pattern = G.edge_tuples()
    back: list[list[int]] = [[] for _ in range(G.n)]
    for u, v in pattern:
        back[v].append(u)
    phi: list[int] = []

    def options_for(p: tuple[int, ...]) -> list[int]:
        pm = (1 << phi[p[0]]) | (1 << phi[p[1]])
        return [f for f in H.edges if f & pm == pm]

    def go(used: int) -> list[int] | None:
        p = len(phi)
        if p == G.n:
            return _sdr([options_for(e) for e in pattern])
        cand = ((1 << H.n) - 1) & ~used
        for u in back[p]:
            cand &= adj[phi[u]]
        while cand:
            low = cand & -cand
            phi.append(low.bit_length() - 1)
            got = go(used | low)
            if got is not None:
                return got
            phi.pop()
            cand ^= low
        return None

    rep = go(0)
    if rep is None:
        return Detection(False, None)
    return Detection(True, Witness("berge", tuple(vertices_of(f) for f in rep), vertex_map=tuple(phi), pairs=tuple(pattern)))


# -- independence, colouring, degrees ------------------------------------------


def is_weakly_independent(H: Hypergraph, S: Iterable[int]) -> bool:
    sm = mask_of(S)
    return not any(e & ~sm == 0 for e in H.edges)


def is_strongly_independent(H: Hypergraph, S: Iterable[int]) -> bool:
    sm = mask_of(S)
    return not any((e & sm).bit_count() >= 2 for e in H.edges)


@dataclass(frozen=True)
class EdgeColoring:
    colors: tuple[int, ...]
    num_colors: int
    bound: int = field(default=0)

    def is_proper(self, H: Hypergraph) -> bool:
        for i, j in combinations(range(len(H.edges)), 2):
            if self.colors[i] == self.colors[j] and H.edges[i] & H.edges[j]:
                return False
        return True


def greedy_edge_coloring(H: Hypergraph) -> EdgeColoring:
    """Greedy colouring of the line graph, edges in lexicographic order.

    Each edge meets at most r(max_degree - 1) others, so at most
    r(max_degree - 1) + 1 colours are used.
    """
    L = line_graph(H)
    colors: list[int] = []
    for i, nbrs in enumerate(L.adjacency):
        taken = {colors[j] for j in vertices_of(nbrs) if j < i}
        c = 0
        while c in taken:
            c += 1
        colors.append(c)
    num = max(colors, default=-1) + 1
    bound = H.r * (H.max_degree - 1) + 1 if H.edges else 0
    return EdgeColoring(tuple(colors), num, bound)


def high_degree_threshold(n: int, r: int, s: int) -> int:
    return r * (s + 1) * n ** (r - 2)


def high_degree_vertices(H: Hypergraph, s: int) -> list[int]:
    """Vertices whose degree exceeds r(s+1)n^(r-2); at most ``s`` when nu <= s."""
    thr = high_degree_threshold(H.n, H.r, s)
    return [v for v, d in enumerate(H.degrees) if d > thr]


def link_freeness_check(H: Hypergraph, l: int) -> bool:
    """True iff no vertex link contains a member of the (l)-core K-family."""
    return not any(contains_k_family(link(H, v).edges, l - 1).found for v in range(H.n))


# -- witness re-validation -----------------------------------------------------


def validate_witness(H: Hypergraph, w: Witness, G: Hypergraph | None = None) -> bool:
    """Re-check a witness against ``H`` by direct containment tests."""
    masks = [mask_of(e) for e in w.edges]
    if any(m not in H.edge_set for m in masks):
        return False
    if w.kind == "matching":
        return all(not a & b for a, b in combinations(masks, 2))
    if w.kind == "k-family":
        if len(w.pairs) != len(w.core) * (len(w.core) - 1) // 2 or len(w.edges) != len(w.pairs):
            return False
        if sorted(w.pairs) != list(combinations(sorted(w.core), 2)):
            return False
        return all(set(p) <= set(e) for p, e in zip(w.pairs, w.edges))
    if w.kind == "expansion":
        core = mask_of(w.core)
        if len(masks) != len(set(masks)) or len(w.pairs) != len(w.core) * (len(w.core) - 1) // 2:
            return False
        if len(masks) != len(w.pairs) or sorted(w.pairs) != list(combinations(sorted(w.core), 2)):
            return False
        used = 0
        for p, m in zip(w.pairs, masks):
            if m & core != mask_of(p):
                return False
            if m & ~core & used:
                return False
            used |= m & ~core
        return True
    if w.kind == "fano":
        phi = w.vertex_map
        if len(set(phi)) != 7:
            return False
        return all(mask_of(phi[q] for q in line) in H.edge_set for line in FANO_LINES)
    if w.kind == "berge":
        phi = w.vertex_map
        if len(set(phi)) != len(phi) or len(masks) != len(set(masks)) or len(masks) != len(w.pairs):
            return False
        if G is not None and sorted(w.pairs) != sorted(G.edge_tuples()):
            return False
        return all(m >> phi[u] & 1 and m >> phi[v] & 1 for (u, v), m in zip(w.pairs, masks))
    raise DetectorError(f"unknown witness kind {w.kind!r}")


# -- constraints ---------------------------------------------------------------

CONSTRAINT_KINDS = ("k-family", "fano", "expansion", "berge", "matching-atmost")


@dataclass(frozen=True)
class ForbiddenConstraint:
    """A downward-closed property: freeness from a family, or nu <= s.

    ``l`` parametrizes k-family / expansion, ``s`` the matching bound and
    ``pattern`` the Berge pattern graph.
    """

    kind: str
    l: int | None = None
    s: int | None = None
    pattern: Hypergraph | None = None

    def __post_init__(self) -> None:
        if self.kind not in CONSTRAINT_KINDS:
            raise DetectorError(f"unknown constraint {self.kind!r}; choose from {', '.join(CONSTRAINT_KINDS)}")
        if self.kind in ("k-family", "expansion") and self.l is None:
            raise DetectorError(f"{self.kind} constraint needs l")
        if self.kind == "matching-atmost" and (self.s is None or self.s < 0):
            raise DetectorError("matching-atmost constraint needs s >= 0")
        if self.kind == "berge" and (self.pattern is None or self.pattern.r != 2):
            raise DetectorError("berge constraint needs a pattern graph")

    @classmethod
    def k_family(cls, l: int) -> "ForbiddenConstraint":
        return cls("k-family", l=l)

    @classmethod
    def fano(cls) -> "ForbiddenConstraint":
        return cls("fano")

    @classmethod
    def expansion(cls, l: int) -> "ForbiddenConstraint":
        return cls("expansion", l=l)

    @classmethod
    def berge(cls, pattern: Hypergraph) -> "ForbiddenConstraint":
        return cls("berge", pattern=pattern)

    @classmethod
    def matching_at_most(cls, s: int) -> "ForbiddenConstraint":
        return cls("matching-atmost", s=s)

    @property
    def label(self) -> str:
        if self.kind in ("k-family", "expansion"):
            return f"{self.kind}(l={self.l})"
        if self.kind == "matching-atmost":
            return f"matching-atmost(s={self.s})"
        if self.kind == "berge":
            assert self.pattern is not None
            return f"berge({self.pattern.n}:{';'.join(','.join(map(str, e)) for e in self.pattern.edge_tuples())})"
        return self.kind

    def violation(self, H: Hypergraph) -> Witness | None:
        """A witness that ``H`` breaks the constraint, or None."""
        if self.kind == "k-family":
            return contains_k_family(H, self.l).witness
        if self.kind == "fano":
            return contains_fano(H).witness
        if self.kind == "expansion":
            return contains_expansion(H, self.l).witness
        if self.kind == "berge":
            return contains_berge(H, self.pattern).witness
        nu, w = matching_number(H, cap=self.s)
        return w if nu > self.s else None

    def satisfied(self, H: Hypergraph) -> bool:
        return self.violation(H) is None

    def allows_addition(self, n: int, r: int, edges: Sequence[int], adj: Sequence[int], e: int) -> bool:
        """Can ``e`` be added to the (feasible) edge list ``edges``?

        ``adj`` is the co-occurrence adjacency of ``edges`` without ``e``.
        Only copies that use ``e`` are searched.
        """
        if self.kind == "matching-atmost":
            if self.s == 0:
                return False
            disjoint = [f for f in edges if not f & e]
            return len(max_matching(disjoint, r, target=self.s)) < self.s
        if self.kind == "fano":
            if r != 3:
                raise DetectorError("Fano constraint needs r = 3")
            return fano_through_edge(n, edges, e) is None
        if self.kind == "berge":
            return contains_berge(Hypergraph.from_masks(n, r, [*edges, e]), self.pattern).witness is None
        verts = vertices_of(e)
        after = list(adj)
        for v in verts:
            after[v] |= e & ~(1 << v)
        if self.kind == "k-family":
            for x, y in combinations(verts, 2):
                if adj[x] >> y & 1:
                    continue
                if first_clique(after, after[x] & after[y], self.l - 1) is not None:
                    return False
            return True
        return not expansion_through_edge(n, r, edges, after, e, self.l)
