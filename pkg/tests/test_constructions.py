from __future__ import annotations

from itertools import combinations

import pytest

from turanlab import constructions as C
from turanlab.detectors import matching_number
from turanlab.hypercore import co_occurrence, induced, is_isomorphic


def test_turan_graph_examples():
    assert len(C.turan_graph(4, 2)) == 4
    K23 = C.turan_graph(5, 2)
    assert len(K23) == 6 and K23.sizes == [3, 2]
    assert C.turan_graph(3, 3).hypergraph.edge_tuples() == [(0, 1), (0, 2), (1, 2)]


def test_generalized_turan_examples():
    assert len(C.generalized_turan(6, 3, 3)) == 8
    T = C.generalized_turan(7, 3, 3)
    assert T.sizes == [3, 2, 2] and len(T) == 12
    for n in range(0, 12):
        for l in range(2, 6):
            assert C.generalized_turan(n, l, 2).hypergraph == C.turan_graph(n, l).hypergraph
    with pytest.raises(C.ConstructionError):
        C.generalized_turan(6, 2, 3)


def test_alon_frankl_examples():
    star = C.alon_frankl_graph(5, 2, 1).hypergraph
    assert star.edge_tuples() == [(0, 1), (0, 2), (0, 3), (0, 4)]
    G = C.alon_frankl_graph(6, 3, 2)
    assert sorted(G.sizes) == [1, 1, 4] and len(G) == 9
    assert len(C.alon_frankl_graph(7, 2, 0)) == 0
    with pytest.raises(C.ConstructionError):
        C.alon_frankl_graph(5, 1, 1)


def test_main_extremal_examples():
    assert len(C.main_extremal(7, 3, 1, 3)) == 9
    assert len(C.main_extremal(12, 3, 2, 3)) == 50
    assert len(C.main_extremal(8, 4, 1, 4)) == 12
    with pytest.raises(C.ConstructionError):
        C.main_extremal(8, 2, 1, 3)
    with pytest.raises(C.ConstructionError):
        C.main_extremal(8, 3, 0, 3)
    with pytest.raises(C.ConstructionError):
        C.main_extremal(4, 3, 2, 3)


@pytest.mark.parametrize("n,l,s,r", [(9, 3, 1, 3), (12, 3, 2, 3), (13, 4, 2, 3), (11, 4, 1, 4), (14, 5, 3, 4)])
def test_main_extremal_structure(n, l, s, r):
    P = C.main_extremal(n, l, s, r)
    v0 = set(P.parts[0])
    assert P.parts[0] == tuple(range(s))
    for e in P.hypergraph.edge_tuples():
        assert len(v0 & set(e)) == 1
        for part in P.parts[1:]:
            assert len(set(part) & set(e)) <= 1
    U = [v for p in P.parts[1:] for v in p]
    assert len(induced(P.hypergraph, U)) == 0


def test_fano_plane_structure():
    F = C.fano_plane()
    assert len(F) == 7
    assert F.degrees == (3,) * 7
    edges = [set(e) for e in F.edge_tuples()]
    for x, y in combinations(range(7), 2):
        assert sum({x, y} <= e for e in edges) == 1
    for a, b in combinations(edges, 2):
        assert len(a & b) == 1
    assert len(co_occurrence(F).pairs()) == 21


def test_fano_lines_match_one_based_listing():
    listing = ["123", "345", "561", "174", "275", "376", "246"]
    expected = {tuple(sorted(int(c) - 1 for c in line)) for line in listing}
    assert set(C.fano_plane().edge_tuples()) == expected


def test_fano_extremal_examples():
    assert len(C.fano_extremal(10, 2)) == 64
    assert len(C.fano_extremal(6, 0)) == 0
    assert len(C.fano_extremal(5, 1)) == 6
    P = C.fano_extremal(9, 3)
    Y = P.parts[1]
    assert len(induced(P.hypergraph, Y)) == 0
    X = set(P.parts[0])
    assert all(1 <= len(X & set(e)) <= 2 for e in P.hypergraph.edge_tuples())


def test_expansion_examples():
    H = C.expansion(2, 3)
    assert H.n == 6 and H.edge_tuples() == [(0, 1, 3), (0, 2, 4), (1, 2, 5)]
    H = C.expansion(3, 3)
    assert H.n == 10 and len(H) == 6
    for l in range(1, 6):
        assert C.expansion(l, 2) == C.complete_r_graph(l + 1, 2)


def test_frankl_star_examples():
    assert len(C.frankl_star(6, 3, 1)) == 10
    assert len(C.frankl_star(6, 3, 0)) == 0
    assert len(C.frankl_star(5, 3, 5)) == 10


def test_matching_and_complete():
    M = C.matching_hypergraph(3, 3)
    assert M.n == 9 and len(M) == 3 and matching_number(M)[0] == 3
    assert len(C.complete_r_graph(5, 3)) == 10
    assert len(C.matching_hypergraph(0, 4)) == 0


def test_conjecture_witness_examples():
    P = C.conjecture_witness(12, 3, 2, 3)
    assert len(P) == 51
    extra = set(P.hypergraph.edge_tuples()) - set(C.main_extremal(12, 3, 2, 3).hypergraph.edge_tuples())
    assert extra == {(0, 1, 2)}
    assert matching_number(P.hypergraph)[0] == 2
    with pytest.raises(C.ConstructionError):
        C.conjecture_witness(12, 3, 1, 3)
    with pytest.raises(C.ConstructionError):
        C.conjecture_witness(12, 4, 2, 3)


def test_balanced_sizes_put_larger_parts_first():
    assert C.balanced_sizes(7, 3) == [3, 2, 2]
    assert C.balanced_sizes(8, 3) == [3, 3, 2]
    assert C.balanced_sizes(0, 0) == []


def test_dispatch_and_errors():
    H, parts = C.build("gen-turan", n=7, l=3, r=3)
    assert len(H) == 12 and len(parts) == 3
    H, parts = C.build("fano")
    assert parts is None and len(H) == 7
    with pytest.raises(C.ConstructionError):
        C.build("nope", n=3)
    with pytest.raises(C.ConstructionError):
        C.build("turan", n=3)
    with pytest.raises(C.ConstructionError):
        C.build("turan", n=-1, l=2)
    for kind, (_, names) in C.KINDS.items():
        assert set(names) <= {"n", "l", "s", "r", "k"}, kind


def test_every_generator_is_valid_hypergraph():
    # the constructor validates uniformity and distinctness
    hs = [
        C.turan_graph(9, 4).hypergraph,
        C.generalized_turan(10, 4, 3).hypergraph,
        C.alon_frankl_graph(9, 4, 3).hypergraph,
        C.main_extremal(11, 4, 2, 3).hypergraph,
        C.fano_extremal(9, 2).hypergraph,
        C.expansion(4, 4),
        C.frankl_star(8, 4, 2),
        C.conjecture_witness(11, 3, 2, 3).hypergraph,
    ]
    for H in hs:
        assert len(set(H.edges)) == len(H.edges)
        assert all(bin(e).count("1") == H.r for e in H.edges)


def test_extra_edge_choice_up_to_isomorphism():
    # with balanced parts every choice is equivalent; with unequal parts the
    # part receiving the extra vertex matters
    base = C.main_extremal(8, 3, 2, 3)
    ref = C.conjecture_witness(8, 3, 2, 3).hypergraph
    for u in range(2, 8):
        H = base.hypergraph.with_edges((*base.hypergraph.edges, 0b11 | (1 << u)))
        assert is_isomorphic(H, ref)
    base = C.main_extremal(7, 3, 2, 3)
    big, small = base.parts[1], base.parts[2]
    ref = C.conjecture_witness(7, 3, 2, 3).hypergraph
    for u in big:
        assert is_isomorphic(base.hypergraph.with_edges((*base.hypergraph.edges, 0b11 | (1 << u))), ref)
    for u in small:
        assert not is_isomorphic(base.hypergraph.with_edges((*base.hypergraph.edges, 0b11 | (1 << u))), ref)
