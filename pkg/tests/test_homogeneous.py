from itertools import combinations, permutations

import pytest

from endgraph import graph as G
from endgraph.families import parse_block
from endgraph.graph import SizeLimitExceeded
from endgraph.homogeneous import (EParams, all_graphs, catalog_name, classify_homogeneous, connectivity_threshold,
                                  enumerate_class_E, in_class_E, is_comb_homogeneous, is_homogeneous,
                                  is_l_s_transitive)
from endgraph.search import isomorphism


def brute_homogeneous(g):
    """Literal definition: every isomorphism between induced subgraphs extends."""
    autos = [p for p in permutations(range(g.n)) if all(g.has_edge(p[u], p[v]) for u, v in g.edges())]
    for size in range(1, g.n + 1):
        for s in combinations(range(g.n), size):
            for t in combinations(range(g.n), size):
                for img in permutations(t):
                    if all(g.has_edge(s[i], s[j]) == g.has_edge(img[i], img[j])
                           for i, j in combinations(range(size), 2)):
                        if not any(all(p[s[i]] == img[i] for i in range(size)) for p in autos):
                            return False
    return True


def test_l_s_transitive_examples():
    assert is_l_s_transitive(G.cycle(5), 2)
    assert not is_l_s_transitive(G.path(4), 1)
    assert is_l_s_transitive(G.line_k33(), 4)


def test_comb_homogeneous_examples():
    assert is_comb_homogeneous(G.complete(4))
    assert is_comb_homogeneous(G.cycle(5))
    assert not is_comb_homogeneous(G.path(4))


def test_homogeneous_examples():
    assert is_homogeneous(G.complete_multipartite(2, 2))
    assert not is_homogeneous(G.cycle(6))
    assert is_homogeneous(G.line_k33())


def test_classification_examples():
    assert str(classify_homogeneous(G.disjoint_completes(2, 3))) == "DisjointCompletes(2,3)"
    assert classify_homogeneous(G.cycle(5)).tag == "Pentagon"
    assert classify_homogeneous(G.petersen()).tag == "NotHomogeneous"
    assert catalog_name(G.complete_multipartite(2, 2)) == "Kpart2x2"
    assert catalog_name(G.empty(3)) == "Kbar3"
    assert catalog_name(G.line_k33()) == "LK33"


@pytest.mark.parametrize("n", range(1, 6))
def test_homogeneity_deciders_agree_with_literal_definition(n):
    for g in all_graphs(n):
        assert is_homogeneous(g) == brute_homogeneous(g), g.to_text()


def test_graph_counts_match_known_sequence():
    assert [len(all_graphs(n)) for n in range(1, 7)] == [1, 2, 4, 11, 34, 156]


def test_size_cap():
    with pytest.raises(SizeLimitExceeded):
        is_homogeneous(G.cycle(11))


def test_class_e_examples():
    assert in_class_E(G.cycle(5), EParams(10, 2, 4))
    assert not in_class_E(G.complete(3), EParams(10, 4, 4))
    assert not in_class_E(G.petersen(), EParams(15, 4, 6))
    names = [name for name, _ in enumerate_class_E(EParams(10, 2, 4), 5)]
    assert sorted(names) == ["C5", "Kpart2x2"]
    assert enumerate_class_E(EParams(3, 1, 1), 5) == []
    assert "LK33" in [name for name, _ in enumerate_class_E(EParams(15, 4, 6), 9)]


def test_e_params_validation():
    with pytest.raises(ValueError):
        EParams(2, 1, 1)
    with pytest.raises(SizeLimitExceeded):
        enumerate_class_E(EParams(10, 2, 4), 10)


def test_class_e_members_are_l_s_transitive_below_k():
    for k, m, n in [(10, 2, 4), (15, 4, 6), (8, 3, 5)]:
        for _, g in enumerate_class_E(EParams(k, m, n), 9):
            for l in range(1, min(k - 1, g.n) + 1):
                assert is_l_s_transitive(g, l)


def test_connectivity_thresholds():
    assert connectivity_threshold(G.cycle(5)) == 4
    assert connectivity_threshold(G.complete_multipartite(2, 2)) == 3
    assert connectivity_threshold(G.line_k33()) == 6


def test_catalog_names_round_trip():
    for _, g in enumerate_class_E(EParams(15, 4, 6), 9):
        name = catalog_name(g)
        assert isomorphism(parse_block(name), g) is not None
