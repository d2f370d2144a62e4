import math
from itertools import combinations, permutations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from endgraph import graph as G
from endgraph.graph import Graph, GraphError, InvalidVertexSet, NotSeparable
from endgraph.search import (all_isomorphisms, automorphism_generators, automorphism_group, canonical_form,
                             certificate, extends, isomorphism, orbits)
from endgraph.separators import max_disjoint_paths, min_separators, separation_order


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


# -- basic graph operations ---------------------------------------------------------

def test_induced_subgraph_examples():
    assert G.induced_subgraph(G.cycle(5), range(5)) == G.cycle(5)
    assert G.induced_subgraph(G.complete(4), [0, 2, 3]) == G.complete(3)
    lk = G.line_k33()
    nb = G.induced_subgraph(lk, sorted(lk.adj[0]))
    assert nb.n == 4 and nb.edge_count() == 2 and nb.max_degree() == 1


def test_induced_subgraph_rejects_bad_index():
    with pytest.raises(InvalidVertexSet):
        G.induced_subgraph(G.cycle(5), [0, 5])


def test_distances_examples():
    assert G.distances(G.complete(3), 0) == [0, 1, 1]
    assert G.distances(G.path(4), 0) == [0, 1, 2, 3]
    assert G.distances(G.disjoint_completes(2, 2), 0) == [0, 1, math.inf, math.inf]


def test_common_neighborhood_examples():
    assert G.common_neighborhood(G.complete(4), [0, 1]) == (2, 3)
    assert G.common_neighborhood(G.cycle(5), [0]) == (1, 4)
    assert len(G.common_neighborhood(G.cycle(5), [0, 2])) == 1
    assert G.common_neighborhood(G.cycle(5), []) == tuple(range(5))


def test_text_round_trip_and_validation():
    g = G.petersen()
    assert Graph.from_text(g.to_text()) == g
    assert g.to_text().splitlines()[0] == "10 15"
    with pytest.raises(GraphError):
        Graph.from_text("3 1\n2 1\n")
    with pytest.raises(GraphError):
        Graph.from_text("3 2\n0 1\n")


def test_dot_export_lists_every_vertex():
    dot = G.cycle(5).to_dot()
    assert dot.startswith("graph G {") and dot.count("--") == 5


# -- isomorphism and automorphisms -------------------------------------------------

def test_isomorphism_examples():
    m = isomorphism(G.cycle(5), G.cycle(5))
    assert m is not None
    assert isomorphism(G.path(3), G.complete(3)) is None
    k33_minus_matching = Graph(6, [(0, 4), (0, 5), (1, 3), (1, 5), (2, 3), (2, 4)])
    m = isomorphism(G.cycle(6), k33_minus_matching)
    assert m is not None
    assert all(k33_minus_matching.has_edge(m[u], m[v]) for u, v in G.cycle(6).edges())


@pytest.mark.parametrize("g,size", [(G.cycle(5), 10), (G.complete(4), 24), (G.line_k33(), 72),
                                    (G.petersen(), 120), (G.path(4), 2)])
def test_automorphism_group_sizes(g, size):
    group = automorphism_group(g)
    assert len(group) == size
    _, order = automorphism_generators(g)
    assert order == size
    for p in group:
        for u, v in combinations(range(g.n), 2):
            assert g.has_edge(u, v) == g.has_edge(p[u], p[v])


def test_orbits_of_path():
    gens, _ = automorphism_generators(G.path(4))
    assert orbits(4, gens) == [[0, 3], [1, 2]]


def test_extends_on_c6():
    c6 = G.cycle(6)
    assert extends(c6, [0, 1], [1, 2])
    assert not extends(c6, [0, 3], [0, 2])


@settings(max_examples=60, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_certificate_is_permutation_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges()])
    assert certificate(g) == certificate(h)
    m = isomorphism(g, h)
    assert m is not None
    assert isomorphism(h, g) is not None
    assert all(h.has_edge(m[u], m[v]) for u, v in g.edges())


@settings(max_examples=60, deadline=None)
@given(graphs(6), graphs(6))
def test_isomorphism_agrees_with_networkx(g1, g2):
    ours = isomorphism(g1, g2) is not None
    assert ours == nx.is_isomorphic(to_nx(g1), to_nx(g2))
    assert (canonical_form(g1)[0] == canonical_form(g2)[0]) == ours


@settings(max_examples=40, deadline=None)
@given(graphs(6))
def test_group_order_agrees_with_brute_force(g):
    count = sum(1 for p in permutations(range(g.n))
                if all(g.has_edge(p[u], p[v]) for u, v in g.edges()))
    assert len(automorphism_group(g)) == count
    assert len(all_isomorphisms(g, g)) == count


@settings(max_examples=40, deadline=None)
@given(graphs(6), st.data())
def test_common_neighbourhood_constant_on_orbits(g, data):
    size = data.draw(st.integers(0, g.n))
    x = tuple(range(size))
    for p in automorphism_group(g):
        assert len(G.common_neighborhood(g, x)) == len(G.common_neighborhood(g, [p[v] for v in x]))


# -- separators ---------------------------------------------------------------------

def test_min_separators_examples():
    assert min_separators(G.path(5), [0], [4]) == (1, [(1,), (2,), (3,)])
    assert min_separators(G.cycle(4), [0], [2]) == (2, [(1, 3)])
    order, seps = min_separators(G.cycle(5), [0], [2])
    assert order == 2 and len(seps) == 2


def test_min_separators_rejects_adjacent_sides():
    with pytest.raises(NotSeparable):
        min_separators(G.path(3), [0], [1])
    with pytest.raises(NotSeparable):
        min_separators(G.path(3), [0], [0])


def _brute_separators(g, a, b):
    rest = [v for v in range(g.n) if v != a and v != b]
    for size in range(len(rest) + 1):
        found = []
        for s in combinations(rest, size):
            keep = [v for v in range(g.n) if v not in s]
            if not any(b in c and a in c for c in g.components(keep)):
                found.append(s)
        if found:
            return size, found
    return None


@settings(max_examples=80, deadline=None)
@given(graphs(8), st.data())
def test_min_separators_match_brute_force_and_menger(g, data):
    pairs = [(u, v) for u, v in combinations(range(g.n), 2) if not g.has_edge(u, v)]
    if not pairs:
        return
    a, b = data.draw(st.sampled_from(pairs))
    want = _brute_separators(g, a, b)
    order, seps = min_separators(g, [a], [b])
    assert (order, sorted(seps)) == (want[0], sorted(want[1]))
    assert max_disjoint_paths(g, [a], [b]) == order
    assert separation_order(g, [a], [b]) == order
