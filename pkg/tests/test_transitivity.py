import pytest

from endgraph import graph as G
from endgraph import oracle
from endgraph.families import ROOT, ball, code_of, induced_on, parse_spec
from endgraph.search import isomorphism
from endgraph.transitivity import (AMBIGUOUS, FAILS, HOLDS, NoAnchorFound, anchor_candidate,
                                   check_k_cs_homogeneous, check_k_cs_transitive, check_k_distance_transitive,
                                   connected_k_subgraphs, default_radius, expected_verdict, find_anchor,
                                   find_anchor_addrs, find_spoon_fork_witness, fork, iso_classes, orbit_layer, spoon,
                                   verify_witness)


# -- the neighbourhood oracle ---------------------------------------------------------

def test_oracle_identity_and_translation():
    d = parse_spec("X(2,2;K1)")
    p1 = [((), 0), (((0, 1),), 0)]
    p2 = [((), 0), (((1, 1),), 0)]
    assert oracle.equivalent(d, p1, p1, rho=3)
    assert oracle.equivalent(d, p1, p2, rho=3)
    assert not oracle.equivalent(d, p1, [ROOT], rho=1)


def test_oracle_distinguishes_marked_pairs_in_y():
    y = parse_spec("Y(3)")
    assert not oracle.set_equivalent_pairs(y, (ROOT, ((1,), 0)), (ROOT, ((0,), 0)), rho=2)
    assert oracle.set_equivalent_pairs(y, (ROOT, ((1,), 0)), (ROOT, ((2,), 0)), rho=3)


# -- enumeration --------------------------------------------------------------------

def test_connected_subgraph_examples():
    b = ball(parse_spec("X(2,3;K1)"), 3)
    assert sorted(connected_k_subgraphs(b, 2)) == sorted(b.graph.edges())
    assert connected_k_subgraphs(b, 1) == [(v,) for v in range(b.graph.n)]
    y = ball(parse_spec("Y(3)"), 2)
    triples = connected_k_subgraphs(y, 3)
    tri = [s for s in triples if G.induced_subgraph(y.graph, s).edge_count() == 3]
    assert len(tri) >= 1
    paths = sum(1 for v in range(y.graph.n) for a in y.graph.adj[v] for c in y.graph.adj[v]
                if a < c and not y.graph.has_edge(a, c))
    assert len(triples) == len(tri) + paths


def test_safe_only_respects_margin():
    spec = parse_spec("X(2,3;K1)")
    b = ball(spec, 6)
    for s in connected_k_subgraphs(b, 2, safe_only=True):
        assert all(b.depth[v] <= 3 for v in s)


def test_orbit_layer_counts_match_ball_enumeration():
    # every safe connected set of a ball lands on a layer representative, and every representative is hit
    for text, k in [("X(2,3;K1)", 3), ("Y(3)", 3), ("Z(2,2;K1,K2)", 3), ("X(2,2;K2)", 3)]:
        spec = parse_spec(text)
        b = ball(spec, k + 6)
        codes = {code_of(spec, b.addresses(s)) for s in connected_k_subgraphs(b, k, safe_only=True)}
        assert codes == set(orbit_layer(spec, k))


# -- checkers --------------------------------------------------------------------

@pytest.mark.parametrize("text,k,outcome", [
    ("X(2,3;K1)", 3, HOLDS), ("X(2,2;K3)", 4, FAILS), ("Z(2,2;Kbar2,K3)", 8, HOLDS),
    ("Y(4)", 5, HOLDS), ("Y(4)", 4, FAILS), ("X(2,2;K2)", 4, HOLDS),
])
def test_cs_transitive_examples(text, k, outcome):
    spec = parse_spec(text)
    v = check_k_cs_transitive(spec, k)
    assert v.outcome == outcome
    if outcome == FAILS:
        assert verify_witness(spec, v.witness)
    else:
        assert v.witness is None and all(len(c["codes"]) == 1 for c in v.classes)


def test_k4_witness_is_the_three_one_split():
    spec = parse_spec("X(2,2;K3)")
    v = check_k_cs_transitive(spec, 4, radius=10)
    s1, s2 = v.witness.sets
    assert isomorphism(induced_on(spec, s1), G.complete(4)) is not None
    splits = sorted(tuple(sorted(count_units(s).values())) for s in (s1, s2))
    assert splits == [(1, 3), (2, 2)]


def count_units(s):
    out = {}
    for w, _ in s:
        out[w] = out.get(w, 0) + 1
    return out


@pytest.mark.parametrize("text,k,outcome", [
    ("X(3,2;K1)", 3, HOLDS), ("Y(3)", 3, FAILS), ("Z(2,2;K1,K2)", 4, FAILS), ("X(2,2;K2)", 4, FAILS),
])
def test_cs_homogeneous_examples(text, k, outcome):
    spec = parse_spec(text)
    v = check_k_cs_homogeneous(spec, k)
    assert v.outcome == outcome
    if outcome == FAILS:
        assert verify_witness(spec, v.witness)


@pytest.mark.parametrize("text,k,outcome", [
    ("X(3,2;K1)", 2, HOLDS), ("Y(3)", 1, FAILS), ("X(2,2;K1)", 5, HOLDS), ("X(3,3;K1)", 4, HOLDS),
    ("Z(2,2;K1,K2)", 2, FAILS),
])
def test_distance_transitive_examples(text, k, outcome):
    spec = parse_spec(text)
    v = check_k_distance_transitive(spec, k)
    assert v.outcome == outcome
    if outcome == FAILS:
        assert v.witness.shape == "PathPair" and verify_witness(spec, v.witness)


def test_radius_validation_and_stability():
    spec = parse_spec("X(2,2;K3)")
    with pytest.raises(ValueError):
        check_k_cs_transitive(spec, 4, radius=3)
    for text, k in [("X(2,2;K3)", 4), ("Y(4)", 5), ("Z(2,2;Kbar2,K3)", 5)]:
        spec = parse_spec(text)
        r = default_radius(spec, k)
        a = check_k_cs_transitive(spec, k, r)
        b = check_k_cs_transitive(spec, k, r + 2)
        assert (a.outcome, a.classes) == (b.outcome, b.classes)
        assert b.search_radius == r + 2


def test_verdict_json_is_replayable():
    spec = parse_spec("Y(4)")
    doc = check_k_cs_transitive(spec, 4).to_json(spec)
    assert doc["outcome"] == FAILS
    w = doc["witness"]
    assert len(w["addresses"]) == 2 and len(w["induced_edges"][0]) == len(w["induced_edges"][1])
    assert w["shape"] == "PathPair"


def test_verify_witness_rejects_equivalent_sets():
    spec = parse_spec("X(3,2;K2)")
    w = find_spoon_fork_witness(spec, 4)
    assert verify_witness(spec, w)
    same = type(w)((w.sets[0], w.sets[0]), w.mapping, w.codes, w.shape, w.note)
    assert not verify_witness(spec, same)


# -- spoons, forks, anchors ------------------------------------------------------------

def test_spoon_and_fork_shapes():
    assert spoon(4).edge_count() == 4 and fork(4).edge_count() == 3
    assert fork(5).max_degree() == 3


def test_spoon_fork_examples():
    assert find_spoon_fork_witness(parse_spec("X(3,3;K1)"), 4) is None
    w = find_spoon_fork_witness(parse_spec("X(3,3;Kbar2)"), 4)
    assert w.shape == "Fork" and "3 unit" in w.note and "2 unit" in w.note
    assert find_spoon_fork_witness(parse_spec("X(2,3;K2)"), 4) is None
    w = find_spoon_fork_witness(parse_spec("X(3,2;K2)"), 4)
    assert w.shape == "Spoon" and "3 unit" in w.note
    with pytest.raises(ValueError):
        find_spoon_fork_witness(parse_spec("X(3,2;K2)"), 2)


def test_anchor_examples():
    x = parse_spec("X(2,2;K2)")
    k4 = [((), 0), ((), 1), (((0, 1),), 0), (((0, 1),), 1)]
    assert find_anchor_addrs(x, k4).kind == "WholeComplete"
    z = parse_spec("Z(2,2;K1,K5)")
    s = [((), 0), ((0,), 0), ((0,), 1), ((1,), 0)]
    a = anchor_candidate(z, s)
    assert a.kind == "BlockIntersection" and a.vertices == (((), 0),)
    t = parse_spec("X(2,3;K1)")
    b = ball(t, 12)
    path = [ROOT] + [tuple(((0, 1),) + ((1, 1),) * i) for i in range(5)]
    addrs = [ROOT] + [(w, 0) for w in path[1:]]
    assert find_anchor(t, b.vertices(addrs), b).kind == "LongPath"


def test_anchor_fails_when_isomorphic_copies_split():
    spec = parse_spec("X(2,2;K3)")
    with pytest.raises(NoAnchorFound):
        find_anchor_addrs(spec, [((), 0), ((), 1), ((), 2), (((0, 1),), 0)])


def test_anchor_soundness_on_small_instances():
    for text, k in [("X(2,3;K1)", 4), ("Y(3)", 3), ("X(3,3;K1)", 3)]:
        spec = parse_spec(text)
        for members in iso_classes(spec, k).values():
            for _, rep in members:
                find_anchor_addrs(spec, rep)
        assert check_k_cs_transitive(spec, k).outcome == HOLDS


# -- the predicted verdicts --------------------------------------------------------------

@pytest.mark.parametrize("text,k,want", [
    ("Y(4)", 5, HOLDS), ("Y(4)", 4, FAILS), ("X(2,2;K3)", 4, FAILS), ("X(2,2;K2)", 4, HOLDS),
    ("X(2,3;K2)", 4, AMBIGUOUS), ("X(3,3;K2)", 4, FAILS), ("Z(2,2;Kbar2,K3)", 8, HOLDS),
    ("Z(2,2;Kbar3,K3)", 6, FAILS), ("Z(2,2;Kbar2,K3)", 5, FAILS), ("X(2,2;C5)", 10, HOLDS),
    ("X(2,2;C5)", 9, FAILS), ("X(3,3;K1)", 5, HOLDS),
])
def test_expected_verdicts(text, k, want):
    assert expected_verdict(parse_spec(text), k) == want


@pytest.mark.parametrize("text,k", [
    ("X(2,2;K2)", 5), ("X(2,2;Kbar2)", 4), ("Y(3)", 4), ("Y(3)", 3), ("Z(2,2;K1,K2)", 4), ("Z(2,2;K1,K2)", 5),
    ("Z(2,3;K1,K3)", 6), ("Z(2,2;Kbar2,K2)", 6), ("X(2,2;Kpart2x2)", 7), ("X(2,2;Kpart2x2)", 6),
    ("X(3,3;Kbar2)", 4), ("X(2,2;C5)", 9), ("X(3,3;K2)", 4),
])
def test_checker_agrees_with_prediction(text, k):
    spec = parse_spec(text)
    want = expected_verdict(spec, k)
    assert want != AMBIGUOUS
    assert check_k_cs_transitive(spec, k).outcome == want


@pytest.mark.parametrize("text,k", [("X(2,2;K2)", 3), ("X(2,2;K3)", 5), ("X(2,2;Kbar2)", 5)])
def test_printed_block_bounds_are_not_sharp(text, k):
    # the printed bounds n <= k/2 and m <= k/3 reject these, yet the checker finds them k-CS-transitive
    spec = parse_spec(text)
    assert expected_verdict(spec, k) == FAILS
    assert check_k_cs_transitive(spec, k).outcome == HOLDS


@pytest.mark.parametrize("text,k", [("X(2,2;K3)", 4), ("X(2,2;K4)", 6), ("X(2,2;Kbar2)", 4), ("X(2,2;Kbar3)", 7)])
def test_block_bounds_just_outside_fail(text, k):
    spec = parse_spec(text)
    v = check_k_cs_transitive(spec, k)
    assert v.outcome == FAILS and verify_witness(spec, v.witness)
