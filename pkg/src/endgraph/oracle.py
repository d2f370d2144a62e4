"""Independent equivalence oracle for finite vertex sets of the families.

Grows the radius-``rho`` neighbourhood of a set in the infinite graph, colours
every vertex by its mark (membership in the set, or an explicit label) and its
distance to the set, and asks networkx (VF2++) for a colour preserving
isomorphism.  An automorphism of G mapping one set to the other restricts to
such an isomorphism, so a negative answer proves inequivalence; a positive
answer is evidence at radius ``rho``.

Nothing here uses footprints, canonical codes or the internal search module.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping

import networkx as nx

from .families import Address, FamilySpec, neighbors


def neighbourhood(spec: FamilySpec, s: Iterable[Address], rho: int,
                  marks: Mapping[Address, object] | None = None) -> nx.Graph:
    s = sorted(set(s))
    dist = {a: 0 for a in s}
    q = deque(s)
    while q:
        a = q.popleft()
        if dist[a] == rho:
            continue
        for b in neighbors(spec, a):
            if b not in dist:
                dist[b] = dist[a] + 1
                q.append(b)
    g = nx.Graph()
    for a, d in dist.items():
        mark = (marks or {}).get(a, 1) if d == 0 else 0
        g.add_node(a, c=f"{mark}|{d}")
    for a in dist:
        for b in neighbors(spec, a):
            if b in dist and a < b:
                g.add_edge(a, b)
    return g


def equivalent(spec: FamilySpec, s1: Iterable[Address], s2: Iterable[Address], rho: int = 2,
               marks1: Mapping[Address, object] | None = None,
               marks2: Mapping[Address, object] | None = None) -> bool:
    """False: no automorphism maps ``s1`` onto ``s2`` (respecting marks).  True: not refuted at ``rho``."""
    s1, s2 = sorted(set(s1)), sorted(set(s2))
    if len(s1) != len(s2):
        return False
    g1 = neighbourhood(spec, s1, rho, marks1)
    g2 = neighbourhood(spec, s2, rho, marks2)
    if g1.number_of_nodes() != g2.number_of_nodes() or g1.number_of_edges() != g2.number_of_edges():
        return False
    return nx.vf2pp_is_isomorphic(g1, g2, node_label="c")


def set_equivalent_pairs(spec: FamilySpec, p1: tuple[Address, Address], p2: tuple[Address, Address],
                         rho: int = 2) -> bool:
    """Whether some automorphism maps the ordered pair ``p1`` to ``p2`` (refutation oracle)."""
    def marks(p):
        if p[0] == p[1]:
            return {p[0]: 3}
        return {p[0]: 1, p[1]: 2}
    return equivalent(spec, set(p1), set(p2), rho, marks(p1), marks(p2))


# -- separator order oracle ------------------------------------------------------

def _boundary_components(g: nx.Graph, removed: set, boundary: set) -> int:
    h = g.subgraph(v for v in g if v not in removed)
    return sum(1 for c in nx.connected_components(h) if boundary & c)


def interior_separation_order(graph, boundary, interior) -> int | None:
    """Least size of an interior vertex set leaving two components that meet the boundary.

    Uses networkx max flow on a vertex-split digraph (unit capacity on interior
    vertices only); a single-vertex scan handles order 1 quickly.
    """
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edges())
    boundary = set(boundary)
    interior = set(interior)
    for v in sorted(interior):
        if _boundary_components(g, {v}, boundary) >= 2:
            return 1
    big = graph.n + 1
    d = nx.DiGraph()
    for v in g:
        d.add_edge((v, 0), (v, 1), capacity=1 if v in interior else big)
        for u in g[v]:
            d.add_edge((v, 1), (u, 0), capacity=big)
    ordered = sorted(boundary)
    u = ordered[0]
    best = None
    for w in ordered[1:]:
        if g.has_edge(u, w):
            continue
        value = nx.maximum_flow_value(d, (u, 1), (w, 0))
        if value < big and (best is None or value < best):
            best = value
    return best


def separates_boundary(graph, sep, boundary) -> bool:
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edges())
    return _boundary_components(g, set(sep), set(boundary)) >= 2
