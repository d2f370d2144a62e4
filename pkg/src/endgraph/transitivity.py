"""Exact transitivity deciders for the families, anchors and spoon/fork search.

The checkers never materialise a ball.  Connected k-sets are enumerated up to
Aut(G) one vertex at a time: starting from one vertex per vertex orbit, every
orbit representative of size i is extended by each of its outside neighbours
and the results are deduplicated by canonical code.  Every connected set has
a vertex whose removal leaves it connected, so every orbit of size i+1 is
reached.  All representatives stay within distance k-1 of the seeds, which is
the safe region of any ball of radius >= k + blockDiameter + 2.
"""
from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from . import graph as G
from . import oracle
from .families import (Address, Ball, FamilySpec, XFamily, YFamily, block_diameter, code_of, format_address,
                       induced_on, neighbors, node_type, safety_margin, seeds, unit_block, unit_of, _check_safe,
                       _neighbors)
from .graph import Graph
from .homogeneous import (connectivity_threshold, graph_cert, is_homogeneous, max_common_nonadjacent)
from .search import automorphism_generators, isomorphism

HOLDS, FAILS, AMBIGUOUS = "Holds", "Fails", "PaperAmbiguous"


class NoAnchorFound(ValueError):
    pass


def default_radius(spec: FamilySpec, k: int) -> int:
    return k * (block_diameter(spec) + 1) + 4


def _check_radius(spec: FamilySpec, k: int, radius: int | None) -> int:
    if k < 1:
        raise ValueError("k must be at least 1")
    r = default_radius(spec, k) if radius is None else radius
    low = k + block_diameter(spec) + 2
    if r < low:
        raise ValueError(f"radius {r} too small for k={k}; need at least {low}")
    return r


def short(code: bytes) -> str:
    return hashlib.sha256(code).hexdigest()[:16]


# -- verdicts ----------------------------------------------------------------------

@dataclass
class Witness:
    sets: tuple[tuple[Address, ...], tuple[Address, ...]]
    mapping: tuple[tuple[Address, Address], ...]
    codes: tuple[bytes, bytes]
    shape: str = "Generic"
    note: str = ""
    marks: tuple[dict, dict] | None = None

    def to_json(self, spec: FamilySpec) -> dict:
        out = {
            "shape": self.shape,
            "note": self.note,
            "sets": [[format_address(spec, a) for a in s] for s in self.sets],
            "addresses": [[_jsonable(a) for a in s] for s in self.sets],
            "induced_edges": [_edge_list(spec, s) for s in self.sets],
            "isomorphism": [[format_address(spec, a), format_address(spec, b)] for a, b in self.mapping],
            "codes": [c.decode() for c in self.codes],
        }
        if self.marks is not None:
            out["marks"] = [{format_address(spec, a): v for a, v in sorted(m.items())} for m in self.marks]
        return out


@dataclass
class Verdict:
    property: str
    k: int
    outcome: str
    search_radius: int
    spec_text: str
    classes: list[dict] = field(default_factory=list)
    witness: Witness | None = None
    orbits: int = 0

    @property
    def holds(self) -> bool:
        return self.outcome == HOLDS

    def to_json(self, spec: FamilySpec) -> dict:
        return {
            "spec": self.spec_text,
            "property": self.property,
            "k": self.k,
            "outcome": self.outcome,
            "searchRadius": self.search_radius,
            "orbits": self.orbits,
            "classes": self.classes,
            "witness": None if self.witness is None else self.witness.to_json(spec),
        }


def _jsonable(a):
    if isinstance(a, tuple):
        return [_jsonable(x) for x in a]
    return a


def _edge_list(spec: FamilySpec, s: Sequence[Address]) -> list:
    g = induced_on(spec, s)
    return [[format_address(spec, g.labels[u]), format_address(spec, g.labels[v])] for u, v in g.edges()]


# -- orbit enumeration ---------------------------------------------------------------

@lru_cache(maxsize=64)
def orbit_layer(spec: FamilySpec, size: int) -> dict[bytes, tuple[Address, ...]]:
    """One representative (sorted addresses) per Aut(G)-orbit of connected ``size``-sets, keyed by code."""
    if size < 1:
        raise ValueError("size must be at least 1")
    if size == 1:
        out = {}
        for a in seeds(spec):
            out.setdefault(code_of(spec, [a]), (a,))
        return dict(sorted(out.items()))
    out: dict[bytes, tuple[Address, ...]] = {}
    for rep in orbit_layer(spec, size - 1).values():
        inside = set(rep)
        frontier = sorted({b for a in rep for b in _neighbors(spec, a)} - inside)
        for v in frontier:
            s = tuple(sorted(inside | {v}))
            c = code_of(spec, s)
            if c not in out:
                out[c] = s
    return dict(sorted(out.items()))


def iso_classes(spec: FamilySpec, k: int) -> dict[tuple, list[tuple[bytes, tuple[Address, ...]]]]:
    """Orbit representatives of connected k-sets grouped by isomorphism type of the induced subgraph."""
    groups: dict[tuple, list] = {}
    for c, rep in orbit_layer(spec, k).items():
        groups.setdefault(graph_cert(_plain(induced_on(spec, rep))), []).append((c, rep))
    return dict(sorted(groups.items()))


def _plain(g: Graph) -> Graph:
    return Graph(g.n, g.edges())


def _mapping(spec: FamilySpec, s1, s2) -> tuple:
    g1, g2 = induced_on(spec, s1), induced_on(spec, s2)
    m = isomorphism(_plain(g1), _plain(g2))
    if m is None:
        raise AssertionError("grouped sets must induce isomorphic subgraphs")
    return tuple((g1.labels[u], g2.labels[m[u]]) for u in range(g1.n))


def _class_table(spec: FamilySpec, groups) -> list[dict]:
    table = []
    for cert, members in groups.items():
        n, _, edges = cert
        table.append({"vertices": n, "edges": [list(e) for e in edges],
                      "codes": [short(c) for c, _ in members]})
    return table


def check_k_cs_transitive(spec: FamilySpec, k: int, radius: int | None = None) -> Verdict:
    """Holds iff isomorphic connected induced k-subgraphs always lie in one Aut(G)-orbit."""
    r = _check_radius(spec, k, radius)
    groups = iso_classes(spec, k)
    v = Verdict("kCS", k, HOLDS, r, spec.text, _class_table(spec, groups), orbits=len(orbit_layer(spec, k)))
    for members in groups.values():
        if len(members) > 1:
            (c1, s1), (c2, s2) = members[0], members[1]
            v.outcome = FAILS
            v.witness = Witness((s1, s2), _mapping(spec, s1, s2), (c1, c2), _shape(spec, s1),
                                "isomorphic induced subgraphs with different footprint codes")
            break
    return v


def _pointwise(s: Sequence[Address], images: Sequence[Address]) -> tuple[dict, dict]:
    return {a: i for i, a in enumerate(s)}, {b: i for i, b in enumerate(images)}


def check_k_cs_homogeneous(spec: FamilySpec, k: int, radius: int | None = None) -> Verdict:
    """Holds iff every isomorphism between connected induced k-subgraphs extends.

    Equivalent to k-CS-transitivity plus: for one set per orbit, every
    automorphism of the induced subgraph extends (checked on generators).
    """
    base = check_k_cs_transitive(spec, k, radius)
    base.property = "kCSHom"
    if not base.holds:
        return base
    for members in iso_classes(spec, k).values():
        c, s = members[0]
        g = induced_on(spec, s)
        gens, _ = automorphism_generators(_plain(g))
        for p in gens:
            images = [g.labels[p[i]] for i in range(g.n)]
            m1, m2 = _pointwise(list(g.labels), images)
            c1, c2 = code_of(spec, s, m1), code_of(spec, s, m2)
            if c1 != c2:
                base.outcome = FAILS
                base.witness = Witness((s, s), tuple(zip(g.labels, images)), (c1, c2), _shape(spec, s),
                                       "automorphism of the induced subgraph that does not extend", (m1, m2))
                return base
    return base


def check_k_distance_transitive(spec: FamilySpec, k: int, radius: int | None = None) -> Verdict:
    """Holds iff for each d <= k all ordered pairs at distance d form one orbit (d = 0 included)."""
    r = _check_radius(spec, k, radius)
    by_d: dict[int, dict[bytes, tuple[Address, Address]]] = {}
    for x in seeds(spec):
        dist = {x: 0}
        q = deque([x])
        while q:
            a = q.popleft()
            if dist[a] == k:
                continue
            for b in _neighbors(spec, a):
                if b not in dist:
                    dist[b] = dist[a] + 1
                    q.append(b)
        for y in sorted(dist):
            c = code_of(spec, {x, y}, _pair_marks(x, y))
            by_d.setdefault(dist[y], {}).setdefault(c, (x, y))
    table = [{"distance": d, "codes": [short(c) for c in sorted(cs)]} for d, cs in sorted(by_d.items())]
    v = Verdict("kDist", k, HOLDS, r, spec.text, table, orbits=sum(len(c) for c in by_d.values()))
    for d, cs in sorted(by_d.items()):
        if len(cs) > 1:
            (c1, p1), (c2, p2) = sorted(cs.items())[:2]
            v.outcome = FAILS
            v.witness = Witness((p1, p2), tuple(zip(p1, p2)), (c1, c2), "PathPair",
                                f"ordered pairs at distance {d} in different orbits",
                                (_pair_marks(*p1), _pair_marks(*p2)))
            break
    return v


def _pair_marks(x, y) -> dict:
    return {x: 3} if x == y else {x: 1, y: 2}


# -- witness re-verification ----------------------------------------------------------

def verify_witness(spec: FamilySpec, w: Witness, max_rho: int = 3) -> bool:
    """Independent check: the sets induce isomorphic subgraphs and the oracle refutes equivalence."""
    s1, s2 = w.sets
    if w.marks is None:
        g1, g2 = _plain(induced_on(spec, s1)), _plain(induced_on(spec, s2))
        if isomorphism(g1, g2) is None:
            return False
        m1 = m2 = None
    else:
        m1, m2 = w.marks
        if len(s1) == len(s2) and s1 == s2 and len(m1) == len(s1):
            # pointwise marks: the map must be an automorphism of the induced subgraph
            g = induced_on(spec, s1)
            inv = {v: a for a, v in m2.items()}
            f = {a: inv[m1[a]] for a in s1}
            for u, x in g.edges():
                if not f[g.labels[x]] in neighbors(spec, f[g.labels[u]]):
                    return False
    for rho in range(1, max_rho + 1):
        if not oracle.equivalent(spec, s1, s2, rho, m1, m2):
            return True
    return False


# -- shapes, spoons and forks ----------------------------------------------------------

def spoon(k: int) -> Graph:
    """Triangle 0,1,2 with a path hanging from vertex 2; k vertices."""
    return Graph(k, [(0, 1), (0, 2), (1, 2)] + [(i, i + 1) for i in range(2, k - 1)])


def fork(k: int) -> Graph:
    """Handle path 0..k-3 with two non-adjacent prongs at vertex k-3; k vertices."""
    return Graph(k, [(i, i + 1) for i in range(k - 3)] + [(k - 3, k - 2), (k - 3, k - 1)])


def _shape(spec: FamilySpec, s) -> str:
    k = len(s)
    if k < 3:
        return "Generic"
    cert = graph_cert(_plain(induced_on(spec, s)))
    if cert == graph_cert(spoon(k)):
        return "Spoon"
    if cert == graph_cert(fork(k)):
        return "Fork"
    if cert == graph_cert(G.path(k)):
        return "PathPair"
    return "Generic"


def _key_vertices(spec: FamilySpec, s, shape: str) -> list[Address]:
    g = induced_on(spec, s)
    if shape == "Spoon":
        tri = [v for v in range(g.n) for a, b in combinations(sorted(g.adj[v]), 2) if g.has_edge(a, b)]
        return sorted({g.labels[v] for v in tri})
    ends = [v for v in range(g.n) if g.degree(v) == 1]
    centre = [v for v in range(g.n) if g.degree(v) == 3]
    if centre:
        # the prongs are the leaves at the joint (all three when k = 4)
        return sorted(g.labels[v] for v in g.adj[centre[0]] if v in ends)
    # k = 3: the fork is a path, prongs are its ends
    return sorted(g.labels[v] for v in ends)


def pokes(spec: FamilySpec, s, shape: str) -> str:
    """Which structural units the triangle (spoon) or the prongs (fork) lie in."""
    units = sorted({unit_of(spec, a) for a in _key_vertices(spec, s, shape)}, key=repr)
    types = [node_type(spec, u) for u in units]
    part = "triangle" if shape == "Spoon" else "prongs"
    return f"{part} meets {len(units)} unit(s) of type {'/'.join(types)}"


def find_spoon_fork_witness(spec: FamilySpec, k: int, radius: int | None = None) -> Witness | None:
    if k < 3:
        raise ValueError("spoons and forks need k >= 3")
    _check_radius(spec, k, radius)
    for shape, g in (("Spoon", spoon(k)), ("Fork", fork(k))):
        members = iso_classes(spec, k).get(graph_cert(g), [])
        if len(members) > 1:
            (c1, s1), (c2, s2) = members[0], members[1]
            note = f"{pokes(spec, s1, shape)}; {pokes(spec, s2, shape)}"
            return Witness((s1, s2), _mapping(spec, s1, s2), (c1, c2), shape, note)
    return None


# -- anchors ---------------------------------------------------------------------

@dataclass(frozen=True)
class Anchor:
    kind: str
    vertices: tuple


def _diameter(g: Graph) -> int:
    return max(max(G.distances(g, v)) for v in range(g.n))


def anchor_candidate(spec: FamilySpec, s: Sequence[Address]) -> Anchor:
    s = tuple(sorted(set(s)))
    g = induced_on(spec, s)
    if not g.is_connected():
        raise G.InvalidVertexSet("anchor search needs a connected set")
    d = _diameter(g) if g.n > 1 else 0
    if d <= 1:
        return Anchor("WholeComplete", s)
    if d == 2:
        units: dict = {}
        for a in s:
            units.setdefault(unit_of(spec, a), []).append(a)
        best = None
        for u in sorted(units, key=repr):
            members = _unit_members(spec, u)
            if all(a in members or set(members) <= set(_neighbors(spec, a)) for a in s):
                if best is None or len(units[u]) < len(units[best]):
                    best = u
        if best is None:
            raise NoAnchorFound("no unit touches every vertex of the set")
        return Anchor("BlockIntersection", tuple(sorted(units[best])))
    if isinstance(spec, YFamily):
        cuts = [v for v in range(g.n) if not g.is_connected([u for u in range(g.n) if u != v])]
        if not cuts:
            raise NoAnchorFound("no separating vertex")
        ecc = {v: max(G.distances(g, v)) for v in cuts}
        v = min(cuts, key=lambda x: (ecc[x], g.labels[x]))
        return Anchor("SmallestSeparator", (g.labels[v],))
    for path in _induced_p4s(g):
        addrs = [g.labels[v] for v in path]
        if len({unit_of(spec, a) for a in addrs}) == 4:
            return Anchor("LongPath", tuple(addrs))
    raise NoAnchorFound("no induced path of length 3 through four units")


def _unit_members(spec: FamilySpec, u) -> list[Address]:
    return [(u[1], c) for c in range(unit_block(spec, u[1]).n)]


def _induced_p4s(g: Graph):
    for a in range(g.n):
        for b in sorted(g.adj[a]):
            for c in sorted(g.adj[b] - {a}):
                if g.has_edge(a, c):
                    continue
                for d in sorted(g.adj[c] - {a, b}):
                    if not g.has_edge(a, d) and not g.has_edge(b, d):
                        yield (a, b, c, d)


def find_anchor(spec: FamilySpec, s: Iterable[int], b: Ball) -> Anchor:
    """Anchor of the ball vertex set ``s``; raises NoAnchorFound when isomorphic copies split into orbits."""
    s = G.vertex_set(b.graph, s)
    _check_safe(b, s)
    return find_anchor_addrs(spec, b.addresses(s))


def find_anchor_addrs(spec: FamilySpec, s: Sequence[Address]) -> Anchor:
    anchor = anchor_candidate(spec, s)
    cert = graph_cert(_plain(induced_on(spec, s)))
    members = iso_classes(spec, len(set(s))).get(cert, [])
    if len(members) != 1:
        raise NoAnchorFound(f"{len(members)} orbits of sets inducing this subgraph; no isomorphism-invariant anchor")
    return Anchor(anchor.kind, tuple(anchor.vertices))


# -- ball-level enumeration --------------------------------------------------------------

def connected_k_subgraphs(b: Ball, k: int, safe_only: bool = False, limit: int | None = None) -> list[tuple[int, ...]]:
    """All connected induced k-vertex sets of the ball, each listed once, sorted.

    Raises SizeLimitExceeded once more than ``limit`` sets have been found.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    g = b.graph
    allowed = set(range(g.n))
    if safe_only:
        deepest = b.radius - safety_margin(b.spec)
        allowed = {v for v in allowed if b.depth[v] <= deepest}
    out: list[tuple[int, ...]] = []

    def extend(sub: list[int], ext: set[int], v: int):
        if len(sub) == k:
            out.append(tuple(sorted(sub)))
            if limit is not None and len(out) > limit:
                raise G.SizeLimitExceeded(f"more than {limit} connected {k}-sets")
            return
        ext = set(ext)
        while ext:
            w = ext.pop()
            closed = set(sub) | {x for u in sub for x in g.adj[u]}
            new = {u for u in g.adj[w] if u > v and u in allowed and u not in closed}
            extend(sub + [w], ext | new, v)

    for v in sorted(allowed):
        extend([v], {u for u in g.adj[v] if u > v and u in allowed}, v)
    return sorted(out)


# -- predicted verdicts ------------------------------------------------------------------

def _block_kind(h: Graph):
    if h.is_complete():
        return ("K", h.n)
    if h.is_edgeless():
        return ("Kbar", h.n)
    return ("E", h.n)


def _e_class_ok(h: Graph, k: int, n_bound: float) -> bool:
    """Some E_{k,m,n} with m <= k-2 and n <= ceil(n_bound) contains ``h``.

    The bound is rounded up: the checker confirms C5 at k=10, where the
    unrounded bound (k-5)/2+1 = 3.5 would exclude its threshold of 4.
    """
    if h.is_complete() or h.is_edgeless() or not is_homogeneous(h):
        return False
    return (h.max_degree() <= k - 2 and max_common_nonadjacent(h) < k - 2
            and connectivity_threshold(h) <= math.ceil(n_bound))


def _x_verdict(kappa: int, lam: int, h: Graph, k: int, prop: str) -> str:
    kind, size = _block_kind(h)
    if size == 1:
        return HOLDS
    if kind == "K":
        ok = size <= k / 2
        if kappa == 2 and lam == 2:
            return HOLDS if ok else FAILS
        if kappa == 2 or lam == 2:
            return AMBIGUOUS if ok else FAILS
        return FAILS
    if kind == "Kbar":
        ok = size <= k / 3
        if kappa == 2 and lam == 2:
            return HOLDS if ok else FAILS
        if kappa == 2 or lam == 2:
            return AMBIGUOUS if ok else FAILS
        return FAILS
    if kappa == 2 and lam == 2 and _e_class_ok(h, k, (k - h.n) / 2 + 1):
        return HOLDS
    return FAILS


def expected_verdict(spec: FamilySpec, k: int, prop: str = "kCS") -> str:
    """Verdict predicted by the classification, from parameters alone."""
    if k < 3:
        raise ValueError("the classification covers k >= 3")
    if prop not in ("kCS", "kCSHom"):
        raise ValueError(f"unknown property {prop!r}")
    if isinstance(spec, XFamily):
        return _x_verdict(spec.kappa, spec.lam, spec.h, k, prop)
    if isinstance(spec, YFamily):
        return HOLDS if prop == "kCS" and k % 2 == 1 else FAILS
    if spec.merged:
        return _x_verdict(2, spec.kappa, spec.h1, k, prop)
    if prop == "kCSHom" or k % 2 == 1:
        return FAILS
    for kappa, lam, h1, h2 in ((spec.kappa, spec.lam, spec.h1, spec.h2), (spec.lam, spec.kappa, spec.h2, spec.h1)):
        found = _z_items(kappa, lam, h1, h2, k)
        if found is not None:
            return found
    return FAILS


def _z_items(kappa: int, lam: int, h1: Graph, h2: Graph, k: int) -> str | None:
    """Items for Z(kappa, lambda; H1, H2) with H2 the complete (or E-class) side; None if no item applies."""
    if h2.is_complete() and h1.n == 1:
        return HOLDS if h2.n < k and (kappa == 2 or lam == 2) else FAILS
    if kappa == 2 and lam == 2:
        if h1.is_edgeless() and h2.is_complete():
            m, n = h1.n, h2.n
            if 2 * m + n > k + 1:
                return FAILS
            return AMBIGUOUS if m > n else HOLDS
        if h1.n == 1 and _e_class_ok(h2, k, k / 2 + 1):
            return HOLDS
    return None
