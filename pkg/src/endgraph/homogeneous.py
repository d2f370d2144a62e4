"""Finite homogeneous graphs: deciders, the catalogue classification and the class E_{k,m,n}."""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import graph as G
from .graph import Graph, SizeLimitExceeded, common_neighborhood, induced_subgraph
from .search import automorphism_generators, canonical_form, extends, isomorphism

MAX_HOMOGENEITY_VERTICES = int(os.environ.get("ENDGRAPH_MAX_HOMOGENEITY_VERTICES", "10"))


def _guard(g: Graph, cap: int = MAX_HOMOGENEITY_VERTICES):
    if g.n > cap:
        raise SizeLimitExceeded(f"exhaustive subgraph checks limited to {cap} vertices (got {g.n})")


@lru_cache(maxsize=200_000)
def _cert(n: int, edges: tuple) -> tuple:
    return canonical_form(Graph(n, edges))[0]


def graph_cert(g: Graph) -> tuple:
    return _cert(g.n, g.edges())


def _sub_cert(g: Graph, s) -> tuple:
    return graph_cert(induced_subgraph(g, s))


def _mask_members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _apply(p, mask: int) -> int:
    out = 0
    for v in _mask_members(mask):
        out |= 1 << p[v]
    return out


def _subset_orbits(n: int, l: int, gens) -> dict[int, int]:
    """Map each l-subset mask to a representative of its orbit under <gens>."""
    masks = [sum(1 << v for v in c) for c in combinations(range(n), l)]
    rep: dict[int, int] = {}
    for m in masks:
        if m in rep:
            continue
        rep[m] = m
        stack = [m]
        while stack:
            x = stack.pop()
            for p in gens:
                y = _apply(p, x)
                if y not in rep:
                    rep[y] = m
                    stack.append(y)
    return rep


def _ls_transitive(g: Graph, l: int, gens) -> bool:
    rep = _subset_orbits(g.n, l, gens)
    seen: dict[tuple, int] = {}
    for m in sorted(rep):
        key = _sub_cert(g, _mask_members(m))
        if seen.setdefault(key, rep[m]) != rep[m]:
            return False
    return True


def is_l_s_transitive(g: Graph, l: int) -> bool:
    """Every two isomorphic induced subgraphs of order ``l`` lie in one Aut(g)-orbit."""
    if l < 1:
        raise ValueError("l must be at least 1")
    _guard(g)
    if l > g.n:
        return True
    gens, _ = automorphism_generators(g)
    return _ls_transitive(g, l, gens)


def is_comb_homogeneous(g: Graph) -> bool:
    """|Gamma(X)| depends only on the isomorphism type of the induced subgraph on X."""
    _guard(g)
    sizes: dict[tuple, int] = {}
    for mask in range(1 << g.n):
        s = _mask_members(mask)
        size = len(common_neighborhood(g, s))
        if sizes.setdefault(_sub_cert(g, s), size) != size:
            return False
    return True


def is_homogeneous(g: Graph) -> bool:
    """Every isomorphism between induced subgraphs extends to an automorphism.

    Equivalent to: isomorphic induced subgraphs are always in one orbit, and
    for one subgraph per orbit the setwise stabiliser induces all of its
    automorphisms (checked on a generating set).
    """
    _guard(g)
    gens, _ = automorphism_generators(g)
    for l in range(1, g.n + 1):
        rep = _subset_orbits(g.n, l, gens)
        seen: dict[tuple, int] = {}
        for m in sorted(rep):
            key = _sub_cert(g, _mask_members(m))
            if seen.setdefault(key, rep[m]) != rep[m]:
                return False
        if l < 2:
            continue
        for m in sorted(set(rep.values())):
            s = _mask_members(m)
            sub_gens, _ = automorphism_generators(induced_subgraph(g, s))
            for p in sub_gens:
                if not extends(g, s, [s[p[i]] for i in range(len(s))]):
                    return False
    return True


# -- catalogue ------------------------------------------------------------------

@dataclass(frozen=True)
class HomClass:
    tag: str
    t: int | None = None
    r: int | None = None

    def __str__(self):
        return self.tag if self.t is None else f"{self.tag}({self.t},{self.r})"


def _disjoint_completes_shape(g: Graph):
    comps = g.components()
    sizes = {len(c) for c in comps}
    if len(sizes) != 1:
        return None
    if all(len(g.adj[v]) == len(c) - 1 for c in comps for v in c):
        return len(comps), sizes.pop()
    return None


def classify_homogeneous(g: Graph) -> HomClass:
    _guard(g)
    shape = _disjoint_completes_shape(g)
    if shape is not None:
        return HomClass("DisjointCompletes", *shape)
    co = _disjoint_completes_shape(g.complement())
    if co is not None and co[0] >= 2 and co[1] >= 2:
        return HomClass("CompleteMultipartite", *co)
    if g.n == 5 and isomorphism(g, G.cycle(5)) is not None:
        return HomClass("Pentagon")
    if g.n == 9 and isomorphism(g, G.line_k33()) is not None:
        return HomClass("LineK33")
    return HomClass("NotHomogeneous")


def catalog_name(g: Graph) -> str:
    """Constructor name in the family grammar for a catalogue member."""
    c = classify_homogeneous(g)
    if c.tag == "DisjointCompletes":
        if c.t == 1:
            return f"K{c.r}"
        if c.r == 1:
            return f"Kbar{c.t}"
        return f"Kdisj{c.t}x{c.r}"
    if c.tag == "CompleteMultipartite":
        return f"Kpart{c.t}x{c.r}"
    if c.tag == "Pentagon":
        return "C5"
    if c.tag == "LineK33":
        return "LK33"
    return "graph"


# -- the class E_{k,m,n} -------------------------------------------------------

@dataclass(frozen=True)
class EParams:
    k: int
    m: int
    n: int

    def __post_init__(self):
        if self.k < 3 or self.m < 1 or self.n < 1:
            raise ValueError(f"need k >= 3, m >= 1, n >= 1 (got {self})")


def large_subsets_connected(g: Graph, n: int) -> bool:
    """Every induced subgraph on at least ``n`` vertices is connected."""
    for size in range(max(n, 1), g.n + 1):
        for s in combinations(range(g.n), size):
            if not g.is_connected(s):
                return False
    return True


def connectivity_threshold(g: Graph) -> int:
    """Least n such that every induced subgraph of order >= n is connected."""
    for n in range(1, g.n + 2):
        if large_subsets_connected(g, n):
            return n
    return g.n + 1


def max_common_nonadjacent(g: Graph) -> int:
    best = 0
    for u, v in combinations(range(g.n), 2):
        if not g.has_edge(u, v):
            best = max(best, len(g.adj[u] & g.adj[v]))
    return best


def in_class_E(g: Graph, p: EParams, homogeneous: bool | None = None) -> bool:
    """Membership by the defining properties (not by the catalogue)."""
    _guard(g)
    if g.n == 0 or g.is_complete() or g.is_edgeless():
        return False
    if g.max_degree() > p.m:
        return False
    if max_common_nonadjacent(g) >= p.k - 2:
        return False
    if not large_subsets_connected(g, p.n):
        return False
    return is_homogeneous(g) if homogeneous is None else homogeneous


class CatalogMismatch(AssertionError):
    pass


def catalog_class_E(p: EParams, max_order: int) -> list[tuple[str, Graph]]:
    """Members produced by the printed catalogue inequalities, before filtering."""
    k, m, n = p.k, p.m, p.n
    out: list[tuple[str, Graph]] = []
    for t in range(2, max_order + 1):
        for r in range(2, max_order // t + 1):
            if r - 1 <= m and t * r <= n - 1:
                out.append((f"Kdisj{t}x{r}", G.disjoint_completes(t, r)))
    for t in range(2, max_order + 1):
        for r in range(2, max_order // t + 1):
            if r <= n - 1 and (t - 1) * r <= min(m, k - 3):
                out.append((f"Kpart{t}x{r}", G.complete_multipartite(t, r)))
    if max_order >= 5 and 2 <= m and 4 <= n:
        out.append(("C5", G.cycle(5)))
    if max_order >= 9 and 4 <= m and 6 <= n:
        out.append(("LK33", G.line_k33()))
    return out


def enumerate_class_E(p: EParams, max_order: int) -> list[tuple[str, Graph]]:
    """All members of E_{k,m,n} with at most ``max_order`` vertices, up to isomorphism.

    Raises ``CatalogMismatch`` if a catalogue member fails the defining properties.
    """
    if max_order > 9:
        raise SizeLimitExceeded("enumerate_class_E supports max_order <= 9")
    out = []
    for name, g in catalog_class_E(p, max_order):
        if not in_class_E(g, p):
            raise CatalogMismatch(f"{name} produced by the catalogue but fails the definition for {p}")
        out.append((name, g))
    out.sort(key=lambda item: (item[1].n, item[0]))
    return out


# -- exhaustive graph enumeration (oracle side) -------------------------------

@lru_cache(maxsize=None)
def all_graphs(n: int) -> tuple[Graph, ...]:
    """One graph per isomorphism class on ``n`` vertices, by vertex augmentation."""
    if n == 0:
        return (Graph(0),)
    if n == 1:
        return (Graph(1),)
    seen: dict[tuple, Graph] = {}
    for h in all_graphs(n - 1):
        base = h.edges()
        for mask in range(1 << (n - 1)):
            edges = base + tuple((v, n - 1) for v in _mask_members(mask))
            g = Graph(n, edges)
            seen.setdefault(graph_cert(g), g)
    return tuple(seen[c] for c in sorted(seen))
