"""Isomorphism, canonical labelling and automorphism search.

Everything here is individualisation/refinement backtracking: colour refinement
to an equitable partition, then branching on the first non-singleton cell.
No external canonical-labelling library is used; graphs handled here are small
(building blocks, k-subgraphs) or tree-like neighbourhoods of a few hundred
vertices.
"""
from __future__ import annotations

import os
from typing import Hashable, Sequence

from .graph import Graph, SizeLimitExceeded

Perm = tuple[int, ...]

MAX_GROUP_LISTING = int(os.environ.get("ENDGRAPH_MAX_GROUP_VERTICES", "10"))


def _ranks(values: Sequence[Hashable]) -> list[int]:
    table = {v: i for i, v in enumerate(sorted(set(values)))}
    return [table[v] for v in values]


def refine(adj: Sequence, colors: Sequence[int]) -> list[int]:
    """Coarsest equitable refinement of ``colors``; colours are ranks, so the result is label-invariant."""
    colors = list(colors)
    k = len(set(colors))
    n = len(colors)
    while True:
        sig = [(colors[v], tuple(sorted([colors[u] for u in adj[v]]))) for v in range(n)]
        table = {s: i for i, s in enumerate(sorted(set(sig)))}
        if len(table) == k:
            return [table[s] for s in sig]
        colors = [table[s] for s in sig]
        k = len(table)


def _individualize(colors: list[int], v: int) -> list[int]:
    c = colors[v]
    return [2 * x + (1 if x == c and u != v else 0) for u, x in enumerate(colors)]


def _target_cell(colors: list[int]) -> list[int] | None:
    counts: dict[int, int] = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    best = None
    for c in sorted(counts):
        if counts[c] > 1:
            best = c
            break
    if best is None:
        return None
    return [v for v, c in enumerate(colors) if c == best]


# -- canonical form ----------------------------------------------------------

def canonical_form(g: Graph, colors: Sequence[Hashable] | None = None) -> tuple[tuple, tuple[int, ...]]:
    """Return ``(certificate, order)``.

    Two (coloured) graphs are isomorphic iff their certificates are equal.
    ``order[i]`` is the vertex placed at canonical position ``i``.
    """
    n = g.n
    init = [0] * n if colors is None else list(colors)
    if n == 0:
        return ((0, (), ()), ())
    adj = g.adj
    base = refine(adj, _ranks(init))
    state = {"best": None, "order": None}
    autos: list[list[int]] = []

    def cert_of(order):
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        edges = sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges())
        return (n, tuple(init[v] for v in order), tuple(edges))

    def dfs(col, prefix):
        cell = _target_cell(col)
        if cell is None:
            order = sorted(range(n), key=col.__getitem__)
            cert = cert_of(order)
            if state["best"] is None or cert < state["best"]:
                state["best"], state["order"] = cert, order
            elif cert == state["best"]:
                gamma = [0] * n
                for a, b in zip(state["order"], order):
                    gamma[a] = b
                autos.append(gamma)
            return
        done: list[int] = []
        for v in cell:
            if done and _same_orbit(v, done, autos, prefix):
                continue
            dfs(refine(adj, _individualize(col, v)), prefix + [v])
            done.append(v)

    dfs(base, [])
    return state["best"], tuple(state["order"])


def _same_orbit(v: int, done: list[int], autos: list[list[int]], prefix: list[int]) -> bool:
    usable = [a for a in autos if all(a[p] == p for p in prefix)]
    if not usable:
        return False
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for a in usable:
            y = a[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return any(d in seen for d in done)


def certificate(g: Graph, colors: Sequence[Hashable] | None = None) -> tuple:
    return canonical_form(g, colors)[0]


# -- isomorphism ---------------------------------------------------------------

def _iso_search(g1: Graph, g2: Graph, c1: Sequence[Hashable], c2: Sequence[Hashable], find_all: bool):
    n = g1.n
    if n != g2.n or g1.edge_count() != g2.edge_count():
        return []
    if sorted(map(len, g1.adj)) != sorted(map(len, g2.adj)):
        return []
    adj = list(g1.adj) + [frozenset(u + n for u in a) for a in g2.adj]
    colors = refine(adj, _ranks(list(c1) + list(c2)))
    found: list[dict[int, int]] = []

    def balanced(col):
        cnt: dict[int, int] = {}
        for i, c in enumerate(col):
            cnt[c] = cnt.get(c, 0) + (1 if i < n else -1)
        return all(v == 0 for v in cnt.values())

    def dfs(col):
        if not balanced(col):
            return False
        left: dict[int, list[int]] = {}
        for v in range(n):
            left.setdefault(col[v], []).append(v)
        target = None
        for c in sorted(left):
            if len(left[c]) > 1:
                target = c
                break
        if target is None:
            right = {col[w]: w - n for w in range(n, 2 * n)}
            mapping = {v: right[col[v]] for v in range(n)}
            if _is_iso(g1, g2, mapping):
                found.append(mapping)
                return not find_all
            return False
        v = left[target][0]
        for w in range(n, 2 * n):
            if col[w] != target:
                continue
            new = list(col)
            fresh = max(col) + 1
            new[v] = fresh
            new[w] = fresh
            if dfs(refine(adj, new)):
                return True
        return False

    dfs(colors)
    return found


def _is_iso(g1: Graph, g2: Graph, m: dict[int, int]) -> bool:
    if len(set(m.values())) != g1.n:
        return False
    for u in range(g1.n):
        if {m[x] for x in g1.adj[u]} != g2.adj[m[u]]:
            return False
    return True


def isomorphism(g1: Graph, g2: Graph, colors1: Sequence[Hashable] | None = None,
                colors2: Sequence[Hashable] | None = None) -> dict[int, int] | None:
    """Some colour-preserving isomorphism ``g1 -> g2`` as a dict, or ``None``."""
    c1 = [0] * g1.n if colors1 is None else list(colors1)
    c2 = [0] * g2.n if colors2 is None else list(colors2)
    if sorted(c1, key=repr) != sorted(c2, key=repr):
        return None
    res = _iso_search(g1, g2, c1, c2, find_all=False)
    return res[0] if res else None


def all_isomorphisms(g1: Graph, g2: Graph, colors1=None, colors2=None) -> list[dict[int, int]]:
    c1 = [0] * g1.n if colors1 is None else list(colors1)
    c2 = [0] * g2.n if colors2 is None else list(colors2)
    if sorted(c1, key=repr) != sorted(c2, key=repr):
        return []
    return _iso_search(g1, g2, c1, c2, find_all=True)


def automorphism_group(g: Graph, colors=None, max_vertices: int | None = None) -> list[Perm]:
    """Every automorphism of ``g`` as a tuple, identity first, lexicographic order."""
    cap = MAX_GROUP_LISTING if max_vertices is None else max_vertices
    if g.n > cap:
        raise SizeLimitExceeded(f"automorphism listing limited to {cap} vertices (got {g.n})")
    maps = all_isomorphisms(g, g, colors, colors)
    return sorted(tuple(m[v] for v in range(g.n)) for m in maps)


def automorphism_generators(g: Graph, colors: Sequence[Hashable] | None = None) -> tuple[list[Perm], int]:
    """A generating set of Aut(g) (colour-preserving) and the group order.

    Built along a stabiliser chain: for each base point the full orbit under the
    pointwise stabiliser of the earlier base points is determined and one coset
    representative per newly reached point is kept.
    """
    n = g.n
    init = [0] * n if colors is None else list(colors)
    base_col = _ranks(init)
    gens: list[Perm] = []
    order = 1
    fixed: list[int] = []
    for b in range(n):
        tagged = [(0, c) for c in base_col]
        for i, f in enumerate(fixed):
            tagged[f] = (1, i)
        col = refine(g.adj, _ranks(tagged))
        if _target_cell(col) is None:
            break
        cell = [v for v in range(n) if col[v] == col[b]]
        if len(cell) == 1:
            continue
        level: list[Perm] = []
        orbit = {b}
        for w in cell:
            if w in orbit:
                continue
            src = list(tagged)
            dst = list(tagged)
            src[b] = (2, 0)
            dst[w] = (2, 0)
            m = isomorphism(g, g, src, dst)
            if m is not None:
                p = tuple(m[v] for v in range(n))
                gens.append(p)
                level.append(p)
                orbit = _orbit(b, level)
        order *= len(orbit)
        fixed.append(b)
    return gens, order


def _orbit(x: int, gens: Sequence[Perm]) -> set[int]:
    seen = {x}
    stack = [x]
    while stack:
        y = stack.pop()
        for p in gens:
            z = p[y]
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return seen


def orbits(n: int, gens: Sequence[Perm]) -> list[list[int]]:
    left = set(range(n))
    out = []
    for v in range(n):
        if v in left:
            o = _orbit(v, gens)
            left -= o
            out.append(sorted(o))
    return out


def extends(g: Graph, src: Sequence[int], dst: Sequence[int]) -> bool:
    """Whether the partial map ``src[i] -> dst[i]`` extends to an automorphism of ``g``."""
    c1 = [(0, 0)] * g.n
    c2 = [(0, 0)] * g.n
    for i, (a, b) in enumerate(zip(src, dst)):
        c1[a] = (1, i)
        c2[b] = (1, i)
    return isomorphism(g, g, c1, c2) is not None
