"""Minimum vertex separators via unit-capacity max flow on the split graph."""
from __future__ import annotations

from collections import deque
from typing import Iterable

from .graph import Graph, NotSeparable, vertex_set


def _min_cut(g: Graph, a, b, removed: set[int], costly: set[int], limit: int):
    """Max flow from ``a`` to ``b`` in ``g - removed`` where vertices in ``costly`` cannot be cut.

    Returns ``(value, separator)``; the separator is the one closest to ``a``.
    ``value`` is capped at ``limit + 1``.
    """
    big = g.n + 1
    src, snk = 2 * g.n, 2 * g.n + 1
    cap: dict[int, dict[int, int]] = {}

    def arc(x, y, c):
        cap.setdefault(x, {})
        cap.setdefault(y, {})
        cap[x][y] = cap[x].get(y, 0) + c
        cap[y].setdefault(x, 0)

    for v in range(g.n):
        if v in removed:
            continue
        arc(2 * v, 2 * v + 1, big if (v in costly or v in a or v in b) else 1)
        for u in g.adj[v]:
            if u not in removed:
                arc(2 * v + 1, 2 * u, big)
    for v in a:
        arc(src, 2 * v, big)
    for v in b:
        arc(2 * v + 1, snk, big)

    flow = 0
    while flow <= limit:
        parent = {src: None}
        q = deque([src])
        while q and snk not in parent:
            x = q.popleft()
            for y, c in cap[x].items():
                if c > 0 and y not in parent:
                    parent[y] = x
                    q.append(y)
        if snk not in parent:
            break
        y = snk
        while parent[y] is not None:
            x = parent[y]
            cap[x][y] -= 1
            cap[y][x] += 1
            y = x
        flow += 1
    if flow > limit:
        return flow, None
    seen = {src}
    q = deque([src])
    while q:
        x = q.popleft()
        for y, c in cap[x].items():
            if c > 0 and y not in seen:
                seen.add(y)
                q.append(y)
    sep = tuple(sorted(v for v in range(g.n) if v not in removed and 2 * v in seen and 2 * v + 1 not in seen))
    return flow, sep


def _check(g: Graph, a, b):
    a, b = vertex_set(g, a), vertex_set(g, b)
    if not a or not b:
        raise NotSeparable("both sides must be nonempty")
    if set(a) & set(b):
        raise NotSeparable("sides intersect")
    bs = set(b)
    if any(g.adj[v] & bs for v in a):
        raise NotSeparable("sides are adjacent")
    return a, b


def separation_order(g: Graph, a: Iterable[int], b: Iterable[int], allowed: Iterable[int] | None = None) -> int | None:
    """Minimum size of an ``a``-``b`` separator drawn from ``allowed`` (``None``: no such separator)."""
    a, b = _check(g, a, b)
    costly = set() if allowed is None else set(range(g.n)) - set(allowed)
    value, sep = _min_cut(g, a, b, set(), costly, g.n)
    return None if value > g.n else value


def min_separators(g: Graph, a: Iterable[int], b: Iterable[int], allowed: Iterable[int] | None = None):
    """``(order, separators)``: every minimum ``a``-``b`` vertex separator, sorted.

    Separators are enumerated by branching on a flow cut: for a found cut
    ``s1..sk`` the remaining solutions split into "contains s1..s_{i-1}, avoids s_i".
    """
    a, b = _check(g, a, b)
    base_costly = set() if allowed is None else set(range(g.n)) - set(allowed)
    order, _ = _min_cut(g, a, b, set(), base_costly, g.n)
    if order > g.n:
        return None, []
    found: list[tuple[int, ...]] = []

    def rec(forced: tuple[int, ...], forbidden: frozenset[int]):
        need = order - len(forced)
        value, sep = _min_cut(g, a, b, set(forced), base_costly | forbidden, need)
        if sep is None or value != need:
            return
        found.append(tuple(sorted(forced + sep)))
        for i, s in enumerate(sep):
            rec(forced + sep[:i], forbidden | {s})

    rec((), frozenset())
    return order, sorted(set(found))


def max_disjoint_paths(g: Graph, a, b) -> int:
    """Maximum number of internally disjoint ``a``-``b`` paths (Menger dual of the separator order)."""
    a, b = _check(g, a, b)
    value, _ = _min_cut(g, a, b, set(), set(), g.n)
    return value
