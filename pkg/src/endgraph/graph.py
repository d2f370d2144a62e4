"""Finite simple undirected graphs and the small primitives built on them."""
from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Hashable, Iterable, Sequence

INF = float("inf")


class GraphError(ValueError):
    pass


class InvalidVertexSet(GraphError):
    pass


class SizeLimitExceeded(GraphError):
    pass


class NotSeparable(GraphError):
    pass


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``labels`` is an optional tuple carrying one opaque label per vertex.
    """

    __slots__ = ("n", "adj", "labels", "_masks", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels: Sequence[Hashable] | None = None):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidVertexSet(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj = tuple(frozenset(s) for s in nbrs)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise GraphError("one label per vertex required")
        self.labels = labels
        self._masks = None
        self._hash = None

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]], labels=None) -> "Graph":
        return cls(len(adj), ((u, v) for u, vs in enumerate(adj) for v in vs if u < v), labels)

    # -- basic queries -----------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def masks(self) -> tuple[int, ...]:
        """Adjacency rows as integer bitmasks."""
        if self._masks is None:
            self._masks = tuple(sum(1 << u for u in a) for a in self.adj)
        return self._masks

    def is_complete(self) -> bool:
        return all(len(a) == self.n - 1 for a in self.adj)

    def is_edgeless(self) -> bool:
        return all(not a for a in self.adj)

    def complement(self) -> "Graph":
        return Graph(self.n, ((u, v) for u, v in combinations(range(self.n), 2) if v not in self.adj[u]), self.labels)

    def relabel(self, labels) -> "Graph":
        return Graph(self.n, self.edges(), labels)

    def components(self, within: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components (sorted vertex lists) of the subgraph induced on ``within``."""
        alive = set(range(self.n)) if within is None else set(within)
        out = []
        for s in sorted(alive):
            if s not in alive:
                continue
            alive.discard(s)
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y in alive:
                        alive.discard(y)
                        comp.append(y)
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self, within: Iterable[int] | None = None) -> bool:
        return len(self.components(within)) <= 1

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        edges = self.edges()
        lines = [f"{self.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        if not rows or len(rows[0]) != 2:
            raise GraphError("first line must be 'n m'")
        n, m = int(rows[0][0]), int(rows[0][1])
        body = rows[1:]
        if len(body) != m:
            raise GraphError(f"expected {m} edge lines, found {len(body)}")
        edges = []
        for r in body:
            u, v = int(r[0]), int(r[1])
            if not 0 <= u < v < n:
                raise GraphError(f"edge line '{u} {v}' violates 0 <= u < v < n")
            edges.append((u, v))
        return cls(n, edges)

    def to_dot(self, name: str = "G", dashed: Iterable[int] = ()) -> str:
        dashed = set(dashed)
        out = [f"graph {name} {{"]
        for v in range(self.n):
            label = str(self.labels[v]) if self.labels is not None else str(v)
            style = ", style=dashed" if v in dashed else ""
            out.append(f'  {v} [label="{_dot_escape(label)}"{style}];')
        for u, v in self.edges():
            out.append(f"  {u} -- {v};")
        out.append("}")
        return "\n".join(out) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def vertex_set(g: Graph, s: Iterable[int]) -> tuple[int, ...]:
    """Validate and normalise a vertex set: sorted, duplicate-free, in range."""
    out = tuple(sorted(set(s)))
    if out and (out[0] < 0 or out[-1] >= g.n):
        raise InvalidVertexSet(f"vertex set {out} not within 0..{g.n - 1}")
    return out


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    s = vertex_set(g, s)
    pos = {v: i for i, v in enumerate(s)}
    edges = [(pos[u], pos[v]) for u in s for v in g.adj[u] if v in pos and u < v]
    labels = None if g.labels is None else [g.labels[v] for v in s]
    return Graph(len(s), edges, labels)


def distances(g: Graph, source: int) -> list:
    """Breadth-first distances from ``source``; ``INF`` where unreachable."""
    if not 0 <= source < g.n:
        raise InvalidVertexSet(f"source {source} out of range")
    dist: list = [INF] * g.n
    dist[source] = 0
    q = deque([source])
    while q:
        x = q.popleft()
        for y in g.adj[x]:
            if dist[y] == INF:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def common_neighborhood(g: Graph, x: Iterable[int]) -> tuple[int, ...]:
    """Vertices adjacent to every member of ``x``; all vertices when ``x`` is empty."""
    x = vertex_set(g, x)
    if not x:
        return tuple(range(g.n))
    common = set(g.adj[x[0]])
    for v in x[1:]:
        common &= g.adj[v]
    return tuple(sorted(common))


# -- small named graphs -----------------------------------------------------

def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def empty(n: int) -> Graph:
    return Graph(n)


def cycle(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def complete_multipartite(t: int, r: int) -> Graph:
    """K^t_r: t classes of r vertices, vertex i in class i // r."""
    n = t * r
    return Graph(n, ((u, v) for u, v in combinations(range(n), 2) if u // r != v // r))


def disjoint_completes(t: int, r: int) -> Graph:
    n = t * r
    return Graph(n, ((u, v) for u, v in combinations(range(n), 2) if u // r == v // r))


def line_k33() -> Graph:
    """L(K_{3,3}), the 3x3 rook's graph; vertex 3*i+j is the edge (a_i, b_j)."""
    cells = [(i, j) for i in range(3) for j in range(3)]
    return Graph(9, ((p, q) for p, q in combinations(range(9), 2)
                     if cells[p][0] == cells[q][0] or cells[p][1] == cells[q][1]))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(*gs: Graph) -> Graph:
    edges, off = [], 0
    for g in gs:
        edges += [(u + off, v + off) for u, v in g.edges()]
        off += g.n
    return Graph(off, edges)
