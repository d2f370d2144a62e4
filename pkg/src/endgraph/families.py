"""The three multi-ended families, as lazy graphs over reduced addresses.

Every family is described by a structural tree T whose nodes have a type.
Some node types are *units* carrying a copy of a finite building block; the
graph vertices are the block vertices of the units.

* X(kappa, lambda; H): units are the base vertices of X_{kappa,lambda}
  (type ``V``), joined through block nodes (type ``B``).  Each base vertex
  lies in ``lambda`` blocks of ``kappa`` base vertices and carries a copy of H.
* Y(kappa): units are single vertices (``V``) joined through edge blocks
  (``E``, two vertices) and large blocks (``K``, ``kappa`` vertices).
* Z(kappa, lambda; H1, H2): units are the nodes of the (kappa, lambda)
  semiregular tree; A nodes (even depth) carry H1, B nodes carry H2.

Two finite vertex sets are equivalent under Aut(G) iff their *footprints*
(the smallest subtree of T meeting every unit that meets the set, each node
labelled by its type and the isomorphism type of the induced piece of its
building block) are isomorphic.  Building blocks are homogeneous and the
adjacency between neighbouring units is complete, so a unit-wise isomorphism
respecting T extends, and T is semiregular by type, so any type preserving
isomorphism of finite subtrees extends to T.
"""
from __future__ import annotations

import os
import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping

from . import graph as G
from .graph import Graph, GraphError, SizeLimitExceeded, induced_subgraph
from .search import canonical_form

MAX_PARAM = int(os.environ.get("ENDGRAPH_MAX_PARAM", "6"))
MAX_BLOCK = int(os.environ.get("ENDGRAPH_MAX_BLOCK", "9"))


def max_vertices() -> int:
    return int(os.environ.get("ENDGRAPH_MAX_VERTICES", "200000"))


class SpecError(ValueError):
    pass


class SpecSyntaxError(SpecError):
    pass


class ParameterOutOfRange(SpecError):
    pass


class NotHomogeneousBlock(SpecError):
    pass


class MalformedAddress(ValueError):
    pass


class TooCloseToBoundary(ValueError):
    pass


class DisconnectedInput(ValueError):
    pass


# -- specs ---------------------------------------------------------------------

@dataclass(frozen=True)
class XFamily:
    kappa: int
    lam: int
    h: Graph = field(compare=True)
    h_name: str = "K1"

    @property
    def text(self) -> str:
        return f"X({self.kappa},{self.lam};{self.h_name})"


@dataclass(frozen=True)
class YFamily:
    kappa: int

    @property
    def text(self) -> str:
        return f"Y({self.kappa})"


@dataclass(frozen=True)
class ZFamily:
    kappa: int
    lam: int
    h1: Graph
    h2: Graph
    h1_name: str = "K1"
    h2_name: str = "K1"

    @property
    def text(self) -> str:
        return f"Z({self.kappa},{self.lam};{self.h1_name},{self.h2_name})"

    @property
    def merged(self) -> bool:
        """Whether some automorphism swaps the two sides."""
        return self.kappa == self.lam and _same_graph(self.h1, self.h2)


FamilySpec = XFamily | YFamily | ZFamily
Address = tuple  # (word, copy)

ROOT: Address = ((), 0)


@lru_cache(maxsize=None)
def _same_graph(g1: Graph, g2: Graph) -> bool:
    return g1.n == g2.n and canonical_form(g1)[0] == canonical_form(g2)[0]


_BLOCK_RE = re.compile(r"^(?:K(\d+)|Kbar(\d+)|C5|LK33|Kpart(\d+)x(\d+)|Kdisj(\d+)x(\d+)|file:(.+))$")


def parse_block(text: str) -> Graph:
    """Building block from its constructor name; see the README for the grammar."""
    text = text.strip()
    m = _BLOCK_RE.match(text)
    if not m:
        raise SpecSyntaxError(f"unknown building block {text!r}")
    kn, kbar, pt, pr, dt, dr, path = m.groups()
    if kn is not None:
        g = G.complete(int(kn))
    elif kbar is not None:
        g = G.empty(int(kbar))
    elif text == "C5":
        g = G.cycle(5)
    elif text == "LK33":
        g = G.line_k33()
    elif pt is not None:
        g = G.complete_multipartite(int(pt), int(pr))
    elif dt is not None:
        g = G.disjoint_completes(int(dt), int(dr))
    else:
        try:
            g = Graph.from_text(Path(path).read_text())
        except (OSError, GraphError, ValueError) as e:
            raise SpecSyntaxError(f"cannot read building block from {path}: {e}") from e
    if g.n < 1 or g.n > MAX_BLOCK:
        raise ParameterOutOfRange(f"building block {text} has {g.n} vertices; allowed 1..{MAX_BLOCK}")
    from .homogeneous import is_homogeneous

    if not is_homogeneous(g):
        raise NotHomogeneousBlock(f"building block {text} is not homogeneous")
    return g


def _param(value: str, name: str, low: int) -> int:
    try:
        v = int(value)
    except ValueError:
        raise SpecSyntaxError(f"{name} must be an integer, got {value!r}") from None
    if v < low or v > MAX_PARAM:
        raise ParameterOutOfRange(f"{name}={v} outside {low}..{MAX_PARAM}")
    return v


def parse_spec(text: str) -> FamilySpec:
    s = "".join(text.split())
    m = re.match(r"^X\((\w+),(\w+);(.+)\)$", s)
    if m:
        return XFamily(_param(m[1], "kappa", 2), _param(m[2], "lambda", 2), parse_block(m[3]), m[3])
    m = re.match(r"^Y\((\w+)\)$", s)
    if m:
        return YFamily(_param(m[1], "kappa", 3))
    m = re.match(r"^Z\((\w+),(\w+);([^,]+),(.+)\)$", s)
    if m:
        return ZFamily(_param(m[1], "kappa", 2), _param(m[2], "lambda", 2),
                       parse_block(m[3]), parse_block(m[4]), m[3], m[4])
    raise SpecSyntaxError(f"cannot parse family spec {text!r}")


# -- addresses -------------------------------------------------------------------

def _z_degree(spec: ZFamily, word) -> int:
    return spec.kappa if len(word) % 2 == 0 else spec.lam


def _z_block(spec: ZFamily, word) -> Graph:
    return spec.h1 if len(word) % 2 == 0 else spec.h2


def unit_block(spec: FamilySpec, word) -> Graph:
    """Building block carried by the unit with this word."""
    if isinstance(spec, XFamily):
        return spec.h
    if isinstance(spec, YFamily):
        return _K1
    return _z_block(spec, word)


_K1 = Graph(1)


def validate_address(spec: FamilySpec, a) -> Address:
    try:
        word, copy = a
        word = tuple(word)
    except (TypeError, ValueError):
        raise MalformedAddress(f"address must be (word, copy), got {a!r}") from None
    if isinstance(spec, XFamily):
        for i, step in enumerate(word):
            try:
                b, j = step
            except (TypeError, ValueError):
                raise MalformedAddress(f"X step must be (block, vertex), got {step!r}") from None
            if not ((0 if i == 0 else 1) <= b < spec.lam and 1 <= j < spec.kappa):
                raise MalformedAddress(f"X step {step!r} out of range at position {i}")
            word = word[:i] + ((b, j),) + word[i + 1:]
    elif isinstance(spec, YFamily):
        for i, x in enumerate(word):
            if not 0 <= x < spec.kappa:
                raise MalformedAddress(f"Y step {x!r} out of range")
            if i and (x == 0) == (word[i - 1] == 0):
                raise MalformedAddress("Y word must alternate edge steps and block steps")
    else:
        for i, x in enumerate(word):
            d = _z_degree(spec, word[:i])
            if not (0 if i == 0 else 1) <= x < d:
                raise MalformedAddress(f"Z step {x!r} out of range at position {i}")
    if not 0 <= copy < unit_block(spec, word).n:
        raise MalformedAddress(f"copy index {copy!r} out of range")
    return (word, copy)


@lru_cache(maxsize=1_000_000)
def _neighbors(spec: FamilySpec, a: Address) -> tuple[Address, ...]:
    word, c = a
    out: list[Address] = []
    if isinstance(spec, XFamily):
        h = spec.h
        out += [(word, d) for d in h.adj[c]]
        first = 0 if not word else 1
        for b in range(first, spec.lam):
            for j in range(1, spec.kappa):
                out += [(word + ((b, j),), d) for d in range(h.n)]
        if word:
            p, (b0, j0) = word[:-1], word[-1]
            out += [(p, d) for d in range(h.n)]
            for j in range(1, spec.kappa):
                if j != j0:
                    out += [(p + ((b0, j),), d) for d in range(h.n)]
    elif isinstance(spec, YFamily):
        if word and word[-1] == 0:
            out.append((word[:-1], 0))
        else:
            out.append((word + (0,), 0))
        if word and word[-1] != 0:
            p = word[:-1]
            out.append((p, 0))
            out += [(p + (j,), 0) for j in range(1, spec.kappa) if j != word[-1]]
        else:
            out += [(word + (j,), 0) for j in range(1, spec.kappa)]
    else:
        h = _z_block(spec, word)
        out += [(word, d) for d in h.adj[c]]
        if word:
            p = word[:-1]
            out += [(p, d) for d in range(_z_block(spec, p).n)]
        first = 0 if not word else 1
        child_n = _z_block(spec, word + (0,)).n
        for i in range(first, _z_degree(spec, word)):
            out += [(word + (i,), d) for d in range(child_n)]
    return tuple(sorted(out))


def neighbors(spec: FamilySpec, a) -> tuple[Address, ...]:
    """Neighbours of ``a`` in the infinite graph, sorted."""
    return _neighbors(spec, validate_address(spec, a))


def degree(spec: FamilySpec, a) -> int:
    return len(neighbors(spec, a))


def expected_degree(spec: FamilySpec, a) -> int:
    """Degree by construction arithmetic, independent of ``neighbors``."""
    word, c = validate_address(spec, a)
    if isinstance(spec, XFamily):
        return spec.h.degree(c) + spec.lam * (spec.kappa - 1) * spec.h.n
    if isinstance(spec, YFamily):
        return spec.kappa
    own = _z_block(spec, word)
    other = _z_block(spec, word + (0,))
    return own.degree(c) + _z_degree(spec, word) * other.n


def format_address(spec: FamilySpec, a: Address) -> str:
    word, c = a
    if isinstance(spec, XFamily):
        w = ".".join(f"{b}:{j}" for b, j in word) or "e"
        return f"{w}/{c}" if spec.h.n > 1 else w
    if isinstance(spec, YFamily):
        return "".join("E" if x == 0 else f"T{x}" for x in word) or "e"
    side = "A" if len(word) % 2 == 0 else "B"
    w = ".".join(map(str, word)) or "e"
    return f"{side}{w}/{c}"


def seeds(spec: FamilySpec) -> tuple[Address, ...]:
    """One vertex from each Aut(G)-orbit on vertices."""
    if isinstance(spec, ZFamily) and not spec.merged:
        return (ROOT, ((0,), 0))
    return (ROOT,)


def block_diameter(spec: FamilySpec) -> int:
    """Largest distance in G between two vertices of one building block."""
    if isinstance(spec, YFamily):
        return 1
    blocks = [spec.h] if isinstance(spec, XFamily) else [spec.h1, spec.h2]
    return 1 if all(b.is_complete() for b in blocks) else 2


# -- balls -----------------------------------------------------------------------

@dataclass(frozen=True)
class Ball:
    spec: FamilySpec
    radius: int
    graph: Graph
    root: int
    boundary: tuple[int, ...]
    depth: tuple[int, ...]
    index: Mapping[Address, int]

    def address(self, v: int) -> Address:
        return self.graph.labels[v]

    def addresses(self, s: Iterable[int]) -> list[Address]:
        return [self.graph.labels[v] for v in s]

    def vertices(self, addrs: Iterable[Address]) -> tuple[int, ...]:
        return tuple(sorted(self.index[a] for a in addrs))

    def to_dot(self, name: str = "ball") -> str:
        labelled = self.graph.relabel([format_address(self.spec, a) for a in self.graph.labels])
        return labelled.to_dot(name, dashed=self.boundary)


def ball(spec: FamilySpec, radius: int, center: Address = ROOT) -> Ball:
    """Breadth-first ball around ``center`` (vertex 0), boundary = distance exactly ``radius``."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    center = validate_address(spec, center)
    cap = max_vertices()
    order = [center]
    depth = {center: 0}
    q = deque([center])
    while q:
        a = q.popleft()
        if depth[a] == radius:
            continue
        for b in _neighbors(spec, a):
            if b not in depth:
                depth[b] = depth[a] + 1
                order.append(b)
                if len(order) > cap:
                    raise SizeLimitExceeded(f"ball of {spec.text} radius {radius} exceeds {cap} vertices")
                q.append(b)
    index = {a: i for i, a in enumerate(order)}
    edges = []
    for i, a in enumerate(order):
        for b in _neighbors(spec, a):
            j = index.get(b)
            if j is not None and i < j:
                edges.append((i, j))
    g = Graph(len(order), edges, order)
    boundary = tuple(i for i, a in enumerate(order) if depth[a] == radius)
    return Ball(spec, radius, g, 0, boundary, tuple(depth[a] for a in order), index)


# -- structural tree ---------------------------------------------------------------

def unit_of(spec: FamilySpec, a: Address):
    return ("V", a[0]) if not isinstance(spec, ZFamily) else ("N", a[0])


def tree_parent(spec: FamilySpec, node):
    kind, w = node[0], node[1]
    if isinstance(spec, XFamily):
        if kind == "V":
            return ("B", w[:-1], w[-1][0]) if w else None
        return ("V", w)
    if isinstance(spec, YFamily):
        if kind == "V":
            if not w:
                return None
            return ("E", w[:-1]) if w[-1] == 0 else ("K", w[:-1])
        return ("V", w)
    return ("N", w[:-1]) if w else None


def node_type(spec: FamilySpec, node) -> str:
    if isinstance(spec, ZFamily):
        if spec.merged:
            return "N"
        return "A" if len(node[1]) % 2 == 0 else "B"
    return node[0]


def tree_depth(spec: FamilySpec, node) -> int:
    d = 0
    while (node := tree_parent(spec, node)) is not None:
        d += 1
    return d


@dataclass(frozen=True)
class Footprint:
    """Decorated subtree of T met by a vertex set.

    ``nodes`` are structural-tree nodes, ``labels[i]`` is ``(unit type,
    certificate of the induced coloured piece of the building block)`` (the
    certificate is ``None`` for non-unit nodes), ``edges`` index into ``nodes``.
    """
    nodes: tuple
    labels: tuple
    edges: tuple[tuple[int, int], ...]


def _path_to_root(spec, node) -> list:
    out = [node]
    while (node := tree_parent(spec, node)) is not None:
        out.append(node)
    return out


@lru_cache(maxsize=500_000)
def _decoration(block: Graph, copies: tuple, colors: tuple) -> tuple:
    piece = induced_subgraph(block, copies)
    return canonical_form(piece, list(colors))[0]


def footprint_of(spec: FamilySpec, addrs: Iterable[Address], colors: Mapping[Address, object] | None = None) -> Footprint:
    """Footprint of a finite set of addresses, optionally with vertex colours."""
    addrs = sorted(set(addrs))
    if not addrs:
        raise DisconnectedInput("empty vertex set")
    by_unit: dict = {}
    for a in addrs:
        by_unit.setdefault(unit_of(spec, a), []).append(a[1])
    paths = [_path_to_root(spec, u) for u in sorted(by_unit)]
    common = set(paths[0])
    for p in paths[1:]:
        common &= set(p)
    hull = set()
    for p in paths:
        for node in p:
            hull.add(node)
            if node in common:
                break
    nodes = tuple(sorted(hull, key=repr))
    pos = {x: i for i, x in enumerate(nodes)}
    edges = []
    for x in nodes:
        p = tree_parent(spec, x)
        if p is not None and p in pos:
            edges.append((pos[p], pos[x]))
    labels = []
    for x in nodes:
        t = node_type(spec, x)
        if x in by_unit:
            copies = tuple(sorted(by_unit[x]))
            cols = tuple(0 if colors is None else colors[(x[1], c)] for c in copies)
            labels.append((t, _decoration(unit_block(spec, x[1]), copies, cols)))
        else:
            labels.append((t, None))
    return Footprint(nodes, tuple(labels), tuple(sorted(edges)))


def canonical_code(f: Footprint, spec: FamilySpec | None = None) -> bytes:
    """Byte string that is equal for two footprints iff they are isomorphic.

    Unrooted labelled trees are encoded by rooting at each centre and hashing
    bottom up (sorted child codes), taking the minimum.
    """
    n = len(f.nodes)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in f.edges:
        adj[u].append(v)
        adj[v].append(u)
    deg = [len(a) for a in adj]
    layer = [v for v in range(n) if deg[v] <= 1]
    left = n
    while left > 2:
        left -= len(layer)
        nxt = []
        for v in layer:
            for u in adj[v]:
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
        layer = nxt
    centres = layer
    lab = [repr(x) for x in f.labels]

    def rooted(v: int, parent: int) -> str:
        kids = sorted(rooted(u, v) for u in adj[v] if u != parent)
        return "(" + lab[v] + "".join(kids) + ")"

    return min(rooted(c, -1) for c in centres).encode()


def code_of(spec: FamilySpec, addrs: Iterable[Address], colors: Mapping[Address, object] | None = None) -> bytes:
    return canonical_code(footprint_of(spec, addrs, colors), spec)


# -- ball-level operations -------------------------------------------------------

def safety_margin(spec: FamilySpec) -> int:
    return 2 + block_diameter(spec)


def _check_safe(b: Ball, s: tuple[int, ...]):
    limit = b.radius - safety_margin(b.spec)
    far = [v for v in s if b.depth[v] > limit]
    if far:
        raise TooCloseToBoundary(f"vertices {far} lie within {safety_margin(b.spec)} of the boundary")


def footprint(spec: FamilySpec, s: Iterable[int], b: Ball) -> Footprint:
    s = G.vertex_set(b.graph, s)
    if not s:
        raise DisconnectedInput("empty vertex set")
    if not b.graph.is_connected(s):
        raise DisconnectedInput(f"vertex set {s} is not connected")
    _check_safe(b, s)
    return footprint_of(spec, b.addresses(s))


def aut_equivalent(spec: FamilySpec, s1: Iterable[int], s2: Iterable[int], b: Ball) -> bool:
    return canonical_code(footprint(spec, s1, b)) == canonical_code(footprint(spec, s2, b))


def induced_on(spec: FamilySpec, addrs: Iterable[Address]) -> Graph:
    """Induced subgraph of G on finitely many addresses, vertices in sorted address order."""
    addrs = sorted(set(addrs))
    pos = {a: i for i, a in enumerate(addrs)}
    edges = [(i, pos[b]) for i, a in enumerate(addrs) for b in _neighbors(spec, a) if b in pos and pos[b] > i]
    return Graph(len(addrs), edges, addrs)
