"""Cut systems, nested subsystems and structure trees on finite balls.

On a ball the condition "a side contains a ray" becomes "a side meets the
boundary": every boundary vertex of these tree-like graphs starts a ray that
leaves every ball, and every ray leaves the ball through the boundary.
Separators are only taken from the interior (depth <= radius - 2) so that
truncation never creates a cut.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .families import Ball, XFamily, YFamily, code_of, format_address, unit_block
from .graph import Graph
from .search import automorphism_generators
from .separators import min_separators, separation_order


class NoTwoEnds(ValueError):
    pass


class NotNested(ValueError):
    pass


class CannotPreserveSeparation(ValueError):
    pass


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


@dataclass(frozen=True)
class Cut:
    """Separation (A, B) with connected wing A minus B."""
    a: frozenset
    b: frozenset
    am: int = field(compare=False, hash=False, repr=False, default=0)
    bm: int = field(compare=False, hash=False, repr=False, default=0)

    @classmethod
    def make(cls, a: Iterable[int], b: Iterable[int]) -> "Cut":
        a, b = frozenset(a), frozenset(b)
        return cls(a, b, _mask(a), _mask(b))

    @property
    def separator(self) -> tuple[int, ...]:
        return tuple(sorted(self.a & self.b))

    @property
    def wing_a(self) -> tuple[int, ...]:
        return tuple(sorted(self.a - self.b))

    @property
    def wing_b(self) -> tuple[int, ...]:
        return tuple(sorted(self.b - self.a))

    def key(self):
        return (self.separator, self.wing_a)


@dataclass
class CutSystem:
    order: int
    cuts: list[Cut]
    ball: Ball

    def __post_init__(self):
        self.cuts = sorted(set(self.cuts), key=Cut.key)
        self._wings = None

    @property
    def separators(self) -> list[tuple[int, ...]]:
        return sorted({c.separator for c in self.cuts})

    def wing_masks(self) -> list[int]:
        """Masks of the wings A minus B, minimal ones only (a set contains a wing iff it contains a minimal one)."""
        if self._wings is None:
            ws = sorted({c.am & ~c.bm for c in self.cuts}, key=lambda m: bin(m).count("1"))
            minimal: list[int] = []
            for w in ws:
                if not any(m & ~w == 0 for m in minimal):
                    minimal.append(w)
            self._wings = minimal
        return self._wings

    def contains_wing(self, region: int) -> bool:
        return any(w & ~region == 0 for w in self.wing_masks())


# -- cuts on a ball -----------------------------------------------------------------

def interior(b: Ball) -> list[int]:
    return [v for v in range(b.graph.n) if b.depth[v] <= b.radius - 2]


def _components(g: Graph, removed: set[int]) -> list[list[int]]:
    return g.components(v for v in range(g.n) if v not in removed)


def _cuts_at(b: Ball, sep: Sequence[int]) -> list[Cut]:
    g = b.graph
    sep_set = set(sep)
    boundary = set(b.boundary)
    comps = _components(g, sep_set)
    meeting = [c for c in comps if boundary.intersection(c)]
    if len(meeting) < 2:
        return []
    out = []
    every = set(range(g.n))
    for c in comps:
        cs = set(c)
        if not boundary & cs:
            continue
        nbrs = {u for v in c for u in g.adj[v]} - cs
        if nbrs != sep_set:
            continue
        rest = every - cs - sep_set
        if not boundary & rest:
            continue
        if any(not (g.adj[x] & rest) for x in sep):
            continue
        out.append(Cut.make(cs | sep_set, every - cs))
    return out


def ray_surrogate_cuts(b: Ball, max_order: int = 12) -> CutSystem:
    """All minimum-order cuts of the ball whose two sides both meet the boundary."""
    g = b.graph
    inner = interior(b)
    boundary = list(b.boundary)
    if len(boundary) < 2 or not inner:
        raise NoTwoEnds("ball too small to separate boundary vertices")
    boundary_set = set(boundary)
    singles = []
    for v in inner:
        comps = _components(g, {v})
        if sum(1 for c in comps if boundary_set.intersection(c)) >= 2:
            singles.append((v,))
    if singles:
        order, seps = 1, singles
    else:
        u = boundary[0]
        best, targets = None, []
        for w in boundary[1:]:
            if w in g.adj[u]:
                continue
            n = separation_order(g, [u], [w], allowed=inner)
            if n is None:
                continue
            if best is None or n < best:
                best, targets = n, [w]
            elif n == best:
                targets.append(w)
        if best is None or best > max_order:
            raise NoTwoEnds("no interior vertex set separates two boundary vertices")
        found = set()
        for w in targets:
            _, seps = min_separators(g, [u], [w], allowed=inner)
            found.update(seps)
        order, seps = best, sorted(found)
    cuts = [c for s in seps for c in _cuts_at(b, s)]
    if not cuts:
        raise NoTwoEnds("no cut with both sides meeting the boundary")
    return CutSystem(order, cuts, b)


def closure_violations(sys: CutSystem) -> list[str]:
    """Cut-system axioms 1 and 2 checked on the truncation; returns human-readable violations."""
    out = []
    wings = {c.am & ~c.bm: c for c in sys.cuts}
    for c in sys.cuts:
        if not any(d.am & ~c.bm == 0 for d in sys.cuts):
            out.append(f"axiom 1: no cut lies inside the B side of {c.separator}")
    g = sys.ball.graph
    for c in sys.cuts:
        for comp in g.components(c.wing_b):
            cm = _mask(comp)
            if any(w & ~cm == 0 for w in wings) and cm not in wings:
                out.append(f"axiom 2: component of B side of {c.separator} not a wing")
    return out


# -- nestedness ------------------------------------------------------------------------

def corner_wings(c1: Cut, c2: Cut, i: int, j: int) -> tuple[int, int]:
    """Wings of the corner separation (A_i cap B_j, ~) as masks (inner, outer).

    For cuts in which every separator vertex has neighbours in both wings the
    closed neighbourhood of the complement of the corner is A_{1-i} | B_{1-j},
    so the inner wing is the intersection of the two chosen wings.
    """
    a = (c1.am, c1.bm)
    b = (c2.am, c2.bm)
    inner = a[i] & ~a[1 - i] & b[j] & ~b[1 - j]
    corner = a[i] & b[j]
    full = c1.am | c1.bm
    return inner, full & ~corner


def corner_wings_literal(g: Graph, c1: Cut, c2: Cut, i: int, j: int) -> tuple[int, int]:
    """Same as ``corner_wings`` computed from the definition of (X, ~)."""
    sides1, sides2 = (c1.a, c1.b), (c2.a, c2.b)
    corner = sides1[i] & sides2[j]
    outside = set(range(g.n)) - corner
    closed = {u for v in outside for u in g.adj[v]} | outside
    return _mask(corner - closed), _mask(outside)


def is_nested(c1: Cut, c2: Cut, sys: CutSystem) -> bool:
    """The nestedness condition evaluated over the four corners."""
    if c1 == c2:
        return True
    a = (c1.am, c1.bm)
    b = (c2.am, c2.bm)
    seps = (c1.am & c1.bm) | (c2.am & c2.bm)
    for i in (0, 1):
        for j in (0, 1):
            opposite = a[1 - i] & b[1 - j]
            if seps & ~opposite:
                continue
            inner, outer = corner_wings(c1, c2, i, j)
            if not sys.contains_wing(inner) or not sys.contains_wing(outer):
                return True
    return False


# -- symmetries -------------------------------------------------------------------------

def _swap_word(spec, word, prefix, move):
    n = len(prefix)
    if len(word) <= n or tuple(word[:n]) != prefix:
        return word
    step = word[n]
    if isinstance(spec, XFamily):
        kind, bidx = move
        if kind == "b":
            if step[0] == bidx[0]:
                step = (bidx[1], step[1])
            elif step[0] == bidx[1]:
                step = (bidx[0], step[1])
        else:
            blk, (j1, j2) = bidx
            if step[0] == blk:
                if step[1] == j1:
                    step = (blk, j2)
                elif step[1] == j2:
                    step = (blk, j1)
    else:
        i1, i2 = move
        if step == i1:
            step = i2
        elif step == i2:
            step = i1
    return word[:n] + (step,) + word[n + 1:]


def structural_symmetries(b: Ball, max_depth: int = 1) -> list[tuple[int, ...]]:
    """Automorphisms of G fixing the root unit, restricted to the ball, as vertex permutations.

    Generators: transpositions of neighbouring child indices at structural-tree
    nodes of word length <= ``max_depth``, and generators of Aut(H) on the root unit.
    """
    spec = b.spec
    words = sorted({a[0] for a in b.graph.labels if len(a[0]) <= max_depth})
    moves = []
    for p in words:
        if isinstance(spec, XFamily):
            first = 0 if not p else 1
            for b1 in range(first, spec.lam - 1):
                moves.append((p, ("b", (b1, b1 + 1))))
            for blk in range(first, spec.lam):
                for j in range(1, spec.kappa - 1):
                    moves.append((p, ("j", (blk, (j, j + 1)))))
        elif isinstance(spec, YFamily):
            if not p or p[-1] == 0:
                for j in range(1, spec.kappa - 1):
                    moves.append((p, (j, j + 1)))
        else:
            d = spec.kappa if len(p) % 2 == 0 else spec.lam
            first = 0 if not p else 1
            for i in range(first, d - 1):
                moves.append((p, (i, i + 1)))
    perms = []
    labels = b.graph.labels
    for p, x in moves:
        try:
            perm = tuple(b.index[(_swap_word(spec, a[0], p, x), a[1])] for a in labels)
        except KeyError:
            continue
        if perm != tuple(range(len(labels))):
            perms.append(perm)
    root_block = unit_block(spec, ())
    if root_block.n > 1:
        gens, _ = automorphism_generators(root_block)
        for q in gens:
            perm = tuple(b.index[(a[0], q[a[1]])] if a[0] == () else i for i, a in enumerate(labels))
            perms.append(perm)
    return perms


def _image(c: Cut, perm: Sequence[int]) -> Cut:
    return Cut.make((perm[v] for v in c.a), (perm[v] for v in c.b))


def _boundary_partition(sys: CutSystem, cuts: Sequence[Cut]) -> list[tuple[int, ...]]:
    sig: dict[int, list] = {v: [] for v in sys.ball.boundary}
    for c in cuts:
        for v in sig:
            sig[v].append(0 if v in c.a else 1)
    groups: dict[tuple, list[int]] = {}
    for v, s in sig.items():
        groups.setdefault(tuple(s), []).append(v)
    return sorted(tuple(g) for g in groups.values())


def separation_preserved(sys: CutSystem, sub: Sequence[Cut]) -> bool:
    """Every pair of boundary vertices split by a cut of ``sys`` is split by a cut of ``sub``."""
    return _boundary_partition(sys, sys.cuts) == _boundary_partition(sys, sub)


def nested_subsystem(sys: CutSystem, symmetries: Sequence[Sequence[int]] = ()) -> CutSystem:
    """Greedy nested subsystem closed under ``symmetries``, in canonical cut order."""
    present = set(sys.cuts)
    kept: list[Cut] = []
    kept_set: set[Cut] = set()
    seen: set[Cut] = set()
    for c in sys.cuts:
        if c in seen:
            continue
        orbit = [c]
        members = {c}
        k = 0
        while k < len(orbit):
            for p in symmetries:
                d = _image(orbit[k], p)
                if d in present and d not in members:
                    members.add(d)
                    orbit.append(d)
            k += 1
        seen |= members
        ok = all(is_nested(x, y, sys) for x in orbit for y in kept) and \
            all(is_nested(x, y, sys) for x, y in combinations(orbit, 2))
        if ok:
            kept += orbit
            kept_set |= members
    if not separation_preserved(sys, kept):
        raise CannotPreserveSeparation("greedy nested selection loses the separation of some boundary pair")
    return CutSystem(sys.order, kept, sys.ball)


def separator_orbits(sys: CutSystem) -> dict[bytes, list[tuple[int, ...]]]:
    """Separators grouped by the Aut(G)-orbit code of their address sets."""
    b = sys.ball
    out: dict[bytes, list] = {}
    for s in sys.separators:
        out.setdefault(code_of(b.spec, b.addresses(s)), []).append(s)
    return dict(sorted(out.items()))


def basic_subsystem(sys: CutSystem) -> CutSystem:
    """Cuts whose separators form one Aut(G)-orbit, still separating what ``sys`` separates.

    Among the orbits that preserve separation the one covering the fewest
    vertices is chosen (ties by code).
    """
    best = None
    for code, seps in separator_orbits(sys).items():
        chosen = set(seps)
        cuts = [c for c in sys.cuts if c.separator in chosen]
        if not separation_preserved(sys, cuts):
            continue
        cover = len(set().union(*chosen))
        if best is None or cover < best[0]:
            best = (cover, cuts)
    if best is None:
        raise CannotPreserveSeparation("no single separator orbit separates the boundary as the full system does")
    return CutSystem(sys.order, best[1], sys.ball)


# -- structure tree ---------------------------------------------------------------------

@dataclass
class StructureTree:
    separators: list[tuple[int, ...]]
    blocks: list[tuple[int, ...]]
    edges: list[tuple[int, int]]  # (separator index, block index)
    ball: Ball

    def graph(self) -> nx.Graph:
        t = nx.Graph()
        t.add_nodes_from(("W", i) for i in range(len(self.separators)))
        t.add_nodes_from(("B", i) for i in range(len(self.blocks)))
        t.add_edges_from((("W", i), ("B", j)) for i, j in self.edges)
        return t

    def is_tree(self) -> bool:
        return nx.is_tree(self.graph())

    def to_json(self) -> dict:
        spec = self.ball.spec
        fmt = lambda s: [format_address(spec, self.ball.address(v)) for v in s]  # noqa: E731
        return {
            "separators": [fmt(s) for s in self.separators],
            "blocks": [fmt(s) for s in self.blocks],
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self, name: str = "structure") -> str:
        spec = self.ball.spec
        out = [f"graph {name} {{"]
        for i, s in enumerate(self.separators):
            label = " ".join(format_address(spec, self.ball.address(v)) for v in s)
            out.append(f'  W{i} [shape=box, label="{label}"];')
        for i, s in enumerate(self.blocks):
            out.append(f'  B{i} [shape=ellipse, label="B{i} ({len(s)})"];')
        for i, j in self.edges:
            out.append(f"  W{i} -- B{j};")
        out.append("}")
        return "\n".join(out) + "\n"


def _compatibility(sys: CutSystem) -> list[int]:
    """For every vertex, the mask of vertices that no cut strictly separates from it."""
    n = sys.ball.graph.n
    full = (1 << n) - 1
    bad = [0] * n
    for c in sys.cuts:
        wa = c.am & ~c.bm
        wb = c.bm & ~c.am
        for v in _bits(wa):
            bad[v] |= wb
        for v in _bits(wb):
            bad[v] |= wa
    return [full & ~bad[v] & ~(1 << v) for v in range(n)]


def structure_tree(sys: CutSystem, b: Ball | None = None, check_nested: bool = True) -> StructureTree:
    b = sys.ball if b is None else b
    if check_nested:
        for c1, c2 in combinations(sys.cuts, 2):
            if not is_nested(c1, c2, sys):
                raise NotNested(f"cuts at {c1.separator} and {c2.separator} are not nested")
    compat = _compatibility(sys)
    cg = nx.Graph()
    cg.add_nodes_from(range(b.graph.n))
    for v, m in enumerate(compat):
        cg.add_edges_from((v, u) for u in _bits(m) if u > v)
    seps = sys.separators
    blocks = []
    for clique in nx.find_cliques(cg):
        x = frozenset(clique)
        xm = _mask(x)
        if any(xm & ~(c.am & c.bm) == 0 for c in sys.cuts):
            continue  # inside a separator: lies in both sides
        # a side of some cut (either orientation) contains X, and X contains its separator
        if not any((xm & ~c.am == 0 or xm & ~c.bm == 0) and (c.am & c.bm) & ~xm == 0 for c in sys.cuts):
            continue
        blocks.append(tuple(sorted(x)))
    blocks.sort()
    edges = [(i, j) for i, s in enumerate(seps) for j, blk in enumerate(blocks) if set(s) <= set(blk)]
    return StructureTree(seps, blocks, edges, b)


def open_blocks(t: StructureTree, sys: CutSystem, include_boundary: bool = False) -> list[tuple[int, ...]]:
    """Each block minus the union of all separators.

    Blocks meeting the ball boundary are truncated and skipped unless ``include_boundary``.
    """
    covered = set().union(*map(set, sys.separators)) if sys.cuts else set()
    boundary = set(t.ball.boundary)
    out = []
    for blk in t.blocks:
        if not include_boundary and boundary.intersection(blk):
            continue
        out.append(tuple(v for v in blk if v not in covered))
    return out


def separates_properly(s: Iterable[int], u: int, v: int, g: Graph) -> bool:
    """u and v lie in distinct components of g - s and both components see every vertex of s."""
    s = set(s)
    if u in s or v in s:
        raise ValueError("u and v must lie outside the separator")
    comps = _components(g, s)
    cu = next(c for c in comps if u in c)
    if v in cu:
        return False
    cv = next(c for c in comps if v in c)
    for comp in (cu, cv):
        nb = {x for y in comp for x in g.adj[y]}
        if not s <= nb:
            return False
    return True


def report(t: StructureTree, sys: CutSystem) -> dict:
    out = t.to_json()
    spec = t.ball.spec
    out.update({
        "order": sys.order,
        "cuts": len(sys.cuts),
        "tree": t.is_tree(),
        "open_blocks": [[format_address(spec, t.ball.address(v)) for v in ob] for ob in open_blocks(t, sys)],
    })
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
