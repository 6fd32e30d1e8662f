"""Constructive orientable 5-weak bisections.

Pipeline: a spanning path/cycle factor F obeying five adjacency conditions,
a skeleton S (F plus non-factor edges forming a tree over the F-components,
seeded with every critical edge), removal of even skeletal edges down to
prime-even pieces, a recursive branch colouring of each piece, and a merge
that re-inserts the removed edges, flipping one even side whenever a
re-inserted critical edge would be monochromatic.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .bisection import find_k_weak, is_k_weak
from .errors import (
    FactorInvalid,
    Inconsistent,
    InternalVerificationFailed,
    NotConnected,
    StructureViolation,
)
from .flow import FlowAssignment, FlowPoint, flow_in_orientation, fmt, verify_flow
from .graph import CubicMultigraph, components, subgraph
from .orientation import Bisection, Orientation, check_orientable
from .subsets import subset_profiles

log = logging.getLogger(__name__)

PATH, EVEN_CYCLE, ODD_CYCLE = "path", "even-cycle", "odd-cycle"
TARGET_POINT = FlowPoint(Fraction(7, 2), Fraction(1, 2))
FULL_CHECK_LIMIT = 16


# ---------------------------------------------------------------- factor

@dataclass(frozen=True)
class FComponent:
    """vertices v1..vk in order; edges[i] joins vertices[i] and vertices[i+1]
    (for cycles the last edge closes vk-v1)."""

    kind: str
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.vertices)

    @property
    def is_odd_path(self) -> bool:
        return self.kind == PATH and self.k % 2 == 1

    @property
    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    def parity_color(self, v: int) -> int:
        return 1 if self.vertices.index(v) % 2 == 0 else 2


@dataclass
class FactorDecomposition:
    components: list[FComponent]
    comp_of: list[int]
    factor_edges: frozenset[int]
    externals: frozenset[int]
    critical: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "components": [{"kind": c.kind, "vertices": list(c.vertices), "edges": list(c.edges)} for c in self.components],
            "externals": sorted(self.externals),
            "critical_edges": list(self.critical),
        }


def _walk_components(g: CubicMultigraph, fedges: Iterable[int]) -> list[tuple[str, list[int], list[int]]]:
    """Split a max-degree-2 edge set into (kind, vertex seq, edge seq) pieces."""
    inc: list[list[int]] = [[] for _ in range(g.n)]
    for e in fedges:
        u, v = g.edges[e]
        inc[u].append(e)
        inc[v].append(e)
    seen = [False] * g.n
    out = []

    def walk(start: int, first_edge: int | None):
        seq, eseq = [start], []
        seen[start] = True
        prev_e, v = None, start
        e = first_edge
        while e is not None:
            w = g.other(e, v)
            if w == start:
                eseq.append(e)
                return seq, eseq, True
            seq.append(w)
            eseq.append(e)
            seen[w] = True
            prev_e, v = e, w
            e = next((x for x in inc[v] if x != prev_e), None)
        return seq, eseq, False

    for v in range(g.n):
        if not seen[v] and len(inc[v]) == 1:
            seq, eseq, _ = walk(v, inc[v][0])
            out.append((PATH, seq, eseq))
    for v in range(g.n):
        if not seen[v]:
            if not inc[v]:
                out.append(("isolated", [v], []))
                seen[v] = True
                continue
            seq, eseq, closed = walk(v, inc[v][0])
            kind = EVEN_CYCLE if len(seq) % 2 == 0 else ODD_CYCLE
            out.append((kind, seq, eseq))
    return out


def _orient_path(seq: list[int], eseq: list[int]) -> FComponent:
    if seq[-1] < seq[0]:
        seq, eseq = seq[::-1], eseq[::-1]
    return FComponent(PATH, tuple(seq), tuple(eseq))


def _reverse_cycle(vs: list[int], es: list[int]) -> tuple[list[int], list[int]]:
    """Reverse a cycle sequence keeping the same closing edge (vk-v1)."""
    closing = es[-1]
    rv = vs[::-1]
    inner = es[:-1][::-1]
    return rv, inner + [closing]


def _make_decomposition(g: CubicMultigraph, pieces) -> FactorDecomposition:
    comps = []
    comp_of = [-1] * g.n
    for kind, seq, eseq in pieces:
        if kind == PATH:
            c = _orient_path(seq, eseq)
        else:
            c = _orient_cycle(g, kind, seq, eseq)
        for v in c.vertices:
            comp_of[v] = len(comps)
        comps.append(c)
    fedges = frozenset(e for c in comps for e in c.edges)
    externals = set()
    critical = []
    for c in comps:
        if c.kind == PATH:
            externals.update(c.ends)
        elif c.kind == ODD_CYCLE:
            externals.update(c.ends)
    for ci, c in enumerate(comps):
        if c.kind != ODD_CYCLE:
            continue
        for y in c.ends:
            for e, w in g.incidence[y]:
                if e not in fedges and comp_of[w] != ci:
                    critical.append(e)
    return FactorDecomposition(comps, comp_of, fedges, frozenset(externals), tuple(sorted(set(critical))))


def _orient_cycle(g: CubicMultigraph, kind: str, seq: list[int], eseq: list[int]) -> FComponent:
    k = len(seq)
    cands = [i for i in range(k) if kind == EVEN_CYCLE or g.multiplicity(*g.edges[eseq[i]]) == 1]
    if not cands:
        raise FactorInvalid(f"odd cycle {seq} has no simple edge")
    i = min(cands, key=lambda j: eseq[j])
    # eseq[i] joins seq[i] and seq[(i+1) % k]; rotate so it closes vk-v1
    start = (i + 1) % k
    vs = seq[start:] + seq[:start]
    es = eseq[start:] + eseq[:start]
    if vs[-1] < vs[0]:
        vs, es = _reverse_cycle(vs, es)
    return FComponent(kind, tuple(vs), tuple(es))


def factor_from_edges(g: CubicMultigraph, fedges: Iterable[int]) -> FactorDecomposition:
    """Decomposition for a hand-picked factor edge set (no condition checks)."""
    return _make_decomposition(g, _walk_components(g, fedges))


@dataclass(frozen=True)
class Violation:
    condition: str
    detail: str
    vertices: tuple[int, ...] = ()


def check_factor(g: CubicMultigraph, f: FactorDecomposition) -> list[Violation]:
    """Empty iff F is a spanning path/cycle factor meeting adjacency conditions 1-5."""
    out: list[Violation] = []
    seen = [0] * g.n
    for c in f.components:
        for v in c.vertices:
            seen[v] += 1
        expected = c.k if c.kind != PATH else c.k - 1
        if len(c.edges) != expected:
            raise Inconsistent(f"component {c.vertices} has {len(c.edges)} edges, expected {expected}")
        for i, e in enumerate(c.edges):
            a, b = c.vertices[i], c.vertices[(i + 1) % c.k]
            if set(g.edges[e]) != {a, b}:
                raise Inconsistent(f"edge {e} does not join {a} and {b}")
        if c.kind == PATH and c.k < 2:
            out.append(Violation("shape", "path on fewer than two vertices", c.vertices))
        if c.kind != PATH and (c.kind == ODD_CYCLE) != (c.k % 2 == 1):
            out.append(Violation("shape", "cycle parity tag wrong", c.vertices))
    if any(s != 1 for s in seen):
        out.append(Violation("spanning", "components do not partition V", tuple(v for v in range(g.n) if seen[v] != 1)))
        return out
    if len({e for c in f.components for e in c.edges}) != sum(len(c.edges) for c in f.components):
        raise Inconsistent("an edge is used twice in the factor")
    comp_of = [0] * g.n
    for ci, c in enumerate(f.components):
        for v in c.vertices:
            comp_of[v] = ci
    fedges = {e for c in f.components for e in c.edges}
    paths = [ci for ci, c in enumerate(f.components) if c.kind == PATH]
    path_end = {}
    for ci in paths:
        for v in f.components[ci].ends:
            path_end[v] = ci

    def internal_of_odd_path(x: int) -> bool:
        c = f.components[comp_of[x]]
        return c.is_odd_path and x not in c.ends

    for ci, c in enumerate(f.components):
        if c.is_odd_path:
            a, b = c.ends
            if g.multiplicity(a, b):
                out.append(Violation("1", "odd path endpoints adjacent", (a, b)))
        if c.kind == PATH:
            for v in c.ends:
                for _, w in g.incidence[v]:
                    if w in path_end and path_end[w] != ci and v < w:
                        out.append(Violation("2", "endpoints of distinct paths adjacent", (v, w)))
        if c.kind == ODD_CYCLE:
            cyc = set(c.edges)
            pos = {v: i for i, v in enumerate(c.vertices)}
            cycle_pairs = {frozenset(g.edges[e]) for e in c.edges}
            for v in c.vertices:
                for e, w in g.incidence[v]:
                    if e in cyc:
                        continue
                    if w in pos:
                        if frozenset((v, w)) not in cycle_pairs and v < w:
                            out.append(Violation("3", "odd-cycle chord not parallel to a cycle edge", (v, w)))
                    elif not internal_of_odd_path(w):
                        out.append(Violation("4", "odd-cycle neighbour outside C is not an internal odd-path vertex", (v, w)))
    for ci in paths:
        c = f.components[ci]
        if not c.is_odd_path:
            continue
        touched = {w for v in c.vertices for _, w in g.incidence[v]
                   if f.components[comp_of[w]].kind == ODD_CYCLE}
        if len(touched) > 1:
            out.append(Violation("5", "odd path meets more than one odd-cycle vertex", tuple(sorted(touched))))
    return out


def iter_factors(g: CubicMultigraph) -> Iterator[FactorDecomposition]:
    """Every compliant factor, by backtracking over factor-edge choices
    (F-degree 1 or 2 everywhere) filtered through check_factor."""
    if len(components(g)) != 1:
        raise NotConnected("factor search needs a connected graph")
    m = g.m
    deg = [0] * g.n
    left = [3] * g.n  # undecided incident edges
    chosen = [False] * m
    # a parallel copy of an earlier edge tries "out" first
    first_try = []
    seen_pairs = set()
    for u, v in g.edges:
        key = (min(u, v), max(u, v))
        first_try.append(key not in seen_pairs)
        seen_pairs.add(key)

    def rec(i: int) -> Iterator[FactorDecomposition]:
        if i == m:
            pieces = _walk_components(g, (e for e in range(m) if chosen[e]))
            if any(k == "isolated" for k, _, _ in pieces):
                return
            try:
                f = _make_decomposition(g, pieces)
            except FactorInvalid:
                return
            if not check_factor(g, f):
                yield f
            return
        u, v = g.edges[i]
        for take in ((True, False) if first_try[i] else (False, True)):
            if take and (deg[u] == 2 or deg[v] == 2):
                continue
            left[u] -= 1
            left[v] -= 1
            if take:
                deg[u] += 1
                deg[v] += 1
                chosen[i] = True
            if deg[u] + left[u] >= 1 and deg[v] + left[v] >= 1:
                yield from rec(i + 1)
            if take:
                deg[u] -= 1
                deg[v] -= 1
                chosen[i] = False
            left[u] += 1
            left[v] += 1

    yield from rec(0)


def find_factor(g: CubicMultigraph) -> FactorDecomposition | None:
    return next(iter_factors(g), None)


# ---------------------------------------------------------------- skeleton

@dataclass
class Removal:
    edge: int
    sides: tuple[frozenset[int], frozenset[int]]


@dataclass
class SkeletalStructure:
    e_x: tuple[int, ...]
    removed: list[Removal]
    pes: list[frozenset[int]]
    even_split_ok: bool = True

    @property
    def alive(self) -> frozenset[int]:
        gone = {r.edge for r in self.removed}
        return frozenset(e for e in self.e_x if e not in gone)

    def to_json(self) -> dict:
        return {
            "e_x": list(self.e_x),
            "removed": [r.edge for r in self.removed],
            "pes": [sorted(p) for p in self.pes],
        }


class _DSU:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[ra] = rb
        return True


def _tree_pieces(g: CubicMultigraph, f: FactorDecomposition, sedges: Iterable[int]) -> list[frozenset[int]]:
    """Vertex sets of the s-subgraphs formed by F plus the given s-edges."""
    dsu = _DSU(g.n)
    for e in f.factor_edges:
        dsu.union(*g.edges[e])
    for e in sedges:
        dsu.union(*g.edges[e])
    groups: dict[int, set[int]] = {}
    for v in range(g.n):
        groups.setdefault(dsu.find(v), set()).add(v)
    return [frozenset(s) for s in groups.values()]


def build_skeletal(g: CubicMultigraph, f: FactorDecomposition, check: bool = True) -> SkeletalStructure:
    if check and check_factor(g, f):
        raise FactorInvalid("factor violates its conditions")
    comp = f.comp_of
    dsu = _DSU(len(f.components))
    e_x = []
    for e in f.critical:
        u, v = g.edges[e]
        if not dsu.union(comp[u], comp[v]):
            raise FactorInvalid(f"critical edge {e} closes a cycle over the F-components")
        e_x.append(e)
    for e, (u, v) in enumerate(g.edges):
        if e in f.factor_edges or e in e_x:
            continue
        if dsu.union(comp[u], comp[v]):
            e_x.append(e)
    if len({dsu.find(i) for i in range(len(f.components))}) != 1:
        raise NotConnected("components of F do not span a connected skeleton")
    e_x = sorted(e_x)
    removed: list[Removal] = []
    alive = set(e_x)
    even_split = True
    while True:
        pieces = _tree_pieces(g, f, alive)
        where = {}
        for pi, s in enumerate(pieces):
            for v in s:
                where[v] = pi
        hit = None
        for e in sorted(alive):
            rest = alive - {e}
            u, v = g.edges[e]
            sub = _tree_pieces(g, f, rest)
            side_u = next(s for s in sub if u in s)
            side_v = next(s for s in sub if v in s)
            if len(side_u) % 2 == 0 and len(side_v) % 2 == 0:
                hit = Removal(e, (side_u, side_v))
                break
        if hit is None:
            break
        alive.discard(hit.edge)
        removed.append(hit)
        if any(len(s) % 2 for s in _tree_pieces(g, f, alive)):
            even_split = False
    pes = sorted(_tree_pieces(g, f, alive), key=min)
    return SkeletalStructure(tuple(e_x), removed, pes, even_split)


# ---------------------------------------------------------------- branch colouring

@dataclass
class Limb:
    edge: int
    heel: int               # vertex of the base
    heel_index: int         # 1-based position along the base
    top: frozenset[int]     # K_j
    is_stem: bool
    top_color: int = 0      # colour after the counter-parity rule


@dataclass
class BranchNode:
    base: int                       # F-component index
    stem: int | None
    vertices: frozenset[int]        # vertex set of this pegs-subgraph
    k: int
    limbs: list[Limb]
    bicritical: bool
    children: list["BranchNode"] = field(default_factory=list)
    parity_ok: bool = True          # m ≡ k (mod 2)
    critical_bichromatic_ok: bool = True
    balanced: bool = True
    interval_ok: bool | None = None
    full_ok: bool | None = None

    @property
    def m(self) -> int:
        return len(self.limbs)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class ConstructionStats:
    branches: int = 0
    even_split_violations: int = 0
    limb_parity_violations: int = 0
    critical_bichromatic_violations: int = 0
    interval_full_disagreements: int = 0
    full_checks: int = 0
    interval_checks: int = 0
    invalid_pegs: int = 0
    flips: int = 0

    def merge(self, other: "ConstructionStats") -> None:
        for k, v in vars(other).items():
            setattr(self, k, getattr(self, k) + v)


class _Colorer:
    def __init__(self, g: CubicMultigraph, f: FactorDecomposition, skel: SkeletalStructure, debug: bool):
        self.g, self.f, self.skel, self.debug = g, f, skel, debug
        self.alive = skel.alive
        self.critical = set(f.critical)
        self.stats = ConstructionStats()
        # s-edges incident to each component
        self.s_inc: dict[int, list[int]] = {}
        for e in sorted(self.alive):
            u, v = g.edges[e]
            self.s_inc.setdefault(f.comp_of[u], []).append(e)
            self.s_inc.setdefault(f.comp_of[v], []).append(e)

    def color_pes(self, vertices: frozenset[int]) -> tuple[dict[int, int], BranchNode]:
        root = self.f.comp_of[min(vertices)]
        colors, node = self.color_pegs(root, None)
        if set(colors) != set(vertices):
            raise StructureViolation("pes colouring does not cover its vertex set")
        return colors, node

    def _base_end(self, e: int, ci: int) -> tuple[int, int]:
        """(endpoint in component ci, other endpoint)."""
        u, v = self.g.edges[e]
        return (u, v) if self.f.comp_of[u] == ci else (v, u)

    def color_pegs(self, ci: int, stem: int | None) -> tuple[dict[int, int], BranchNode]:
        """Valid orientable bisection of the branch with base ci and stem ``stem``
        (or of the whole pes-subgraph rooted at ci when stem is None)."""
        f, g = self.f, self.g
        base = f.components[ci]
        seq = list(base.vertices)
        limbs: list[Limb] = []
        children: list[BranchNode] = []
        sub_colors: dict[int, dict[int, int]] = {}
        for e in self.s_inc.get(ci, []):
            heel, far = self._base_end(e, ci)
            if e == stem:
                limbs.append(Limb(e, heel, 0, frozenset([far]), True))
                sub_colors[e] = {far: 1}
                continue
            child_colors, child = self.color_pegs(f.comp_of[far], e)
            children.append(child)
            top = frozenset(v for v in child_colors if v != heel)
            limbs.append(Limb(e, heel, 0, top, False))
            sub_colors[e] = {v: child_colors[v] for v in top}
        k = len(seq)
        bicritical = False
        if base.kind == ODD_CYCLE:
            ends = (seq[0], seq[-1])
            crit_at = {self._base_end(l.edge, ci)[0] for l in limbs if l.edge in self.critical}
            bicritical = all(y in crit_at for y in ends)
            if bicritical:
                first = next(l for l in limbs if l.heel == seq[0])
                if first.is_stem:
                    seq = seq[::-1]
        pos = {v: i + 1 for i, v in enumerate(seq)}
        for l in limbs:
            l.heel_index = pos[l.heel]
        limbs.sort(key=lambda l: (l.heel_index, l.edge))
        m = len(limbs)
        node = BranchNode(ci, stem, frozenset(), k, limbs, bicritical, children)
        node.parity_ok = (m - k) % 2 == 0
        if not node.parity_ok:
            self.stats.limb_parity_violations += 1
            raise StructureViolation(f"limb count {m} and base order {k} differ in parity at component {ci}")

        def top_color(colors: dict[int, int]) -> int:
            d = sum(1 if c == 2 else -1 for c in colors.values())
            if abs(d) != 1:
                raise StructureViolation(f"limb top has delta {d}, expected +-1")
            return 2 if d == 1 else 1

        def set_top(j: int, want: int) -> None:
            cur = sub_colors[limbs[j].edge]
            if top_color(cur) != want:
                sub_colors[limbs[j].edge] = {v: 3 - c for v, c in cur.items()}
            limbs[j].top_color = want

        if not bicritical:
            for j in range(m):
                set_top(j, 2 if (j + 1) % 2 == 1 else 1)
        else:
            first, last = limbs[0], limbs[-1]
            if first.heel != seq[0] or last.heel != seq[-1] or first.is_stem:
                raise StructureViolation(f"bi-critical cycle {seq} limbs misplaced")
            for j in range(1, m - 1):
                set_top(j, 1 if (j + 1) % 2 == 1 else 2)
            x = self._base_end(first.edge, ci)[1]
            cur = sub_colors[first.edge]
            if cur[x] != 2:
                sub_colors[first.edge] = {v: 3 - c for v, c in cur.items()}
            first.top_color = top_color(sub_colors[first.edge])
            set_top(m - 1, 3 - first.top_color)

        colors: dict[int, int] = {}
        for l in limbs:
            colors.update(sub_colors[l.edge])
        for i, v in enumerate(seq):
            colors[v] = 1 if i % 2 == 0 else 2
        node.vertices = frozenset(colors)
        node.balanced = sum(1 if c == 2 else -1 for c in colors.values()) == 0
        if not node.balanced:
            raise StructureViolation(f"pegs-subgraph at component {ci} is not balanced")
        if bicritical:
            ok = any(
                colors[self._base_end(l.edge, ci)[0]] != colors[self._base_end(l.edge, ci)[1]]
                for l in limbs
                if l.edge in self.critical and not l.is_stem
            )
            node.critical_bichromatic_ok = ok
            if not ok:
                self.stats.critical_bichromatic_violations += 1
                raise StructureViolation(f"no bi-chromatic non-stem critical edge at cycle {seq}")
        self.stats.branches += 1
        if self.debug:
            self._validate(node, seq, colors)
        return colors, node

    def _pegs_edges(self, vertices: frozenset[int]) -> list[int]:
        return [
            e for e, (u, v) in enumerate(self.g.edges)
            if u in vertices and v in vertices and (e in self.f.factor_edges or e in self.alive)
        ]

    def _validate(self, node: BranchNode, seq: list[int], colors: dict[int, int]) -> None:
        verts = sorted(node.vertices)
        index = {v: i for i, v in enumerate(verts)}
        edges = self._pegs_edges(node.vertices)
        local = [(index[self.g.edges[e][0]], index[self.g.edges[e][1]]) for e in edges]

        def cut_ok(a: set[int]) -> bool:
            d = sum(1 for e in edges if (self.g.edges[e][0] in a) != (self.g.edges[e][1] in a))
            dl = abs(sum(1 if colors[v] == 2 else -1 for v in a))
            return d >= dl

        # interval sets A_I built from P_i (limb sets at heel i, or {v_i})
        p_sets: list[set[int]] = []
        for i, v in enumerate(seq, start=1):
            s = {v}
            for l in node.limbs:
                if l.heel_index == i:
                    s |= l.top
            p_sets.append(s)
        interval_ok = True
        for lo in range(len(seq)):
            acc: set[int] = set()
            for hi in range(lo, len(seq)):
                acc |= p_sets[hi]
                if not cut_ok(acc):
                    interval_ok = False
        node.interval_ok = interval_ok
        self.stats.interval_checks += 1
        if len(verts) <= FULL_CHECK_LIMIT:
            size, d, dl = subset_profiles(len(verts), local, [colors[v] for v in verts])
            node.full_ok = bool((d >= abs(dl)).all())
            self.stats.full_checks += 1
            if node.full_ok != node.interval_ok:
                self.stats.interval_full_disagreements += 1
        if not interval_ok or node.full_ok is False:
            self.stats.invalid_pegs += 1
            raise StructureViolation(f"pegs-subgraph at component {node.base} fails d(A) >= Delta(A)")


def color_pegs(g: CubicMultigraph, f: FactorDecomposition, skel: SkeletalStructure, vertices, debug: bool = True):
    """Colour one pes-subgraph; returns (colours, branch tree root, stats)."""
    c = _Colorer(g, f, skel, debug)
    colors, node = c.color_pes(frozenset(vertices))
    return colors, node, c.stats


def merge_colorings(
    g: CubicMultigraph, f: FactorDecomposition, skel: SkeletalStructure, colorings: Sequence[dict[int, int]]
) -> tuple[list[int], int]:
    """Re-insert removed even s-edges newest first; flip one even side when a
    re-inserted critical edge is monochromatic. Returns (colours, flips)."""
    colors = [0] * g.n
    owner = _DSU(g.n)
    for part, col in zip(skel.pes, colorings):
        first = min(part)
        for v in part:
            colors[v] = col[v]
            owner.union(v, first)
    members: dict[int, set[int]] = {}
    for v in range(g.n):
        members.setdefault(owner.find(v), set()).add(v)
    critical = set(f.critical)
    flips = 0
    for rem in reversed(skel.removed):
        u, v = g.edges[rem.edge]
        ru, rv = owner.find(u), owner.find(v)
        if rem.edge in critical and colors[u] == colors[v]:
            # flip the side holding the endpoint that is not on the odd cycle
            cu = f.components[f.comp_of[u]]
            side = rv if cu.kind == ODD_CYCLE and u in cu.ends else ru
            for w in members[side]:
                colors[w] = 3 - colors[w]
            flips += 1
        owner.union(u, v)
        root = owner.find(u)
        merged = members.pop(ru) | members.pop(rv)
        members[root] = merged
    return colors, flips


# ---------------------------------------------------------------- top level

@dataclass
class Weak5Result:
    bisection: Bisection
    orientation: Orientation
    flow: FlowAssignment
    factors: list[FactorDecomposition | None]
    skeletons: list[SkeletalStructure | None]
    trees: list[list[BranchNode]]
    vertex_maps: list[list[int]]
    edge_maps: list[list[int]]
    fallback: bool
    stats: ConstructionStats

    def certificate(self, g: CubicMultigraph) -> dict:
        parts = []
        for f, s, vmap, emap in zip(self.factors, self.skeletons, self.vertex_maps, self.edge_maps):
            parts.append({
                "vertices": vmap,
                "edges": emap,
                "factor": f.to_json() if f else None,
                "skeleton": s.to_json() if s else None,
            })
        return {
            "kind": "weak5",
            "graph": {"n": g.n, "edges": [list(e) for e in g.edges]},
            "components": parts,
            "fallback": self.fallback,
            "bisection": list(self.bisection.colors),
            "point": [fmt(TARGET_POINT.r), fmt(TARGET_POINT.alpha)],
            "flow": self.flow.to_json(g.n),
        }


def _construct_connected(g: CubicMultigraph, debug: bool, stats: ConstructionStats):
    f = find_factor(g)
    if f is None:
        log.warning("no compliant factor found on n=%d; falling back to direct 5-weak search", g.n)
        bis = find_k_weak(g, 5, require_orientable=True)
        if bis is None:
            raise InternalVerificationFailed("no orientable 5-weak bisection exists (search exhausted)")
        return list(bis.colors), None, None, [], True
    return color_from_factor(g, f, debug, stats)


def color_from_factor(g: CubicMultigraph, f: FactorDecomposition, debug: bool = True, stats=None):
    """Run skeleton, branch colouring and merge for a given compliant factor.
    Returns (colours, factor, skeleton, branch trees, False)."""
    if stats is None:
        stats = ConstructionStats()
    skel = build_skeletal(g, f)
    if not skel.even_split_ok:
        stats.even_split_violations += 1
        raise StructureViolation("even-edge removal produced an odd s-subgraph")
    colorer = _Colorer(g, f, skel, debug)
    pes_colors, trees = [], []
    for part in skel.pes:
        col, node = colorer.color_pes(part)
        pes_colors.append(col)
        trees.append(node)
    stats.merge(colorer.stats)
    colors, flips = merge_colorings(g, f, skel, pes_colors)
    stats.flips += flips
    for c in f.components:
        pattern = [colors[v] for v in c.vertices]
        parity = [1 if i % 2 == 0 else 2 for i in range(c.k)]
        if pattern != parity and pattern != [3 - x for x in parity]:
            raise InternalVerificationFailed(f"colouring not alternating on F-component {c.vertices}")
    return colors, f, skel, trees, False


def construct_orientable_5weak(g: CubicMultigraph, debug: bool = False) -> Weak5Result:
    """Orientable 5-weak bisection, its orientation and a (7/2, 1/2)-flow, verified."""
    stats = ConstructionStats()
    colors = [0] * g.n
    factors, skels, trees, vmaps, emaps = [], [], [], [], []
    fallback = False
    for comp in components(g):
        h, vmap, emap = subgraph(g, comp)
        col, f, s, t, fb = _construct_connected(h, debug, stats)
        fallback |= fb
        for i, c in enumerate(col):
            colors[vmap[i]] = c
        factors.append(f)
        skels.append(s)
        trees.append(t)
        vmaps.append(vmap)
        emaps.append(emap)
    bis = Bisection(tuple(colors))
    if not bis.is_bisection:
        raise InternalVerificationFailed("colour classes differ in size")
    weak, report = is_k_weak(g, bis, 5)
    if not weak:
        raise InternalVerificationFailed(f"monochromatic components too large: {report.violators}")
    cert = check_orientable(g, bis)
    if not cert.orientable:
        raise InternalVerificationFailed(f"bisection not orientable; violating set {sorted(cert.violating_set)}")
    flow = flow_in_orientation(g, cert.orientation, TARGET_POINT)
    if not isinstance(flow, FlowAssignment) or not verify_flow(g, flow, TARGET_POINT)[0]:
        raise InternalVerificationFailed("no (7/2, 1/2)-flow in the constructed orientation")
    return Weak5Result(bis, cert.orientation, flow, factors, skels, trees, vmaps, emaps, fallback, stats)


def verify_certificate(data: dict) -> tuple[bool, list[str]]:
    """Independent re-check of a weak5 certificate: 5-weak, orientable, flow bounds."""
    problems = []
    g = CubicMultigraph(data["graph"]["n"], tuple(tuple(e) for e in data["graph"]["edges"]))
    bis = Bisection(tuple(data["bisection"]))
    if not bis.is_bisection:
        problems.append("not a bisection")
        return False, problems
    if not is_k_weak(g, bis, 5)[0]:
        problems.append("not 5-weak")
    if not check_orientable(g, bis).orientable:
        problems.append("not orientable")
    fa = FlowAssignment.from_json(data["flow"])
    p = FlowPoint(*data.get("point", ["7/2", "1/2"]))
    ok, _ = verify_flow(g, fa, p)
    if not ok:
        problems.append("flow violates bounds")
    if fa.orientation.outdegrees(g.n) != list(bis.colors):
        problems.append("orientation outdegrees differ from the bisection")
    return not problems, problems
