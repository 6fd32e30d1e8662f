"""k-weak and orientable k-weak bisections: detection, search and conjecture sweeps."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .canon import canonical_form
from .errors import BadK, UnknownConjecture
from .flow import FlowPoint, check_flow, fmt
from .graph import CubicMultigraph, has_perfect_matching, petersen
from .orientation import Bisection, check_orientable, require_bisection

F = Fraction


@dataclass(frozen=True)
class MonoComponent:
    color: int
    vertices: tuple[int, ...]
    edges: int

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def is_tree(self) -> bool:
        return self.edges == self.size - 1


@dataclass
class MonochromaticReport:
    components: list[MonoComponent]
    violators: list[MonoComponent] = field(default_factory=list)


def monochromatic_components(g: CubicMultigraph, colors) -> list[MonoComponent]:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        if colors[u] == colors[v]:
            parent[find(u)] = find(v)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    ecount: dict[int, int] = {}
    for u, v in g.edges:
        if colors[u] == colors[v]:
            root = find(u)
            ecount[root] = ecount.get(root, 0) + 1
    comps = [MonoComponent(colors[vs[0]], tuple(vs), ecount.get(root, 0)) for root, vs in groups.items()]
    return sorted(comps, key=lambda c: c.vertices)


def _check_k(k) -> None:
    if not isinstance(k, int) or k < 3:
        raise BadK(f"k must be an integer >= 3, got {k!r}")


def is_k_weak(g: CubicMultigraph, bis: Bisection, k: int) -> tuple[bool, MonochromaticReport]:
    """Every monochromatic component a tree on at most k-2 vertices."""
    _check_k(k)
    require_bisection(g, bis)
    comps = monochromatic_components(g, bis.colors)
    bad = [c for c in comps if not c.is_tree or c.size > k - 2]
    return not bad, MonochromaticReport(comps, bad)


def _search_order(g: CubicMultigraph) -> list[int]:
    """Greedy order: next vertex has most already-ordered neighbours (ties by id)."""
    order, placed = [0], {0}
    score = [0] * g.n
    for w in g.neighbors(0):
        score[w] += 1
    while len(order) < g.n:
        v = max((x for x in range(g.n) if x not in placed), key=lambda x: (score[x], -x))
        order.append(v)
        placed.add(v)
        for w in g.neighbors(v):
            score[w] += 1
    return order


def iter_k_weak(g: CubicMultigraph, k: int) -> Iterator[Bisection]:
    """All k-weak bisections with vertex 0 coloured 1, by backtracking.

    Prunes as soon as a monochromatic component among coloured vertices
    closes a cycle or exceeds k-2 vertices, or a colour class overflows n/2.
    """
    _check_k(k)
    n = g.n
    half = n // 2
    order = _search_order(g)
    colors = [0] * n
    count = {1: 0, 2: 0}
    limit = k - 2

    def component_ok(v: int) -> bool:
        c = colors[v]
        seen = {v}
        stack = [v]
        edges = 0
        while stack:
            x = stack.pop()
            for _, w in g.incidence[x]:
                if colors[w] == c:
                    edges += 1
                    if w not in seen:
                        seen.add(w)
                        if len(seen) > limit:
                            return False
                        stack.append(w)
        return edges // 2 == len(seen) - 1

    def rec(i: int) -> Iterator[Bisection]:
        if i == n:
            yield Bisection(tuple(colors))
            return
        v = order[i]
        for c in ((1,) if i == 0 else (1, 2)):
            if count[c] == half:
                continue
            colors[v] = c
            count[c] += 1
            if component_ok(v):
                yield from rec(i + 1)
            count[c] -= 1
            colors[v] = 0

    if order[0] != 0:
        raise AssertionError("search order must start at vertex 0")
    yield from rec(0)


def find_k_weak(g: CubicMultigraph, k: int, require_orientable: bool = False) -> Bisection | None:
    for bis in iter_k_weak(g, k):
        if not require_orientable or check_orientable(g, bis).orientable:
            return bis
    return None


# ---------------------------------------------------------------- conjecture sweeps

CONJECTURES = {
    "bl3": "perfect matching and not Petersen => orientable 4-weak bisection, i.e. (10/3,1/3)-flow",
    "simple414": "simple => (17/4,1/4)-flow",
}

BL3_POINT = FlowPoint(F(10, 3), F(1, 3))
SIMPLE414_POINT = FlowPoint(F(17, 4), F(1, 4))

_PETERSEN_FORM = None


def petersen_form() -> str:
    global _PETERSEN_FORM
    if _PETERSEN_FORM is None:
        _PETERSEN_FORM = canonical_form(petersen())
    return _PETERSEN_FORM


def hunt_one(g: CubicMultigraph, conjecture: str) -> dict:
    """Verdict record for one graph: 'holds', 'skipped' or 'counterexample'."""
    if conjecture not in CONJECTURES:
        raise UnknownConjecture(f"unknown conjecture {conjecture!r}; known: {', '.join(CONJECTURES)}")
    form = canonical_form(g)
    rec: dict = {"conjecture": conjecture, "canonical_form": form, "n": g.n, "edges": [list(e) for e in g.edges]}
    if conjecture == "bl3":
        if form == petersen_form():
            return {**rec, "verdict": "skipped", "reason": "Petersen graph"}
        if not has_perfect_matching(g):
            return {**rec, "verdict": "skipped", "reason": "no perfect matching"}
        bis = find_k_weak(g, 4, require_orientable=True)
        if bis is not None:
            ori = check_orientable(g, bis).orientation
            return {
                **rec,
                "verdict": "holds",
                "certificate": {"bisection": list(bis.colors), "orientation": [list(a) for a in ori.arcs]},
            }
        point = BL3_POINT
    else:
        if not g.is_simple:
            return {**rec, "verdict": "skipped", "reason": "not simple"}
        res = check_flow(g, SIMPLE414_POINT, max_n=max(g.n, 14))
        if res.feasible:
            return {**rec, "verdict": "holds", "certificate": res.assignment.to_json(g.n)}
        point = SIMPLE414_POINT
    res = check_flow(g, point, max_n=max(g.n, 14))
    return {
        **rec,
        "verdict": "counterexample",
        "point": [fmt(point.r), fmt(point.alpha)],
        "violations": [
            {"bisection": list(x.bisection.colors), "set": sorted(x.violating_set), "bound": fmt(x.bound)}
            for x in res.reasons
        ],
        "flow_found": res.feasible,
    }


def hunt(corpus: Iterable[CubicMultigraph], conjecture: str) -> Iterator[dict]:
    if conjecture not in CONJECTURES:
        raise UnknownConjecture(f"unknown conjecture {conjecture!r}; known: {', '.join(CONJECTURES)}")
    for g in corpus:
        yield hunt_one(g, conjecture)
