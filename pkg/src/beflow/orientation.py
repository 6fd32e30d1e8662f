"""Balanced orientations, bisections and the matching-based orientability test."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import MismatchedGraph, NotBisection, TooLarge
from .graph import CubicMultigraph, cut_degree
from .maxflow import FlowNetwork

DEFAULT_MAX_N = 14


@dataclass(frozen=True)
class Orientation:
    """arcs[i] = (tail, head) for edge i of the underlying graph."""

    arcs: tuple[tuple[int, int], ...]

    def outdegrees(self, n: int) -> list[int]:
        out = [0] * n
        for tail, _ in self.arcs:
            out[tail] += 1
        return out

    def is_balanced(self, n: int) -> bool:
        return all(d in (1, 2) for d in self.outdegrees(n))

    def matches(self, g: CubicMultigraph) -> bool:
        return len(self.arcs) == g.m and all(
            {t, h} == {u, v} for (t, h), (u, v) in zip(self.arcs, g.edges)
        )

    def reversed(self) -> "Orientation":
        return Orientation(tuple((h, t) for t, h in self.arcs))

    def outdegree_of_set(self, a: Iterable[int]) -> tuple[int, int]:
        """(d+(A), d-(A)): arcs leaving and entering A."""
        inside = set(a)
        plus = sum(1 for t, h in self.arcs if t in inside and h not in inside)
        minus = sum(1 for t, h in self.arcs if h in inside and t not in inside)
        return plus, minus


@dataclass(frozen=True)
class Bisection:
    """Vertex 2-colouring with colours in {1, 2}.

    Unequal class sizes are representable (a general vertex partition) but
    every analysis below rejects them with NotBisection.
    """

    colors: tuple[int, ...]

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if any(c not in (1, 2) for c in colors):
            raise NotBisection(f"colours must be 1 or 2, got {sorted(set(colors))}")

    @property
    def n(self) -> int:
        return len(self.colors)

    @property
    def is_bisection(self) -> bool:
        return 2 * self.colors.count(1) == len(self.colors)

    def class_of(self, color: int) -> list[int]:
        return [v for v, c in enumerate(self.colors) if c == color]

    def swapped(self) -> "Bisection":
        return Bisection(tuple(3 - c for c in self.colors))

    def normalized(self) -> "Bisection":
        """Representative of the swap class with vertex 0 coloured 1."""
        return self if not self.colors or self.colors[0] == 1 else self.swapped()

    def mask(self, color: int) -> int:
        return sum(1 << v for v, c in enumerate(self.colors) if c == color)


@dataclass(frozen=True)
class OrientabilityCertificate:
    orientation: Orientation | None = None
    violating_set: frozenset[int] | None = None

    @property
    def orientable(self) -> bool:
        return self.orientation is not None


def delta(bis: Bisection, a: Iterable[int]) -> int:
    """|V2 ∩ A| - |V1 ∩ A|."""
    return sum(1 if bis.colors[v] == 2 else -1 for v in set(a))


def require_bisection(g: CubicMultigraph, bis: Bisection) -> None:
    if bis.n != g.n:
        raise MismatchedGraph(f"bisection has {bis.n} colours for a graph on {g.n} vertices")
    if not bis.is_bisection:
        raise NotBisection(f"colour classes have sizes {bis.colors.count(1)} and {bis.colors.count(2)}")


def check_orientable(g: CubicMultigraph, bis: Bisection) -> OrientabilityCertificate:
    """Assign each edge a tail so that vertex v is the tail of exactly bis(v) edges.

    Unit-capacity flow source -> edge -> endpoint -> sink (capacity bis(v)).
    A shortfall leaves a residual-reachable vertex set W with
    sum_W bis(v) < e(W), which is exactly d(W) < -delta(W).
    """
    require_bisection(g, bis)
    n, m = g.n, g.m
    src, sink = m + n, m + n + 1
    net = FlowNetwork(m + n + 2)
    pick = []
    for i, (u, v) in enumerate(g.edges):
        net.add_arc(src, i, 1)
        pick.append((net.add_arc(i, m + u, 1), net.add_arc(i, m + v, 1)))
    for v in range(n):
        net.add_arc(m + v, sink, bis.colors[v])
    if net.max_flow(src, sink) == m:
        arcs = []
        for i, (u, v) in enumerate(g.edges):
            arcs.append((u, v) if net.flow_on(pick[i][0]) else (v, u))
        return OrientabilityCertificate(orientation=Orientation(tuple(arcs)))
    reach = net.reachable(src)
    w = frozenset(x - m for x in reach if m <= x < m + n)
    return OrientabilityCertificate(violating_set=w)


def is_orientable(g: CubicMultigraph, bis: Bisection) -> bool:
    return check_orientable(g, bis).orientable


def bisection_of(orientation: Orientation, n: int) -> Bisection:
    return Bisection(tuple(orientation.outdegrees(n)))


def _euler_orient(n: int, edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Eulerian orientation of an even-degree multigraph (Hierholzer per component)."""
    inc: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        inc[u].append(i)
        inc[v].append(i)
    used = [False] * len(edges)
    ptr = [0] * n
    arcs: list[tuple[int, int] | None] = [None] * len(edges)
    for start in range(n):
        stack = [start]
        while stack:
            v = stack[-1]
            while ptr[v] < len(inc[v]) and used[inc[v][ptr[v]]]:
                ptr[v] += 1
            if ptr[v] == len(inc[v]):
                stack.pop()
                continue
            e = inc[v][ptr[v]]
            used[e] = True
            a, b = edges[e]
            w = b if a == v else a
            arcs[e] = (v, w)
            stack.append(w)
    return arcs  # type: ignore[return-value]


def balanced_orientation(g: CubicMultigraph, pairing: Sequence[tuple[int, int]] | None = None) -> Orientation:
    """Add a virtual perfect matching, orient the 4-regular result Eulerian, drop the matching."""
    if pairing is None:
        pairing = [(2 * i, 2 * i + 1) for i in range(g.n // 2)]
    if sorted(v for p in pairing for v in p) != list(range(g.n)):
        raise ValueError("pairing must be a perfect matching on all vertices")
    arcs = _euler_orient(g.n, list(g.edges) + list(pairing))
    return Orientation(tuple(arcs[: g.m]))


def iter_bisections(n: int) -> Iterator[Bisection]:
    """All bisections of n vertices up to the colour swap (vertex 0 coloured 1)."""
    half = n // 2
    for twos in combinations(range(1, n), half):
        colors = [1] * n
        for v in twos:
            colors[v] = 2
        yield Bisection(tuple(colors))


def enumerate_orientable_bisections(
    g: CubicMultigraph, max_n: int = DEFAULT_MAX_N
) -> Iterator[tuple[Bisection, Orientation]]:
    if g.n > max_n:
        raise TooLarge(f"bisection enumeration limited to n <= {max_n}, got {g.n}")
    for bis in iter_bisections(g.n):
        cert = check_orientable(g, bis)
        if cert.orientable:
            yield bis, cert.orientation


def cut_values(g: CubicMultigraph, bis: Bisection, a: Iterable[int]) -> tuple[int, int, int]:
    """(d(A), Delta(A), |A|) for one vertex set."""
    a = set(a)
    return cut_degree(g, a), abs(delta(bis, a)), len(a)
