"""Exact (r, alpha)-flow feasibility and witnesses.

A flow in a fixed orientation is a feasible circulation in the network
obtained by adding an excess collector x joined to every vertex by two
opposite arcs with bounds [0, alpha]; original arcs get bounds [1, r - 1].
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import AlphaOutOfRange, BadBounds, MalformedInput, MismatchedGraph, TooLarge
from .graph import CubicMultigraph
from .maxflow import FlowNetwork
from .orientation import (
    DEFAULT_MAX_N,
    Bisection,
    Orientation,
    balanced_orientation,
    bisection_of,
    enumerate_orientable_bisections,
    require_bisection,
)
from .subsets import graph_profiles, mask_to_set

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse "p/q" or "p" exactly; decimals and floats are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL.match(str(text))
    if not match:
        raise MalformedInput(f"expected a rational 'p/q', got {text!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise MalformedInput(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def fmt(q: Fraction) -> str:
    return str(Fraction(q))


@dataclass(frozen=True)
class FlowPoint:
    r: Fraction
    alpha: Fraction

    def __post_init__(self):
        r, alpha = parse_rational(self.r), parse_rational(self.alpha)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "alpha", alpha)
        if r < 2 or alpha < 0:
            raise MalformedInput(f"need r >= 2 and alpha >= 0, got ({r}, {alpha})")

    def __str__(self):
        return f"({fmt(self.r)}, {fmt(self.alpha)})"


@dataclass(frozen=True)
class FlowAssignment:
    orientation: Orientation
    values: tuple[Fraction, ...]

    def excesses(self, n: int) -> list[Fraction]:
        """Signed out-minus-in flow at every vertex."""
        ex = [Fraction(0)] * n
        for (t, h), f in zip(self.orientation.arcs, self.values):
            ex[t] += f
            ex[h] -= f
        return ex

    def to_json(self, n: int) -> dict:
        return {
            "orientation": [list(a) for a in self.orientation.arcs],
            "values": [fmt(f) for f in self.values],
            "excess": [fmt(x) for x in self.excesses(n)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FlowAssignment":
        return cls(
            Orientation(tuple((int(t), int(h)) for t, h in data["orientation"])),
            tuple(parse_rational(v) for v in data["values"]),
        )


@dataclass
class CirculationNetwork:
    size: int
    arcs: list[tuple[int, int, Fraction, Fraction]] = field(default_factory=list)

    def add(self, tail: int, head: int, lower, upper) -> int:
        self.arcs.append((tail, head, Fraction(lower), Fraction(upper)))
        return len(self.arcs) - 1


@dataclass(frozen=True)
class CirculationResult:
    values: tuple[Fraction, ...] | None
    violating_set: frozenset[int] | None = None

    @property
    def feasible(self) -> bool:
        return self.values is not None


def excess_network(g: CubicMultigraph, orientation: Orientation, p: FlowPoint) -> CirculationNetwork:
    """Arcs 0..m-1 mirror the edges; then (x,v), (v,x) for each v; x = n."""
    net = CirculationNetwork(g.n + 1)
    for t, h in orientation.arcs:
        net.add(t, h, 1, p.r - 1)
    x = g.n
    for v in range(g.n):
        net.add(x, v, 0, p.alpha)
        net.add(v, x, 0, p.alpha)
    return net


def feasible_circulation(net: CirculationNetwork) -> CirculationResult:
    """Circulation within [lower, upper] on every arc, or a set A with
    sum of lower bounds on arcs leaving A > sum of upper bounds on arcs entering A.
    """
    for i, (_, _, lo, hi) in enumerate(net.arcs):
        if lo > hi:
            raise BadBounds(f"arc {i}: lower {lo} > upper {hi}")
    size = net.size
    src, sink = size, size + 1
    fn = FlowNetwork(size + 2)
    balance = [Fraction(0)] * size
    ids = []
    for t, h, lo, hi in net.arcs:
        ids.append(fn.add_arc(t, h, hi - lo))
        balance[h] += lo
        balance[t] -= lo
    need = Fraction(0)
    for v, b in enumerate(balance):
        if b > 0:
            fn.add_arc(src, v, b)
            need += b
        elif b < 0:
            fn.add_arc(v, sink, -b)
    if fn.max_flow(src, sink) == need:
        values = tuple(lo + fn.flow_on(a) for a, (_, _, lo, _) in zip(ids, net.arcs))
        return CirculationResult(values)
    # Residual-reachable R is the side receiving too much forced inflow;
    # its complement pushes out more lower-bound flow than R can take back.
    reach = fn.reachable(src)
    return CirculationResult(None, frozenset(v for v in range(size) if v not in reach))


def condition_bound(d: int, big_delta: int, size: int, r: Fraction) -> Fraction:
    """Right-hand side (2 d - (d - Delta) r) / (2 |A|) of the cut condition."""
    return (2 * d - (d - big_delta) * r) / (2 * size)


@dataclass(frozen=True)
class Infeasibility:
    bisection: Bisection
    violating_set: frozenset[int]
    bound: Fraction


@dataclass
class FlowResult:
    point: FlowPoint
    assignment: FlowAssignment | None = None
    bisection: Bisection | None = None
    reasons: list[Infeasibility] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.assignment is not None


def _cut_from_network(g: CubicMultigraph, bad: frozenset[int]) -> frozenset[int]:
    """Translate a network cut (may contain the collector) into a vertex set of g."""
    x = g.n
    if x in bad:
        return frozenset(v for v in range(g.n) if v not in bad)
    return bad


def flow_in_orientation(g: CubicMultigraph, orientation: Orientation, p: FlowPoint):
    """FlowAssignment if the fixed orientation carries an (r, alpha)-flow, else the violating vertex set."""
    if not orientation.matches(g):
        raise MismatchedGraph("orientation does not match the graph's edges")
    res = feasible_circulation(excess_network(g, orientation, p))
    if res.feasible:
        return FlowAssignment(orientation, res.values[: g.m])
    return _cut_from_network(g, res.violating_set)


def check_flow(g: CubicMultigraph, p: FlowPoint, max_n: int = DEFAULT_MAX_N) -> FlowResult:
    if p.alpha >= 3:
        raise AlphaOutOfRange(f"alpha must be < 3, got {p.alpha}")
    result = FlowResult(p)
    if p.alpha >= 1:
        ori = balanced_orientation(g)
        result.assignment = FlowAssignment(ori, tuple(Fraction(1) for _ in range(g.m)))
        result.bisection = bisection_of(ori, g.n)
        return result
    for bis, ori in enumerate_orientable_bisections(g, max_n):
        out = flow_in_orientation(g, ori, p)
        if isinstance(out, FlowAssignment):
            result.assignment = out
            result.bisection = bis
            result.reasons.clear()
            return result
        d = sum(1 for u, v in g.edges if (u in out) != (v in out))
        big_delta = abs(sum(1 if bis.colors[v] == 2 else -1 for v in out))
        result.reasons.append(Infeasibility(bis, out, condition_bound(d, big_delta, len(out), p.r)))
    return result


def verify_flow(g: CubicMultigraph, fa: FlowAssignment, p: FlowPoint) -> tuple[bool, list[Fraction]]:
    """Exact check of edge bounds [1, r-1] and per-vertex |excess| <= alpha."""
    if len(fa.values) != g.m or not fa.orientation.matches(g):
        raise MismatchedGraph("flow assignment does not cover the graph's edges")
    ex = fa.excesses(g.n)
    ok = all(1 <= f <= p.r - 1 for f in fa.values) and all(abs(x) <= p.alpha for x in ex)
    return ok, [abs(x) for x in ex]


@dataclass(frozen=True)
class OracleResult:
    holds: bool
    worst_set: frozenset[int]
    worst_bound: Fraction


def cut_condition_oracle(g: CubicMultigraph, bis: Bisection, p: FlowPoint, max_n: int = 20) -> OracleResult:
    """alpha >= (2d(A) - (d(A) - Delta(A)) r) / (2|A|) for every nonempty A, by enumeration."""
    require_bisection(g, bis)
    if g.n > max_n:
        raise TooLarge(f"subset oracle limited to n <= {max_n}")
    size, d, dl = graph_profiles(g, bis.colors, max_n)
    size, d, big = size[1:], d[1:], np.abs(dl[1:])
    # Compare exactly: bound = (2d - (d - D) r) / (2|A|) with r = a/b.
    a, b = p.r.numerator, p.r.denominator
    num = 2 * d * b - (d - big) * a          # bound * 2|A| * b
    den = 2 * size * b
    # exact argmax over a common denominator (fits int64 for n <= 20)
    common = 2 * b * math.lcm(*range(1, g.n + 1))
    scaled = num * (common // den)
    best = int(np.argmax(scaled))
    worst = Fraction(int(num[best]), int(den[best]))
    return OracleResult(p.alpha >= worst, mask_to_set(best + 1), worst)
