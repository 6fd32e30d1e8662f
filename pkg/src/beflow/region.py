"""Exact bounded-excess domains in the r-alpha plane.

Every domain handled here is upward closed, so it is stored as its lower-left
frontier: a monotone polyline starting at (2, 1) and ending at (r_min,
alpha_min), continued by the vertical ray above (2, 1) and the horizontal ray
to the right of the last vertex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BadK, EmptyBelowOne, NotOrientable, TooLarge, UndefinedTrace
from .flow import FlowPoint, fmt
from .graph import CubicMultigraph
from .orientation import (
    DEFAULT_MAX_N,
    Bisection,
    check_orientable,
    enumerate_orientable_bisections,
    require_bisection,
)
from .subsets import MAX_SUBSET_N, graph_profiles, mask_to_set

F = Fraction
ONE, TWO = F(1), F(2)
DEFAULT_RMAX = F(8)
MAX_BINDING_SETS = 8


def trace(p) -> Fraction:
    """(r - 2 alpha) / (1 - alpha): where the line through (2, 1) and p meets alpha = 0."""
    r, alpha = _coords(p)
    if alpha >= 1:
        raise UndefinedTrace(f"trace undefined for alpha >= 1, got {fmt(alpha)}")
    return (r - 2 * alpha) / (1 - alpha)


def _coords(p) -> tuple[Fraction, Fraction]:
    if isinstance(p, FlowPoint):
        return p.r, p.alpha
    r, alpha = p
    return F(r), F(alpha)


@dataclass(frozen=True)
class HalfPlane:
    """alpha >= a - b r, generated by the vertex set ``source``."""

    a: Fraction
    b: Fraction
    source: frozenset[int] = frozenset()

    def at(self, r: Fraction) -> Fraction:
        return self.a - self.b * r


@dataclass(frozen=True)
class FrontierVertex:
    r: Fraction
    alpha: Fraction
    witness: Bisection | None = None
    binding: tuple[frozenset[int], ...] = ()


@dataclass(frozen=True)
class FlowRegion:
    vertices: tuple[FrontierVertex, ...]
    window: tuple[Fraction, Fraction, Fraction, Fraction] = (TWO, DEFAULT_RMAX, F(0), ONE)
    label: str = ""

    @property
    def alpha_min(self) -> Fraction:
        return self.vertices[-1].alpha

    @property
    def r_min(self) -> Fraction:
        return self.vertices[-1].r

    @property
    def points(self) -> list[tuple[Fraction, Fraction]]:
        return [(v.r, v.alpha) for v in self.vertices]

    def level(self, r) -> Fraction:
        """Lowest alpha in the region at abscissa r (r >= 2)."""
        r = F(r)
        if r < 2:
            raise ValueError("regions live in r >= 2")
        vs = self.vertices
        if r >= vs[-1].r:
            return vs[-1].alpha
        for p, q in zip(vs, vs[1:]):
            if p.r <= r <= q.r:
                return p.alpha + (q.alpha - p.alpha) * (r - p.r) / (q.r - p.r)
        return vs[0].alpha

    def contains(self, p) -> bool:
        r, alpha = _coords(p)
        return r >= 2 and alpha >= self.level(r)

    def breakpoints(self) -> list[Fraction]:
        return [v.r for v in self.vertices]

    def with_window(self, r_max) -> "FlowRegion":
        lo, _, alo, ahi = self.window
        return FlowRegion(self.vertices, (lo, F(r_max), alo, ahi), self.label)

    def to_json(self) -> dict:
        lo, hi, alo, ahi = self.window
        return {
            "window": {"r": [fmt(lo), fmt(hi)], "alpha": [fmt(alo), fmt(ahi)]},
            "frontier": [
                {
                    "r": fmt(v.r),
                    "alpha": fmt(v.alpha),
                    "witness_bisection": list(v.witness.colors) if v.witness else None,
                    "binding_sets": [sorted(s) for s in v.binding],
                }
                for v in self.vertices
            ],
            "alpha_min": fmt(self.alpha_min),
            "r_min": fmt(self.r_min),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FlowRegion":
        w = data.get("window", {})
        window = tuple(F(x) for x in w.get("r", ["2", "8"]) + w.get("alpha", ["0", "1"]))
        verts = tuple(
            FrontierVertex(
                F(v["r"]),
                F(v["alpha"]),
                Bisection(tuple(v["witness_bisection"])) if v.get("witness_bisection") else None,
                tuple(frozenset(s) for s in v.get("binding_sets", [])),
            )
            for v in data["frontier"]
        )
        return cls(verts, window)


# ---------------------------------------------------------------- half-planes

@dataclass
class _Lines:
    """Candidate lines alpha = a - b r, one per slope, with the masks generating them."""

    a: list[Fraction] = field(default_factory=list)
    b: list[Fraction] = field(default_factory=list)
    masks: list[list[int]] = field(default_factory=list)
    triples: dict[tuple[Fraction, Fraction], list[int]] = field(default_factory=dict)


def _bisection_lines(g: CubicMultigraph, bis: Bisection, max_n: int) -> _Lines:
    size, d, dl = graph_profiles(g, bis.colors, max_n)
    size, d, big = size[1:], d[1:], np.abs(dl[1:])
    k = 4 * g.n + 4
    keys = (d * k + big) * k + size
    uniq, first = np.unique(keys, return_index=True)
    best: dict[Fraction, tuple[Fraction, list[int]]] = {}
    for key, idx in zip(uniq.tolist(), first.tolist()):
        s = key % k
        bd = (key // k) % k
        dd = key // (k * k)
        a, b = F(dd, s), F(dd - bd, 2 * s)
        cur = best.get(b)
        if cur is None or a > cur[0]:
            best[b] = (a, [idx + 1])
        elif a == cur[0]:
            cur[1].append(idx + 1)
    # alpha >= 0 is the slope-0 constraint when no cut supplies a positive one
    best.setdefault(F(0), (F(0), []))
    out = _Lines()
    for b in sorted(best):
        out.a.append(best[b][0])
        out.b.append(b)
        out.masks.append(best[b][1])
    # masks for every (d, Delta, |A|) triple, for binding-set lookup
    for key, idx in zip(uniq.tolist(), first.tolist()):
        s = key % k
        bd = (key // k) % k
        dd = key // (k * k)
        out.triples.setdefault((F(dd, s), F(dd - bd, 2 * s)), []).append(idx + 1)
    return out


def half_planes(g: CubicMultigraph, bis: Bisection, max_n: int = MAX_SUBSET_N) -> list[HalfPlane]:
    """Non-dominated constraints alpha >= a - b r (strongest intercept per slope)."""
    lines = _bisection_lines(g, bis, max_n)
    return [
        HalfPlane(a, b, mask_to_set(ms[0]) if ms else frozenset())
        for a, b, ms in zip(lines.a, lines.b, lines.masks)
    ]


def _upper_envelope(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[tuple[Fraction, Fraction, int]]:
    """Vertices (r, alpha, line index) of max_i(a_i - b_i r) on r >= 2; b_i >= 0 and some b_i == 0."""
    r0 = TWO
    vals = [a[i] - b[i] * r0 for i in range(len(a))]
    top = max(vals)
    cur = min((i for i in range(len(a)) if vals[i] == top), key=lambda i: b[i])
    out = [(r0, top, cur)]
    while b[cur] > 0:
        nxt, nr = None, None
        for j in range(len(a)):
            if b[j] >= b[cur]:
                continue
            rj = (a[cur] - a[j]) / (b[cur] - b[j])
            if nr is None or rj < nr or (rj == nr and b[j] < b[nxt]):
                nxt, nr = j, rj
        cur = nxt
        out.append((nr, a[cur] - b[cur] * nr, cur))
    return out


def bed_of_bisection(
    g: CubicMultigraph,
    bis: Bisection,
    max_n: int = MAX_SUBSET_N,
    r_max=DEFAULT_RMAX,
    check: bool = True,
) -> FlowRegion:
    """Intersection of the cut half-planes of one orientable bisection."""
    require_bisection(g, bis)
    if g.n > max_n:
        raise TooLarge(f"bed_of_bisection limited to n <= {max_n}")
    if check and not check_orientable(g, bis).orientable:
        raise NotOrientable("bisection is not orientable")
    lines = _bisection_lines(g, bis, max_n)
    env = _upper_envelope(lines.a, lines.b)
    verts = []
    for r, alpha, _ in env:
        tight = []
        for (a, b), masks in lines.triples.items():
            if a - b * r == alpha:
                tight.extend(masks)
        tight = sorted(tight, key=lambda m: (bin(m).count("1"), m))[:MAX_BINDING_SETS]
        verts.append(FrontierVertex(r, alpha, bis, tuple(mask_to_set(m) for m in tight)))
    return FlowRegion(_merge_collinear(verts), (TWO, F(r_max), F(0), ONE))


def _collinear(p: FrontierVertex, q: FrontierVertex, s: FrontierVertex) -> bool:
    return (q.r - p.r) * (s.alpha - p.alpha) == (s.r - p.r) * (q.alpha - p.alpha)


def _merge_collinear(verts: list[FrontierVertex]) -> tuple[FrontierVertex, ...]:
    out: list[FrontierVertex] = []
    for v in verts:
        if out and out[-1].r == v.r and out[-1].alpha == v.alpha:
            continue
        while len(out) >= 2 and _collinear(out[-2], out[-1], v):
            out.pop()
        out.append(v)
    # a trailing horizontal piece is part of the ray, not the polyline
    while len(out) >= 2 and out[-1].alpha == out[-2].alpha:
        out.pop()
    return tuple(out)


# ---------------------------------------------------------------- union over bisections

def _lower_envelope(regions: Sequence[FlowRegion]) -> list[tuple[Fraction, Fraction, int]]:
    """Vertices (r, alpha, region index) of min_k level_k(r) for r >= 2."""
    cuts = sorted({v.r for reg in regions for v in reg.vertices})
    out: list[tuple[Fraction, Fraction, int]] = []
    for lo, hi in zip(cuts, cuts[1:] + [None]):
        if hi is None:
            vals = [reg.alpha_min for reg in regions]
            k = min(range(len(regions)), key=lambda i: vals[i])
            out.append((lo, vals[k], k))
            break
        at_lo = [reg.level(lo) for reg in regions]
        at_hi = [reg.level(hi) for reg in regions]
        slope = [(at_hi[i] - at_lo[i]) / (hi - lo) for i in range(len(regions))]
        # within [lo, hi] each level is linear: sweep the lower envelope of lines
        best = min(at_lo)
        cur = min((i for i in range(len(regions)) if at_lo[i] == best), key=lambda i: slope[i])
        r = lo
        out.append((r, best, cur))
        while True:
            nxt, nr = None, None
            for j in range(len(regions)):
                if slope[j] >= slope[cur]:
                    continue
                vj = at_lo[j] + slope[j] * (r - lo)
                vc = at_lo[cur] + slope[cur] * (r - lo)
                rj = r + (vj - vc) / (slope[cur] - slope[j])
                if rj >= hi or rj <= r:
                    continue
                if nr is None or rj < nr or (rj == nr and slope[j] < slope[nxt]):
                    nxt, nr = j, rj
            if nxt is None:
                break
            cur, r = nxt, nr
            out.append((r, at_lo[cur] + slope[cur] * (r - lo), cur))
    return out


@dataclass
class GraphBed:
    region: FlowRegion
    bisections: list[Bisection]
    regions: list[FlowRegion]

    @property
    def witness_map(self) -> list[tuple[Fraction, Fraction, Bisection | None]]:
        return [(v.r, v.alpha, v.witness) for v in self.region.vertices]


def bed_of_graph_detail(g: CubicMultigraph, max_n: int = DEFAULT_MAX_N, r_max=DEFAULT_RMAX) -> GraphBed:
    if g.n > max_n:
        raise TooLarge(f"bed_of_graph limited to n <= {max_n}, got {g.n}")
    bisections, regions = [], []
    for bis, _ in enumerate_orientable_bisections(g, max_n):
        bisections.append(bis)
        regions.append(bed_of_bisection(g, bis, max_n=MAX_SUBSET_N, r_max=r_max, check=False))
    distinct: dict[tuple, int] = {}
    for i, reg in enumerate(regions):
        distinct.setdefault(tuple(reg.points), i)
    reps = list(distinct.values())
    env = _lower_envelope([regions[i] for i in reps])
    verts = []
    for r, alpha, k in env:
        src = regions[reps[k]]
        tight = next((v for v in src.vertices if v.r == r and v.alpha == alpha), None)
        verts.append(FrontierVertex(r, alpha, bisections[reps[k]], tight.binding if tight else ()))
    region = FlowRegion(_merge_collinear(verts), (TWO, F(r_max), F(0), ONE))
    return GraphBed(region, bisections, regions)


def bed_of_graph(g: CubicMultigraph, max_n: int = DEFAULT_MAX_N, r_max=DEFAULT_RMAX) -> FlowRegion:
    """Union of bed over all orientable bisections (pointwise minimum of frontiers)."""
    return bed_of_graph_detail(g, max_n, r_max).region


def min_trace(region: FlowRegion) -> Fraction:
    """Minimum trace over the region; attained at a frontier vertex other than (2, 1)."""
    cands = [v for v in region.vertices if v.alpha < 1]
    if not cands:
        raise EmptyBelowOne("region has no point with alpha < 1")
    return min(trace((v.r, v.alpha)) for v in cands)


# ---------------------------------------------------------------- named regions

def m_endpoint(k: int) -> tuple[Fraction, Fraction]:
    """Lower end (3 + (k-3)/(k-1), (k-3)/(k-1)) of the upper part of the trace-k segment."""
    _check_k(k)
    t = F(k - 3, k - 1)
    return 3 + t, t


def _check_k(k) -> None:
    if not isinstance(k, int) or k < 3:
        raise BadK(f"k must be an integer >= 3, got {k!r}")


def urd(p, r_max=DEFAULT_RMAX) -> FlowRegion:
    r0, a0 = _coords(p)
    verts = [FrontierVertex(TWO, ONE)]
    if (r0, a0) != (TWO, ONE):
        verts.append(FrontierVertex(r0, a0))
    return FlowRegion(tuple(verts), (TWO, F(r_max), F(0), ONE), label=f"urd({fmt(r0)},{fmt(a0)})")


@dataclass(frozen=True)
class NamedRegion:
    """L_k, M_k, A_k or urd(p); membership follows the open/closed boundary conventions."""

    tag: str
    k: int | None = None
    point: tuple[Fraction, Fraction] | None = None

    def contains(self, p) -> bool:
        r, alpha = _coords(p)
        k = self.k
        if self.tag == "L":
            return 2 < r <= k and alpha >= 0 and alpha * (k - 2) == k - r
        if self.tag == "M":
            return NamedRegion("L", k).contains((r, alpha)) and alpha >= m_endpoint(k)[1]
        if self.tag == "A":
            return 2 < r < 4 and F(k - r, k - 2) <= alpha < F(k - r + 1, k - 1)
        if self.tag == "urd":
            return urd(self.point).contains((r, alpha))
        raise ValueError(self.tag)

    @property
    def segment(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        """Closed hull of L_k / M_k as (upper-left end, lower-right end)."""
        if self.tag == "L":
            return (TWO, ONE), (F(self.k), F(0))
        if self.tag == "M":
            return (TWO, ONE), m_endpoint(self.k)
        raise ValueError(f"{self.tag} is not a segment")

    @property
    def corners(self) -> list[tuple[Fraction, Fraction]]:
        if self.tag in ("L", "M"):
            return list(self.segment)
        if self.tag == "A":
            er, ea = m_endpoint(self.k)
            return [(er, ea), (TWO, ONE), (F(4), ea)]
        return urd(self.point).points

    @property
    def name(self) -> str:
        if self.tag == "urd":
            return f"urd({fmt(self.point[0])},{fmt(self.point[1])})"
        return f"{self.tag}_{self.k}"


def named_region(tag: str, k: int | None = None, point=None) -> NamedRegion:
    tag = tag.strip()
    if tag.lower() == "urd":
        if point is None:
            raise ValueError("urd needs a point")
        return NamedRegion("urd", point=_coords(point))
    letter = tag[0].upper()
    if letter not in "LMA":
        raise ValueError(f"unknown region tag {tag!r}")
    if k is None and "_" in tag:
        k = int(tag.split("_", 1)[1])
    _check_k(k)
    return NamedRegion(letter, k)


def parse_named(spec: str) -> NamedRegion:
    """'M_4', 'L5', 'A_4' or 'urd(7/2,1/2)'."""
    from .flow import parse_rational

    s = spec.strip()
    if s.lower().startswith("urd"):
        inner = s[s.index("(") + 1: s.rindex(")")]
        r, a = (parse_rational(x) for x in inner.split(","))
        return named_region("urd", point=(r, a))
    tag, rest = s[0], s[1:].lstrip("_")
    return named_region(tag, int(rest))


def contains_segment(region: FlowRegion, p, q) -> bool:
    """Closed segment p-q inside the region (exact; checks every breakpoint in range)."""
    (pr, pa), (qr, qa) = _coords(p), _coords(q)
    if pr > qr:
        (pr, pa), (qr, qa) = (qr, qa), (pr, pa)
    if not (region.contains((pr, pa)) and region.contains((qr, qa))):
        return False
    if pr == qr:
        return True
    for r in region.breakpoints():
        if pr < r < qr:
            alpha = pa + (qa - pa) * (r - pr) / (qr - pr)
            if alpha < region.level(r):
                return False
    return True


def named_in_region(named: NamedRegion, region: FlowRegion) -> bool:
    if named.tag in ("L", "M"):
        return contains_segment(region, *named.segment)
    if named.tag == "urd":
        return region_subset(urd(named.point), region)
    # A_k: every point dominates a point of its left edge M_k or of its bottom
    # edge, and the bottom edge is in an upward region once its left end is
    return contains_segment(region, *NamedRegion("M", named.k).segment)


def region_subset(xa: FlowRegion, xb: FlowRegion) -> bool:
    """xa ⊆ xb for upward-closed frontier regions."""
    rs = sorted(set(xa.breakpoints()) | set(xb.breakpoints()))
    return all(xb.level(r) <= xa.level(r) for r in rs) and xb.alpha_min <= xa.alpha_min


def region_equal(xa: FlowRegion, xb: FlowRegion) -> bool:
    return region_subset(xa, xb) and region_subset(xb, xa)


def dominant_orientation_search(g: CubicMultigraph, max_n: int = 12) -> Bisection | None:
    """A bisection whose bed equals bed(G), if one exists."""
    if g.n > max_n:
        raise TooLarge(f"dominant orientation search limited to n <= {max_n}")
    detail = bed_of_graph_detail(g, max_n=max(max_n, g.n))
    for bis, reg in zip(detail.bisections, detail.regions):
        if region_equal(reg, detail.region):
            return bis
    return None


def is_convex(region: FlowRegion) -> bool:
    """Frontier slopes nondecreasing (including the final horizontal ray)."""
    pts = region.points
    slopes = [(q[1] - p[1]) / (q[0] - p[0]) for p, q in zip(pts, pts[1:])] + [F(0)]
    return all(s <= t for s, t in zip(slopes, slopes[1:]))
