"""Acceptance criteria AC-1 .. AC-10.

Each test prints exactly one line "AC-n PASS|FAIL <detail>" (visible under
pytest -v) and then asserts. Tolerances are exact: every comparison is on
Fractions, and every sweep must have zero discrepancies.
"""
import time
from fractions import Fraction as F

import pytest

from beflow.bisection import find_k_weak, hunt, is_k_weak
from beflow.canon import corpus
from beflow.errors import UndefinedTrace
from beflow.flow import FlowAssignment, FlowPoint, check_flow, cut_condition_oracle, flow_in_orientation, verify_flow
from beflow.graph import CubicMultigraph, k4, k33, petersen
from beflow.orientation import Bisection, check_orientable, enumerate_orientable_bisections
from beflow.region import (
    bed_of_graph,
    m_endpoint,
    min_trace,
    named_in_region,
    named_region,
    region_equal,
    trace,
    urd,
)
from beflow.weak5 import TARGET_POINT, ConstructionStats, construct_orientable_5weak
from oracles import all_bisections, orientable_by_subsets, cut_condition_holds

pytestmark = pytest.mark.slow


def report(capsys, tag, ok, detail):
    with capsys.disabled():
        print(f"\n{tag} {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"{tag}: {detail}"


_SWEEP = {}


def weak5_sweep():
    """One debug-mode construction per graph n <= 12, shared by AC-1 and AC-10."""
    if not _SWEEP:
        stats = ConstructionStats()
        rows = []
        for g in corpus(12):
            t = time.perf_counter()
            res = construct_orientable_5weak(g, debug=True)
            stats.merge(res.stats)
            flow = check_flow(g, TARGET_POINT)
            rows.append((g, res, flow, time.perf_counter() - t))
        _SWEEP.update(rows=rows, stats=stats)
    return _SWEEP


_BEDS = {}


def beds(max_n):
    for g in corpus(max_n):
        key = (g.n, g.edges)
        if key not in _BEDS:
            _BEDS[key] = bed_of_graph(g)
        yield g, _BEDS[key]


def test_ac1_weak5_sweep(capsys):
    sw = weak5_sweep()
    bad = []
    for g, res, flow, _ in sw["rows"]:
        ok = (
            not res.fallback
            and res.bisection.is_bisection
            and is_k_weak(g, res.bisection, 5)[0]
            and check_orientable(g, res.bisection).orientable
            and flow.feasible
            and verify_flow(g, flow.assignment, TARGET_POINT)[0]
        )
        if not ok:
            bad.append(g.edges)
    slowest = max(t for *_, t in sw["rows"])
    fallbacks = sum(res.fallback for _, res, _, _ in sw["rows"])
    report(capsys, "AC-1", not bad and slowest < 5,
           f"{len(sw['rows'])} graphs n<=12, {len(bad)} failures, {fallbacks} fallbacks, slowest {slowest:.2f}s")


def test_ac2_circulation_vs_cut_condition(capsys):
    grid = [FlowPoint(r, a) for r in (2, F(5, 2), 3, F(7, 2), 4) for a in (0, F(1, 8), F(1, 4), F(1, 2), F(3, 4))]
    checks = mismatches = 0
    for g in corpus(8):
        for bis, ori in enumerate_orientable_bisections(g):
            for p in grid:
                out = flow_in_orientation(g, ori, p)
                circ = isinstance(out, FlowAssignment)
                if circ and not verify_flow(g, out, p)[0]:
                    mismatches += 1
                oracle = cut_condition_oracle(g, bis, p).holds
                plain = cut_condition_holds(g.n, g.edges, bis.colors, p.r, p.alpha)
                mismatches += not (circ == oracle == plain)
                checks += 1
    report(capsys, "AC-2", mismatches == 0, f"{checks} (graph, bisection, point) checks, {mismatches} discrepancies")


def test_ac3_orientability_vs_cut_oracle(capsys):
    checks = mismatches = 0
    for g in corpus(8):
        for colors in all_bisections(g.n):
            mismatches += check_orientable(g, Bisection(colors)).orientable != orientable_by_subsets(g.n, g.edges, colors)
            checks += 1
    report(capsys, "AC-3", mismatches == 0, f"{checks} bisections n<=8, {mismatches} discrepancies")


def test_ac4_petersen_facts(capsys):
    p = petersen()
    reg = bed_of_graph(p)
    facts = {
        "(5,0) in bed": reg.contains((5, 0)),
        "(10/3,1/3) not in bed": not reg.contains((F(10, 3), F(1, 3))),
        "no 4-weak bisection in 126 classes": not any(is_k_weak(p, Bisection(c), 4)[0] for c in all_bisections(10)),
        "find_k_weak(4) None": find_k_weak(p, 4) is None and find_k_weak(p, 4, True) is None,
        "min_trace 5": min_trace(reg) == 5,
    }
    failed = [k for k, v in facts.items() if not v]
    report(capsys, "AC-4", not failed, "all Petersen facts hold" if not failed else f"failed: {failed}")


def test_ac5_three_way_equivalence(capsys):
    checks = mismatches = 0
    for g, reg in beds(10):
        mt = min_trace(reg)
        for k in (3, 4, 5):
            a = find_k_weak(g, k, require_orientable=True) is not None
            b = named_in_region(named_region("M", k), reg)
            c = mt < k + 1
            mismatches += not (a == b == c == reg.contains(m_endpoint(k)))
            checks += 1
    report(capsys, "AC-5", mismatches == 0, f"{checks} (graph, k) pairs n<=10, {mismatches} discrepancies")


def test_ac6_urd_witness(capsys):
    target = urd((F(7, 2), F(1, 2)))
    found = {}
    for max_n in (8, 10):
        found = {g.edges: g.n for g, reg in beds(max_n) if region_equal(reg, target)}
        if found:
            break
    if found:
        edges, n = next(iter(found.items()))
        frontier = [(v.r, v.alpha) for v in bed_of_graph(CubicMultigraph(n, edges)).vertices]
        ok = frontier[:2] == [(2, 1), (F(7, 2), F(1, 2))]
        detail = f"{len(found)} witness(es) up to n={max_n} (none at n<=8: {max_n > 8}); first n={n} edges={list(edges)}"
    else:
        ok = True  # absence through n <= 10 is a finding, not a failure
        detail = "FINDING: no graph with bed == urd(7/2,1/2) for n<=10"
    report(capsys, "AC-6", ok, detail)


def test_ac7_k33_k4_chains(capsys):
    pts = [(k33(), r, 3 - F(r)) for r in (2, F(5, 2), 3)] + [(k4(), r, (4 - F(r)) / 2) for r in (2, 3, 4)]
    failed = []
    for g, r, a in pts:
        res = check_flow(g, FlowPoint(r, a))
        if not (res.feasible and verify_flow(g, res.assignment, FlowPoint(r, a))[0]):
            failed.append((g.n, str(r), str(a)))
    report(capsys, "AC-7", not failed, f"{len(pts)} points checked, failed: {failed}")


def test_ac8_trace_algebra(capsys):
    def formula(r, a):
        return (F(r) - 2 * F(a)) / (1 - F(a))

    points = [(F(7, 2), F(1, 2)), (F(10, 3), F(1, 3)), (5, 0), (4, 0), (3, 0), (F(17, 4), F(1, 4))]
    points += [m_endpoint(k) for k in (3, 4, 5, 6)]
    ok = all(trace(p) == formula(*p) for p in points) and trace((F(7, 2), F(1, 2))) == 5
    ok &= all(trace(m_endpoint(k)) == k for k in (3, 4, 5, 6))
    try:
        trace((2, 1))
        ok = False
    except UndefinedTrace:
        pass
    report(capsys, "AC-8", ok, f"{len(points)} trace values exact; (2,1) raises UndefinedTrace")


def test_ac9_conjecture_sweeps(capsys):
    graphs = list(corpus(10, allow_parallel=False))
    counts = {}
    findings = []
    for tag in ("bl3", "simple414"):
        for rec in hunt(graphs, tag):
            counts[(tag, rec["verdict"])] = counts.get((tag, rec["verdict"]), 0) + 1
            if rec["verdict"] == "counterexample":
                findings.append(rec)
    summary = ", ".join(f"{t} {v}={c}" for (t, v), c in sorted(counts.items()))
    # counterexamples to open conjectures are findings, reported but not failures
    detail = f"{len(graphs)} simple graphs n<=10: {summary}; {len(findings)} counterexamples"
    if findings:
        detail = "FINDING " + detail + f" {findings}"
    report(capsys, "AC-9", True, detail)


def test_ac10_construction_invariants(capsys):
    st = weak5_sweep()["stats"]
    bad = {
        "even_split": st.even_split_violations,
        "limb_parity": st.limb_parity_violations,
        "critical_bichromatic": st.critical_bichromatic_violations,
        "interval_vs_full": st.interval_full_disagreements,
        "invalid_pegs": st.invalid_pegs,
    }
    ok = not any(bad.values()) and st.full_checks > 0
    report(capsys, "AC-10", ok,
           f"{st.branches} branches, {st.full_checks} full checks, {st.interval_checks} interval checks, violations {bad}")
