from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from beflow.bisection import find_k_weak, hunt, hunt_one, is_k_weak, iter_k_weak, monochromatic_components
from beflow.canon import corpus
from beflow.errors import BadK, UnknownConjecture
from beflow.graph import CubicMultigraph, bridged_pair, k4, no_perfect_matching, petersen, theta
from beflow.orientation import Bisection, check_orientable
from beflow.region import bed_of_graph
from oracles import all_bisections, is_k_weak_brute, orientable_by_subsets

SMALL = list(corpus(8))


def test_k4_every_split_is_4_weak():
    for colors in all_bisections(4):
        ok, rep = is_k_weak(k4(), Bisection(colors), 4)
        assert ok and all(c.size == 2 and c.is_tree for c in rep.components)


def test_theta_is_3_weak():
    ok, rep = is_k_weak(theta(), Bisection((1, 2)), 3)
    assert ok and [c.size for c in rep.components] == [1, 1]


def test_parallel_monochromatic_edges_are_a_cycle():
    ok, rep = is_k_weak(CubicMultigraph(4, ((0, 1), (0, 1), (2, 3), (2, 3), (0, 2), (1, 3))), Bisection((1, 1, 2, 2)), 6)
    assert not ok and all(not c.is_tree for c in rep.violators)


def test_bad_k():
    with pytest.raises(BadK):
        is_k_weak(theta(), Bisection((1, 2)), 2)
    with pytest.raises(BadK):
        find_k_weak(theta(), 2)


def test_components_partition_colour_classes():
    for g in SMALL[::4]:
        for colors in all_bisections(g.n):
            comps = monochromatic_components(g, colors)
            seen = sorted(v for c in comps for v in c.vertices)
            assert seen == list(range(g.n))
            assert all(len({colors[v] for v in c.vertices}) == 1 for c in comps)


def test_is_k_weak_matches_networkx_oracle():
    for g in SMALL:
        for colors in all_bisections(g.n):
            for k in (3, 4, 5):
                assert is_k_weak(g, Bisection(colors), k)[0] == is_k_weak_brute(g.n, g.edges, colors, k)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(corpus(10))), st.data(), st.integers(3, 6))
def test_monotone_in_k(g, data, k):
    colors = data.draw(st.sampled_from(list(all_bisections(g.n))))
    if is_k_weak(g, Bisection(colors), k)[0]:
        assert is_k_weak(g, Bisection(colors), k + 1)[0]


def test_backtracking_finds_exactly_the_brute_force_set():
    for g in SMALL[::2]:
        for k in (3, 4, 5):
            ours = {b.colors for b in iter_k_weak(g, k)}
            brute = {c for c in all_bisections(g.n) if is_k_weak_brute(g.n, g.edges, c, k)}
            assert ours == brute


def test_petersen_has_no_4_weak_bisection():
    p = petersen()
    assert not any(is_k_weak(p, Bisection(c), 4)[0] for c in all_bisections(10))
    assert find_k_weak(p, 4) is None
    assert find_k_weak(p, 4, require_orientable=True) is None


def test_petersen_orientable_5_weak():
    b = find_k_weak(petersen(), 5, require_orientable=True)
    assert b is not None and is_k_weak(petersen(), b, 5)[0]
    assert orientable_by_subsets(10, petersen().edges, b.colors)


def test_k4_orientable_4_weak():
    b = find_k_weak(k4(), 4, require_orientable=True)
    assert b is not None and check_orientable(k4(), b).orientable


# -- hunts -------------------------------------------------------------------

def test_hunt_skips_petersen_and_no_matching():
    assert hunt_one(petersen(), "bl3")["verdict"] == "skipped"
    assert hunt_one(no_perfect_matching(), "bl3")["reason"] == "no perfect matching"
    assert hunt_one(theta(), "simple414")["reason"] == "not simple"
    with pytest.raises(UnknownConjecture):
        list(hunt([k4()], "bl4"))


def test_hunt_certificates_reverify():
    for rec in hunt(corpus(8, allow_parallel=False), "bl3"):
        assert rec["verdict"] == "holds"
        g = CubicMultigraph(rec["n"], tuple(tuple(e) for e in rec["edges"]))
        bis = Bisection(tuple(rec["certificate"]["bisection"]))
        assert is_k_weak(g, bis, 4)[0] and orientable_by_subsets(g.n, g.edges, bis.colors)


def test_bridged_incomparability_witness():
    g = bridged_pair()
    assert find_k_weak(g, 4, require_orientable=True) is not None
    reg = bed_of_graph(g)
    assert reg.contains((F(10, 3), F(1, 3))) and not reg.contains((5, 0))
