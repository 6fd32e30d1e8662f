import pytest
from hypothesis import given, settings, strategies as st

from beflow.canon import canonical_form, canonical_graph, corpus, generate_cubic, is_isomorphic
from beflow.errors import OddN
from beflow.graph import CubicMultigraph, k4, petersen, theta
from oracles import iso_classes, labelled_cubic

# Connected loopless cubic multigraphs / simple cubic graphs by order
# (published sequences; also re-derived below by brute force for n <= 8).
MULTI_COUNTS = {2: 1, 4: 2, 6: 6, 8: 20, 10: 91}
SIMPLE_COUNTS = {4: 1, 6: 2, 8: 5, 10: 19, 12: 85}


def test_n2_is_theta():
    (g,) = generate_cubic(2)
    assert is_isomorphic(g, theta())


def test_n4_simple_is_k4():
    (g,) = generate_cubic(4, allow_parallel=False)
    assert is_isomorphic(g, k4())


def test_n4_with_parallel_edges():
    gs = list(generate_cubic(4))
    assert len(gs) == 2
    assert sum(g.is_simple for g in gs) == 1
    # the multigraph: two doubled pairs joined by two single edges
    (m,) = [g for g in gs if not g.is_simple]
    assert sorted(m.multiplicity(u, v) for u in range(4) for v in range(u + 1, 4) if m.multiplicity(u, v)) == [1, 1, 2, 2]


def test_odd_n_rejected():
    with pytest.raises(OddN):
        list(generate_cubic(5))


@pytest.mark.parametrize("n", [2, 4, 6, pytest.param(8, marks=pytest.mark.slow)])
def test_generation_matches_brute_force(n):
    """Labelled enumeration + networkx isomorphism gives the same classes."""
    reps = iso_classes(n, labelled_cubic(n))
    ours = list(generate_cubic(n))
    assert len(ours) == len(reps) == MULTI_COUNTS[n]


@pytest.mark.parametrize("n, want", sorted(MULTI_COUNTS.items()))
def test_multigraph_counts(n, want):
    assert len(list(generate_cubic(n))) == want


@pytest.mark.parametrize("n, want", sorted(SIMPLE_COUNTS.items()))
def test_simple_counts(n, want):
    assert len(list(generate_cubic(n, allow_parallel=False))) == want


def test_no_isomorphic_duplicates():
    import networkx as nx
    from oracles import weighted

    for n in (6, 8):
        gs = list(generate_cubic(n))
        nxs = [weighted(g.n, g.edges) for g in gs]
        for i in range(len(gs)):
            for j in range(i):
                assert not nx.is_isomorphic(nxs[i], nxs[j], edge_match=lambda a, b: a["w"] == b["w"])


def test_corpus_bounds():
    assert {g.n for g in corpus(8, min_n=6)} == {6, 8}


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(list(corpus(10))), st.randoms(use_true_random=False))
def test_canonical_form_is_relabelling_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    edges = [(perm[u], perm[v]) for u, v in g.edges]
    rnd.shuffle(edges)
    h = CubicMultigraph(g.n, tuple(edges))
    assert canonical_form(h) == canonical_form(g)
    assert canonical_graph(h).edges == canonical_graph(g).edges


def test_canonical_graph_is_isomorphic_copy():
    import networkx as nx

    g = petersen()
    c = canonical_graph(g)
    assert nx.is_isomorphic(nx.Graph(c.to_networkx()), nx.Graph(g.to_networkx()))
