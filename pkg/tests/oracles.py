"""Slow, independent reference implementations used only by the tests.

Everything here is deliberately naive: plain loops over subsets, labelled
enumeration, networkx isomorphism. None of it shares code with beflow's
fast paths.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx


def subsets(n):
    for mask in range(1, 1 << n):
        yield {v for v in range(n) if mask >> v & 1}


def cut(edges, a):
    return sum(1 for u, v in edges if (u in a) != (v in a))


def big_delta(colors, a):
    return abs(sum(1 if colors[v] == 2 else -1 for v in a))


def orientable_by_subsets(n, edges, colors):
    """Orientability cut condition d(A) >= Delta(A), by plain enumeration."""
    return all(cut(edges, a) >= big_delta(colors, a) for a in subsets(n))


def cut_condition_holds(n, edges, colors, r, alpha):
    """Cut condition on alpha for every nonempty A."""
    for a in subsets(n):
        d, dl = cut(edges, a), big_delta(colors, a)
        if alpha < Fraction(2 * d - (d - dl) * r, 2 * len(a)):
            return False
    return True


def all_bisections(n):
    """Every bisection with vertex 0 coloured 1 (one per swap class)."""
    for rest in itertools.combinations(range(1, n), n // 2 - 1):
        yield tuple(1 if v == 0 or v in rest else 2 for v in range(n))


def labelled_cubic(n):
    """All labelled loopless cubic multigraphs on n vertices, as sorted edge tuples.

    The lowest vertex with spare degree is saturated first, its partners
    taken in non-decreasing order, so each multigraph is produced once.
    """
    out = []

    def rec(deg, edges):
        v = next((x for x in range(n) if deg[x] < 3), None)
        if v is None:
            out.append(tuple(sorted(edges)))
            return
        need = 3 - deg[v]
        cands = [w for w in range(v + 1, n) if deg[w] < 3]
        for combo in itertools.combinations_with_replacement(cands, need):
            if any(deg[w] + combo.count(w) > 3 for w in set(combo)):
                continue
            for w in combo:
                deg[w] += 1
                edges.append((v, w))
            deg[v] = 3
            rec(deg, edges)
            deg[v] = 3 - need
            for w in combo:
                deg[w] -= 1
                edges.pop()

    rec([0] * n, [])
    assert len(out) == len(set(out))
    return out


def weighted(n, edges):
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for u, v in edges:
        if g.has_edge(u, v):
            g[u][v]["w"] += 1
        else:
            g.add_edge(u, v, w=1)
    return g


def iso_classes(n, edge_sets, connected_only=True):
    """Representatives of isomorphism classes (multiplicity-aware) via networkx."""
    buckets: dict[str, list] = {}
    reps = []
    match = lambda a, b: a["w"] == b["w"]  # noqa: E731
    for edges in edge_sets:
        g = weighted(n, edges)
        if connected_only and not nx.is_connected(g):
            continue
        key = nx.weisfeiler_lehman_graph_hash(g, edge_attr="w")
        bucket = buckets.setdefault(key, [])
        if not any(nx.is_isomorphic(g, h, edge_match=match) for h in bucket):
            bucket.append(g)
            reps.append(g)
    return reps


def has_perfect_matching_brute(n, edges):
    def rec(free):
        if not free:
            return True
        v = min(free)
        for u, w in edges:
            other = w if u == v else u if w == v else None
            if other is not None and other in free and other != v:
                if rec(free - {v, other}):
                    return True
        return False

    return rec(frozenset(range(n)))


def is_k_weak_brute(n, edges, colors, k):
    """Monochromatic components via networkx multigraph components."""
    g = nx.MultiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from((u, v) for u, v in edges if colors[u] == colors[v])
    for comp in nx.connected_components(g):
        sub = g.subgraph(comp)
        if sub.number_of_edges() != len(comp) - 1 or len(comp) > k - 2:
            return False
    return True


def hoffman_feasible(size, arcs):
    """Hoffman: a circulation exists iff for every vertex set A,
    sum of lower bounds leaving A <= sum of upper bounds entering A."""
    for mask in range(1, (1 << size) - 1):
        a = {v for v in range(size) if mask >> v & 1}
        out_low = sum(lo for t, h, lo, hi in arcs if t in a and h not in a)
        in_up = sum(hi for t, h, lo, hi in arcs if h in a and t not in a)
        if out_low > in_up:
            return False
    return True
