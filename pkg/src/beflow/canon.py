"""Canonical forms and exhaustive generation of connected cubic multigraphs.

The canonical form is the lexicographically smallest upper-triangle
multiplicity string over all labelings reachable by colour refinement plus
individualisation.  Refinement is isomorphism-invariant, so the minimum over
the leaves of the search tree is a complete invariant.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .errors import OddN
from .graph import CubicMultigraph


def _adjacency(g: CubicMultigraph) -> list[dict[int, int]]:
    adj: list[dict[int, int]] = [dict() for _ in range(g.n)]
    for u, v in g.edges:
        adj[u][v] = adj[u].get(v, 0) + 1
        adj[v][u] = adj[v].get(u, 0) + 1
    return adj


def _refine(colors: list[int], adj: list[dict[int, int]]) -> list[int]:
    n = len(colors)
    ncells = len(set(colors))
    while True:
        sig = [(colors[v], tuple(sorted((colors[w], m) for w, m in adj[v].items()))) for v in range(n)]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [rank[s] for s in sig]
        if len(rank) == ncells:
            return new
        colors, ncells = new, len(rank)


def _leaves(colors: list[int], adj: list[dict[int, int]]) -> Iterator[list[int]]:
    colors = _refine(colors, adj)
    n = len(colors)
    if len(set(colors)) == n:
        yield colors
        return
    counts: dict[int, int] = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    target = min(c for c, k in counts.items() if k > 1)
    for v in range(n):
        if colors[v] != target:
            continue
        child = [2 * c + 1 for c in colors]
        child[v] = 2 * target
        yield from _leaves(child, adj)


def _code(order: list[int], adj: list[dict[int, int]]) -> str:
    # order[i] = original vertex placed at position i
    n = len(order)
    return "".join(str(adj[order[i]].get(order[j], 0)) for i in range(n) for j in range(i + 1, n))


def canonical_labeling(g: CubicMultigraph) -> tuple[str, list[int]]:
    """Return (canonical code, order) where order[i] is the vertex put at position i."""
    adj = _adjacency(g)
    init = [0] * g.n
    best_code, best_order = None, None
    for leaf in _leaves(init, adj):
        order = [0] * g.n
        for v, c in enumerate(leaf):
            order[c] = v
        code = _code(order, adj)
        if best_code is None or code < best_code:
            best_code, best_order = code, order
    return best_code, best_order


def canonical_form(g: CubicMultigraph) -> str:
    return f"{g.n}:{canonical_labeling(g)[0]}"


def canonical_graph(g: CubicMultigraph) -> CubicMultigraph:
    """Relabel g into its canonical labeling with edges sorted."""
    _, order = canonical_labeling(g)
    pos = {v: i for i, v in enumerate(order)}
    edges = sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges)
    return CubicMultigraph(g.n, tuple(edges))


def is_isomorphic(a: CubicMultigraph, b: CubicMultigraph) -> bool:
    return a.n == b.n and a.m == b.m and canonical_form(a) == canonical_form(b)


def _insertions(g: CubicMultigraph, split: int | None = None) -> Iterator[CubicMultigraph]:
    """Subdivide edges e, f (possibly e == f) by new vertices x, y and join x-y.

    With ``split`` set, g is a disjoint union whose first ``split`` edges form
    one component; only pairs straddling the two parts are used.
    """
    x, y = g.n, g.n + 1
    for i, (a, b) in enumerate(g.edges):
        if split is not None and i >= split:
            break
        for j in range(i if split is None else split, g.m):
            rest = [ed for k, ed in enumerate(g.edges) if k != i and k != j]
            if i == j:
                new = [(a, x), (x, y), (y, b), (x, y)]
            else:
                c, d = g.edges[j]
                new = [(a, x), (x, b), (c, y), (y, d), (x, y)]
            yield CubicMultigraph(g.n + 2, tuple(rest + new))


@lru_cache(maxsize=None)
def _connected_multigraphs(n: int) -> tuple[CubicMultigraph, ...]:
    if n == 2:
        return (CubicMultigraph(2, ((0, 1), (0, 1), (0, 1))),)
    # Connected parents alone miss graphs whose only reducible edges are
    # bridges; those reduce to a disjoint union of two connected graphs.
    parents: list[tuple[CubicMultigraph, int | None]] = [(p, None) for p in _connected_multigraphs(n - 2)]
    for n1 in range(2, (n - 2) // 2 + 1, 2):
        left, right = _connected_multigraphs(n1), _connected_multigraphs(n - 2 - n1)
        for a, g1 in enumerate(left):
            for b, g2 in enumerate(right):
                if n1 == n - 2 - n1 and b < a:
                    continue
                shifted = tuple((u + n1, v + n1) for u, v in g2.edges)
                parents.append((CubicMultigraph(n - 2, g1.edges + shifted), g1.m))
    found: dict[str, CubicMultigraph] = {}
    for parent, split in parents:
        for child in _insertions(parent, split):
            code, order = canonical_labeling(child)
            if code in found:
                continue
            pos = {v: i for i, v in enumerate(order)}
            edges = sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in child.edges)
            found[code] = CubicMultigraph(n, tuple(edges))
    return tuple(found[c] for c in sorted(found))


def generate_cubic(n: int, allow_parallel: bool = True) -> Iterator[CubicMultigraph]:
    """All connected cubic (multi)graphs on n vertices, one per isomorphism class.

    Graphs come out canonically labelled, ordered by canonical code.
    """
    if n < 2 or n % 2:
        raise OddN(f"cubic graphs need an even n >= 2, got {n}")
    for g in _connected_multigraphs(n):
        if allow_parallel or g.is_simple:
            yield g


def corpus(max_n: int, allow_parallel: bool = True, min_n: int = 2) -> Iterator[CubicMultigraph]:
    for n in range(max(2, min_n + min_n % 2), max_n + 1, 2):
        yield from generate_cubic(n, allow_parallel)
