"""Cubic multigraph model, ingestion and elementary structure queries.

Edges are addressed by their position in ``CubicMultigraph.edges`` so that
parallel edges stay individually addressable for orientations and flows.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .errors import BeflowError, LoopEdge, MalformedInput, NotCubic, OddVertexCount

Edge = tuple[int, int]


@dataclass(frozen=True)
class CubicMultigraph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n <= 0:
            raise OddVertexCount(f"vertex count must be positive, got {self.n}")
        deg = [0] * self.n
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise MalformedInput(f"edge {i} = ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise LoopEdge(f"edge {i} is a loop at vertex {u}")
            deg[u] += 1
            deg[v] += 1
        bad = [v for v in range(self.n) if deg[v] != 3]
        if bad:
            raise NotCubic(f"vertices {bad[:8]} have degree != 3 (degrees {[deg[v] for v in bad[:8]]})")
        if self.n % 2:
            raise OddVertexCount(f"cubic graph needs an even vertex count, got {self.n}")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """incidence[v] = ((edge index, other endpoint), ...) in edge order."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append((i, v))
            inc[v].append((i, u))
        return tuple(tuple(x) for x in inc)

    def neighbors(self, v: int) -> list[int]:
        return [w for _, w in self.incidence[v]]

    def other(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if v == a else a

    def multiplicity(self, u: int, v: int) -> int:
        return sum(1 for _, w in self.incidence[u] if w == v)

    @property
    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def to_networkx(self) -> nx.MultiGraph:
        G = nx.MultiGraph()
        G.add_nodes_from(range(self.n))
        for i, (u, v) in enumerate(self.edges):
            G.add_edge(u, v, key=i)
        return G


# ---------------------------------------------------------------- ingestion

def _data_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def _ints(lineno: int, tokens: list[str], count: int) -> list[int]:
    if len(tokens) != count:
        raise MalformedInput(f"line {lineno}: expected {count} integers, got {' '.join(tokens)!r}")
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MalformedInput(f"line {lineno}: non-integer token in {' '.join(tokens)!r}") from None


def iter_edge_records(text: str) -> Iterator[tuple[int, CubicMultigraph | BeflowError]]:
    """Yield (line number, graph or validation error) per "cub" record.

    Framing errors (bad header, short body) raise, since the next record
    boundary is unknown; content errors are yielded so callers may skip them.
    """
    lines = list(_data_lines(text))
    pos = 0
    while pos < len(lines):
        lineno, toks = lines[pos]
        n, m = _ints(lineno, toks, 2)
        if n < 0 or m < 0:
            raise MalformedInput(f"line {lineno}: negative header values")
        body = lines[pos + 1: pos + 1 + m]
        if len(body) < m:
            raise MalformedInput(f"record at line {lineno} declares {m} edges, found {len(body)}")
        edges = [tuple(_ints(ln, t, 2)) for ln, t in body]
        pos += 1 + m
        if n % 2:
            yield lineno, OddVertexCount(f"record at line {lineno}: odd vertex count {n}")
            continue
        try:
            yield lineno, CubicMultigraph(n, tuple(edges))
        except BeflowError as exc:
            yield lineno, type(exc)(f"record at line {lineno}: {exc}")


def parse_edge_lists(text: str) -> list[CubicMultigraph]:
    """Parse a stream of concatenated "cub" records (each starts with "n m")."""
    graphs = []
    for _, item in iter_edge_records(text):
        if isinstance(item, BeflowError):
            raise item
        graphs.append(item)
    return graphs


def parse_edge_list(text: str) -> CubicMultigraph:
    graphs = parse_edge_lists(text)
    if len(graphs) != 1:
        raise MalformedInput(f"expected exactly one graph record, found {len(graphs)}")
    return graphs[0]


def format_edge_list(g: CubicMultigraph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"{g.n} {g.m}")
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def import_graph6(line: str) -> CubicMultigraph:
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise MalformedInput("empty graph6 string")
    try:
        G = nx.from_graph6_bytes(s.encode("ascii"))
    except (nx.NetworkXError, ValueError, IndexError, UnicodeEncodeError) as exc:
        raise MalformedInput(f"bad graph6 string {s!r}: {exc}") from None
    n = G.number_of_nodes()
    edges = tuple(sorted((min(u, v), max(u, v)) for u, v in G.edges()))
    return CubicMultigraph(n, edges)


def to_graph6(g: CubicMultigraph) -> str:
    if not g.is_simple:
        raise ValueError("graph6 cannot encode parallel edges")
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return nx.to_graph6_bytes(G, header=False).decode("ascii").strip()


# ---------------------------------------------------------------- structure

def cut_degree(g: CubicMultigraph, a: Iterable[int]) -> int:
    inside = set(a)
    return sum(1 for u, v in g.edges if (u in inside) != (v in inside))


def components(g: CubicMultigraph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: CubicMultigraph) -> bool:
    return len(components(g)) == 1


def subgraph(g: CubicMultigraph, vertices: Sequence[int]) -> tuple[CubicMultigraph, list[int], list[int]]:
    """Induced subgraph on a union of components.

    Returns (graph, vertex map new->old, edge map new->old).
    """
    index = {v: i for i, v in enumerate(vertices)}
    edges, emap = [], []
    for i, (u, v) in enumerate(g.edges):
        if u in index and v in index:
            edges.append((index[u], index[v]))
            emap.append(i)
    return CubicMultigraph(len(vertices), tuple(edges)), list(vertices), emap


def bridges(g: CubicMultigraph) -> list[int]:
    """Edge indices whose removal disconnects their component (iterative lowpoint DFS)."""
    disc = [-1] * g.n
    low = [0] * g.n
    out = []
    t = 0
    for root in range(g.n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        # frames: (vertex, edge index used to enter, iterator position)
        stack = [(root, -1, 0)]
        while stack:
            v, pe, pos = stack[-1]
            inc = g.incidence[v]
            if pos < len(inc):
                stack[-1] = (v, pe, pos + 1)
                e, w = inc[pos]
                if e == pe:
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, e, 0))
                else:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        out.append(pe)
    return sorted(out)


def has_perfect_matching(g: CubicMultigraph) -> bool:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    matching = nx.max_weight_matching(G, maxcardinality=True)
    return 2 * len(matching) == g.n


# ---------------------------------------------------------------- named graphs

def theta() -> CubicMultigraph:
    return CubicMultigraph(2, ((0, 1), (0, 1), (0, 1)))


def k4() -> CubicMultigraph:
    return CubicMultigraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))


def k33() -> CubicMultigraph:
    return CubicMultigraph(6, tuple((a, b) for a in range(3) for b in range(3, 6)))


def petersen() -> CubicMultigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return CubicMultigraph(10, tuple(outer + spokes + inner))


def prism(k: int) -> CubicMultigraph:
    """Circular ladder C_k x K_2 on 2k vertices."""
    top = [(i, (i + 1) % k) for i in range(k)]
    bottom = [(k + i, k + (i + 1) % k) for i in range(k)]
    rungs = [(i, k + i) for i in range(k)]
    return CubicMultigraph(2 * k, tuple(top + bottom + rungs))


def necklace(k: int) -> CubicMultigraph:
    """Cycle of k doubled edges joined in a ring by single edges (2k vertices)."""
    edges = []
    for i in range(k):
        a, b = 2 * i, 2 * i + 1
        edges += [(a, b), (a, b), (b, (2 * i + 2) % (2 * k))]
    return CubicMultigraph(2 * k, tuple(edges))


def _subdivided_k4(offset: int) -> tuple[list[Edge], int]:
    """K4 on offset..offset+3 with edge (0,1) subdivided by offset+4."""
    a, b, c, d, s = (offset + i for i in range(5))
    return [(a, s), (s, b), (a, c), (a, d), (b, c), (b, d), (c, d)], s


def bridged_pair() -> CubicMultigraph:
    """Two subdivided-K4 gadgets joined by a single bridge (10 vertices)."""
    e1, s1 = _subdivided_k4(0)
    e2, s2 = _subdivided_k4(5)
    return CubicMultigraph(10, tuple(e1 + e2 + [(s1, s2)]))


def no_perfect_matching() -> CubicMultigraph:
    """The 16-vertex cubic graph: a claw whose leaves each hang a subdivided K4."""
    edges: list[Edge] = []
    for j in range(3):
        gadget, s = _subdivided_k4(1 + 5 * j)
        edges += gadget + [(0, s)]
    return CubicMultigraph(16, tuple(edges))


NAMED = {
    "theta": theta,
    "k4": k4,
    "k33": k33,
    "petersen": petersen,
    "prism3": lambda: prism(3),
    "prism4": lambda: prism(4),
    "prism5": lambda: prism(5),
    "necklace2": lambda: necklace(2),
    "necklace3": lambda: necklace(3),
    "bridged": bridged_pair,
    "nopm16": no_perfect_matching,
}


def named_graph(name: str) -> CubicMultigraph:
    try:
        return NAMED[name.lower()]()
    except KeyError:
        raise MalformedInput(f"unknown named graph {name!r}; known: {', '.join(sorted(NAMED))}") from None
