"""Edmonds-Karp max flow over exact numbers (int or Fraction)."""
from __future__ import annotations

from collections import deque


class FlowNetwork:
    def __init__(self, size: int):
        self.size = size
        self.head: list[int] = []
        self.cap: list = []
        self.adj: list[list[int]] = [[] for _ in range(size)]

    def add_arc(self, u: int, v: int, cap) -> int:
        """Add arc u->v; returns its id (the reverse arc is id ^ 1)."""
        arc = len(self.head)
        self.head += [v, u]
        self.cap += [cap, 0 * cap]
        self.adj[u].append(arc)
        self.adj[v].append(arc + 1)
        return arc

    def flow_on(self, arc: int):
        return self.cap[arc ^ 1]

    def max_flow(self, s: int, t: int):
        total = 0
        while True:
            parent = [-1] * self.size
            parent[s] = -2
            queue = deque([s])
            while queue and parent[t] == -1:
                u = queue.popleft()
                for arc in self.adj[u]:
                    v = self.head[arc]
                    if parent[v] == -1 and self.cap[arc] > 0:
                        parent[v] = arc
                        queue.append(v)
            if parent[t] == -1:
                return total
            push = None
            v = t
            while v != s:
                arc = parent[v]
                push = self.cap[arc] if push is None else min(push, self.cap[arc])
                v = self.head[arc ^ 1]
            v = t
            while v != s:
                arc = parent[v]
                self.cap[arc] -= push
                self.cap[arc ^ 1] += push
                v = self.head[arc ^ 1]
            total += push

    def reachable(self, s: int) -> set[int]:
        """Vertices reachable from s in the residual network."""
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for arc in self.adj[u]:
                v = self.head[arc]
                if v not in seen and self.cap[arc] > 0:
                    seen.add(v)
                    stack.append(v)
        return seen
