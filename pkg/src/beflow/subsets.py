"""Vectorised (|A|, d(A), delta(A)) over every vertex subset A, indexed by bitmask."""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import TooLarge
from .graph import CubicMultigraph

MAX_SUBSET_N = 20


def subset_profiles(n: int, edges: Iterable[tuple[int, int]], colors=None, max_n: int = MAX_SUBSET_N):
    """Return (size, d, delta) int arrays of length 2**n.

    ``edges`` may be any (sub)graph edge list on vertices 0..n-1; ``delta`` is
    None when no colouring is given.
    """
    if n > max_n:
        raise TooLarge(f"subset enumeration limited to n <= {max_n}, got {n}")
    masks = np.arange(1 << n, dtype=np.int64)
    size = np.bitwise_count(masks).astype(np.int64)
    d = np.zeros(1 << n, dtype=np.int64)
    for u, v in edges:
        d += ((masks >> u) ^ (masks >> v)) & 1
    if colors is None:
        return size, d, None
    m2 = sum(1 << v for v, c in enumerate(colors) if c == 2)
    twos = np.bitwise_count(masks & m2).astype(np.int64)
    return size, d, 2 * twos - size


def graph_profiles(g: CubicMultigraph, colors=None, max_n: int = MAX_SUBSET_N):
    return subset_profiles(g.n, g.edges, colors, max_n)


def mask_to_set(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def orientable_by_cuts(n: int, edges, colors) -> tuple[bool, frozenset[int] | None]:
    """d(A) >= Delta(A) for every A; returns a violating set otherwise."""
    size, d, delta = subset_profiles(n, edges, colors)
    bad = np.nonzero(d < np.abs(delta))[0]
    if len(bad):
        return False, mask_to_set(int(bad[0]))
    return True, None
