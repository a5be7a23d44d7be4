"""Vectorized numpy versions of the compiled kernels.

Triangles are enumerated once per graph; each DSS step is then a handful of
gathers, a sort and a sequential ``bincount``. Summation order matches
``_kernels.pyx`` (ascending values, left to right), so results are
bit-identical across backends.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph


def triangle_slots(g: Graph):
    """For every (edge, common neighbor x) pair, the slots of (a, x) and (b, x).

    Rows are grouped by edge id and ascending in ``x`` within an edge.
    """
    n, m = g.node_count, g.edge_count
    deg = g.degrees
    eu, ev = g.edge_u, g.edge_v
    swap = deg[eu] > deg[ev]
    a = np.where(swap, ev, eu)
    b = np.where(swap, eu, ev)
    cnt = deg[a]
    total = int(cnt.sum())
    edge = np.repeat(np.arange(m, dtype=np.int64), cnt)
    offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    slot_a = np.repeat(g.indptr[a], cnt) + offs
    x = g.indices[slot_a]
    keys = np.repeat(b, cnt) * n + x
    table = g.slot_keys()
    pos = np.searchsorted(table, keys)
    pos[pos >= len(table)] = 0
    hit = table[pos] == keys
    return edge[hit], slot_a[hit], pos[hit]


class Kernel:
    name = "python"

    def __init__(self, g: Graph, threads: int = 1):
        self.g = g
        self._tri = None
        self._rows = np.repeat(np.arange(g.node_count, dtype=np.int64), g.degrees)

    @property
    def tri(self):
        if self._tri is None:
            self._tri = triangle_slots(self.g)
        return self._tri

    def common_counts(self) -> np.ndarray:
        edge, _, _ = self.tri
        return np.bincount(edge, minlength=self.g.edge_count).astype(np.int64)

    def node_sums(self, vals: np.ndarray) -> np.ndarray:
        sv = vals[self.g.slot_edge]
        order = np.lexsort((sv, self._rows))
        return np.bincount(self._rows[order], weights=sv[order],
                           minlength=self.g.node_count)

    def step(self, vals: np.ndarray) -> np.ndarray:
        g = self.g
        edge, slot_a, slot_b = self.tri
        w = vals[g.slot_edge[slot_a]] + vals[g.slot_edge[slot_b]]
        order = np.lexsort((w, edge))
        acc = np.bincount(edge[order], weights=w[order], minlength=g.edge_count)
        sums = self.node_sums(vals)
        num = 2.0 * (1.0 + vals) + acc
        return num / np.sqrt(sums[g.edge_u] * sums[g.edge_v])
