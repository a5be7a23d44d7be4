"""Undirected simple graphs in compressed sparse row form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np


class GraphError(ValueError):
    """Raised for malformed edge lists and invalid graph queries."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    Rows of ``indices`` are sorted ascending, so neighbor lists can be
    intersected with a linear merge. Canonical edges ``(edge_u[e], edge_v[e])``
    satisfy ``u < v`` and are ordered lexicographically; ``slot_edge`` maps
    every CSR slot to its canonical edge id.
    """

    indptr: np.ndarray
    indices: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    slot_edge: np.ndarray
    node_labels: tuple | None = None
    _keys: np.ndarray = field(repr=False, default=None)

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.edge_u)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def label(self, u: int):
        return u if self.node_labels is None else self.node_labels[u]

    def labels(self) -> list:
        if self.node_labels is None:
            return list(range(self.node_count))
        return list(self.node_labels)

    def neighbors(self, u: int) -> np.ndarray:
        self._check_node(u)
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v, missing_ok=True) >= 0

    def edge_id(self, u: int, v: int, missing_ok: bool = False) -> int:
        """Canonical edge id of ``{u, v}``; ``-1`` if absent and ``missing_ok``."""
        self._check_node(u)
        self._check_node(v)
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + int(np.searchsorted(self.indices[lo:hi], v))
        if pos < hi and self.indices[pos] == v:
            return int(self.slot_edge[pos])
        if missing_ok:
            return -1
        raise GraphError(f"({u}, {v}) is not an edge")

    def slot_keys(self) -> np.ndarray:
        """Sorted ``row * n + col`` key for every CSR slot."""
        return self._keys

    def _check_node(self, u) -> None:
        if not 0 <= u < self.node_count:
            raise GraphError(f"node {u} out of range [0, {self.node_count})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and self.node_labels == other.node_labels
        )

    __hash__ = None


def from_edges(
    n: int,
    edges: Iterable[tuple[int, int]] | np.ndarray,
    labels: Sequence | None = None,
) -> Graph:
    """Build a graph on nodes ``0..n-1``; self-loops and duplicates are dropped."""
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                     dtype=np.int64).reshape(-1, 2)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise GraphError("edge endpoint out of range")
    u = np.minimum(arr[:, 0], arr[:, 1])
    v = np.maximum(arr[:, 0], arr[:, 1])
    keep = u != v
    u, v = u[keep], v[keep]
    key = np.unique(u * n + v)
    eu = (key // n).astype(np.int64)
    ev = (key % n).astype(np.int64)
    m = len(eu)

    rows = np.concatenate([eu, ev])
    cols = np.concatenate([ev, eu])
    eids = np.concatenate([np.arange(m), np.arange(m)])
    order = np.lexsort((cols, rows))
    rows, cols, eids = rows[order], cols[order], eids[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    if labels is not None:
        if len(labels) != n:
            raise GraphError("label count does not match node count")
        labels = tuple(labels)
    return Graph(
        indptr=indptr,
        indices=cols.astype(np.int64),
        edge_u=eu,
        edge_v=ev,
        slot_edge=eids.astype(np.int64),
        node_labels=labels,
        _keys=rows * n + cols,
    )


def load_edge_list(source: TextIO) -> Graph:
    """Parse a whitespace-separated edge list.

    Labels are remapped to dense ids in order of first appearance. Lines
    starting with ``#`` or ``%`` and blank lines are skipped.
    """
    ids: dict[str, int] = {}
    pairs = []
    for lineno, line in enumerate(source, 1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        tokens = s.split()
        if len(tokens) != 2:
            raise GraphError(f"line {lineno}: expected 2 tokens, got {len(tokens)}")
        a = ids.setdefault(tokens[0], len(ids))
        b = ids.setdefault(tokens[1], len(ids))
        pairs.append((a, b))
    if not pairs:
        raise GraphError("no edges")
    return from_edges(len(ids), pairs, labels=list(ids))


def neighborhood_query(g: Graph, u: int):
    """Return ``(N(u), N[u], d(u), d[u])``."""
    nbrs = g.neighbors(u)
    closed = np.sort(np.append(nbrs, u))
    return nbrs, closed, len(nbrs), len(nbrs) + 1


def common_closed_neighbors(g: Graph, u: int, v: int) -> np.ndarray:
    if not g.has_edge(u, v):
        raise GraphError(f"({u}, {v}) is not an edge")
    _, nu, _, _ = neighborhood_query(g, u)
    _, nv, _, _ = neighborhood_query(g, v)
    return np.intersect1d(nu, nv, assume_unique=True)


def label_sort_key(label):
    """Numeric labels sort numerically and before string labels."""
    try:
        return (0, int(label), "")
    except (TypeError, ValueError):
        return (1, 0, str(label))
