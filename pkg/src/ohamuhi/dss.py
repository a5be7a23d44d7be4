"""Edge similarities: local cosine and Dynamic Structural Similarity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

import numpy as np

from . import kernels
from .graph import Graph

DEFAULT_ITERATIONS = 5


@dataclass(frozen=True, eq=False)
class SimilarityMap:
    """One non-negative value per canonical edge, aligned with edge ids.

    Non-edges have similarity 0.
    """

    graph: Graph
    values: np.ndarray
    iterations_run: int = 0

    def __post_init__(self):
        if len(self.values) != self.graph.edge_count:
            raise ValueError("one value per edge required")
        if np.any(self.values < 0):
            raise ValueError("similarities must be non-negative")

    def __getitem__(self, edge) -> float:
        u, v = edge
        e = self.graph.edge_id(u, v, missing_ok=True)
        return 0.0 if e < 0 else float(self.values[e])

    def __len__(self) -> int:
        return len(self.values)

    def scaled(self, c: float) -> "SimilarityMap":
        return SimilarityMap(self.graph, self.values * c, self.iterations_run)

    def items(self):
        g = self.graph
        for e in range(g.edge_count):
            yield (int(g.edge_u[e]), int(g.edge_v[e])), float(self.values[e])


def local_cosine(g: Graph, backend: str | None = None) -> SimilarityMap:
    """``|N[u] & N[v]| / sqrt(d[u] * d[v])`` with closed neighborhoods."""
    common = kernels.kernel(g, backend=backend).common_counts() + 2
    closed = g.degrees + 1
    vals = common / np.sqrt(closed[g.edge_u] * closed[g.edge_v])
    return SimilarityMap(g, vals, 0)


def dss_fixed_point(
    g: Graph,
    T: int = DEFAULT_ITERATIONS,
    threads: int = 1,
    backend: str | None = None,
) -> SimilarityMap:
    """Run ``T`` synchronous fixed-point steps from the all-ones start."""
    if T < 0:
        raise ValueError("T must be >= 0")
    vals = np.ones(g.edge_count)
    if T and g.edge_count:
        k = kernels.kernel(g, threads=threads, backend=backend)
        for _ in range(T):
            vals = k.step(vals)
            # positive inputs can only give positive outputs
            if not np.all(vals > 0):
                raise AssertionError("DSS iterate lost positivity")
    return SimilarityMap(g, vals, T)


def dump_similarity(sim: SimilarityMap, out: TextIO) -> None:
    g = sim.graph
    for (u, v), s in sim.items():
        out.write(f"{g.label(u)} {g.label(v)} {s:.9g}\n")
