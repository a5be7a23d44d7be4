"""Backend selection for the per-edge kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback. ``use_backend`` switches explicitly (tests and benchmarks compare
the two).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fallback
from .graph import Graph

try:
    from . import _kernels as _ext
except ImportError:  # extension not built
    _ext = None

HAVE_COMPILED = _ext is not None
_active = "compiled" if HAVE_COMPILED else "python"


def available_backends() -> list[str]:
    return ["compiled", "python"] if HAVE_COMPILED else ["python"]


def active_backend() -> str:
    return _active


def use_backend(name: str) -> str:
    """Select ``"compiled"`` or ``"python"``; returns the previous backend."""
    global _active
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernels are not built")
    prev, _active = _active, name
    return prev


def _chunks(total: int, parts: int):
    parts = max(1, min(parts, total)) if total else 1
    bounds = np.linspace(0, total, parts + 1).astype(int)
    return list(zip(bounds[:-1], bounds[1:]))


class CompiledKernel:
    name = "compiled"

    def __init__(self, g: Graph, threads: int = 1):
        self.g = g
        self.threads = max(1, int(threads))
        self.max_degree = int(g.degrees.max()) if g.node_count else 0

    def _run(self, fn, total):
        ranges = _chunks(total, self.threads)
        if len(ranges) == 1:
            fn(*ranges[0])
            return
        with ThreadPoolExecutor(len(ranges)) as pool:
            list(pool.map(lambda r: fn(*r), ranges))

    def common_counts(self) -> np.ndarray:
        g = self.g
        out = np.zeros(g.edge_count, dtype=np.int64)
        self._run(lambda lo, hi: _ext.common_counts(
            g.indptr, g.indices, g.edge_u, g.edge_v, out, lo, hi), g.edge_count)
        return out

    def node_sums(self, vals: np.ndarray) -> np.ndarray:
        g = self.g
        out = np.zeros(g.node_count)
        self._run(lambda lo, hi: _ext.node_sums(
            g.indptr, g.slot_edge, vals, out, lo, hi, self.max_degree),
            g.node_count)
        return out

    def step(self, vals: np.ndarray) -> np.ndarray:
        g = self.g
        vals = np.ascontiguousarray(vals, dtype=np.float64)
        sums = self.node_sums(vals)
        out = np.empty(g.edge_count)
        self._run(lambda lo, hi: _ext.dss_edges(
            g.indptr, g.indices, g.slot_edge, g.edge_u, g.edge_v, vals, sums,
            out, lo, hi, self.max_degree), g.edge_count)
        return out


def kernel(g: Graph, threads: int = 1, backend: str | None = None):
    name = backend or _active
    if name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernels are not built")
        return CompiledKernel(g, threads)
    return _fallback.Kernel(g, threads)
