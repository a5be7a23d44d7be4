"""Fuzzy and crisp overlapping covers built on top of a disjoint partition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .disjoint import Partition
from .dss import SimilarityMap
from .graph import Graph, label_sort_key

SWEEP_ALPHAS = (0.005, 0.01, 0.02, 0.03, 0.04, 0.05)


@dataclass(eq=False)
class FuzzyCover:
    """``communities[c][u]`` is the membership probability of node ``u`` in ``c``."""

    graph: Graph
    communities: dict[int, dict[int, float]]

    def memberships(self, u: int) -> dict[int, float]:
        return {c: f[u] for c, f in self.communities.items() if u in f}


@dataclass(eq=False)
class CrispCover:
    graph: Graph
    communities: dict[int, frozenset[int]]
    alpha: float

    def labeled(self) -> list[set]:
        g = self.graph
        return [{g.label(u) for u in m} for _, m in sorted(self.communities.items())]


def connectivity(g: Graph, sim: SimilarityMap, u: int, members) -> float:
    """Sum of similarities on edges from ``u`` into ``members``."""
    inside = set(int(v) for v in members)
    total = 0.0
    lo = g.indptr[u]
    for i, v in enumerate(g.neighbors(u).tolist()):
        if v in inside:
            total += sim.values[g.slot_edge[lo + i]]
    return float(total)


def _neighbor_stats(g: Graph, sim: SimilarityMap, assignment: np.ndarray, u: int):
    """Per adjacent community: (connectivity, number of neighbors inside)."""
    lo, hi = g.indptr[u], g.indptr[u + 1]
    comms = assignment[g.indices[lo:hi]].tolist()
    sims = sim.values[g.slot_edge[lo:hi]].tolist()
    stats: dict[int, list] = {}
    for c, s in zip(comms, sims):
        rec = stats.get(c)
        if rec is None:
            stats[c] = [s, 1]
        else:
            rec[0] += s
            rec[1] += 1
    return stats


def _candidates(p: Partition, u: int, stats: dict) -> list[int]:
    home = int(p.assignment[u])
    cores = p.core_flags
    cands = sorted(c for c in stats if c not in cores)
    if home not in cores:
        if home not in stats:
            cands = sorted([*cands, home])
    elif not cands:
        cands = [home]
    return cands


def _probabilities(p: Partition, u: int, stats: dict, cands: list[int]) -> dict[int, float]:
    sizes = [len(m) for m in p.members]
    home = int(p.assignment[u])
    best = max((stats[c][0] for c in cands if c in stats), default=0.0)
    out = {}
    for c in cands:
        conn, linked = stats.get(c, (0.0, 0))
        others = sizes[c] - (1 if c == home else 0)
        if best <= 0.0 or others == 0:
            out[c] = 0.0
        else:
            out[c] = (conn / best) * (linked / others)
    return out


def membership_probability(g: Graph, sim: SimilarityMap, p: Partition,
                           u: int, c: int) -> float:
    """Normalized connectivity of ``u`` toward ``c`` times the fraction of
    ``c`` (excluding ``u``) adjacent to ``u``."""
    stats = _neighbor_stats(g, sim, p.assignment, u)
    cands = _candidates(p, u, stats)
    if c not in cands:
        if c not in stats:
            return 0.0
        cands = sorted([*cands, c])
    return _probabilities(p, u, stats, cands)[c]


def build_fuzzy_cover(g: Graph, sim: SimilarityMap, p: Partition) -> FuzzyCover:
    """Fuzzy cover from the partition; epsilon-core communities are dissolved
    into their adjacent communities unless a member has nowhere else to go."""
    communities: dict[int, dict[int, float]] = {}
    for u in range(g.node_count):
        home = int(p.assignment[u])
        stats = _neighbor_stats(g, sim, p.assignment, u)
        cands = _candidates(p, u, stats)
        for c, f in _probabilities(p, u, stats, cands).items():
            if f > 0.0 or c == home:
                communities.setdefault(c, {})[u] = f
    ordered = {c: dict(sorted(communities[c].items())) for c in sorted(communities)}
    return FuzzyCover(g, ordered)


def alpha_cut(fc: FuzzyCover, alpha: float) -> CrispCover:
    """Keep memberships ``>= alpha``; orphaned nodes return to their
    highest-membership community (lowest id on ties)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    kept: dict[int, set[int]] = {c: set() for c in fc.communities}
    best: dict[int, tuple[float, int]] = {}
    for c, f in fc.communities.items():
        for u, prob in f.items():
            if prob >= alpha:
                kept[c].add(u)
            cur = best.get(u)
            if cur is None or prob > cur[0] or (prob == cur[0] and c < cur[1]):
                best[u] = (prob, c)
    covered = set().union(*kept.values()) if kept else set()
    for u, (_, c) in best.items():
        if u not in covered:
            kept[c].add(u)
    return CrispCover(
        fc.graph,
        {c: frozenset(m) for c, m in sorted(kept.items()) if m},
        alpha,
    )


def write_fuzzy_cover(fc: FuzzyCover, out: TextIO) -> None:
    g = fc.graph
    for _, f in sorted(fc.communities.items()):
        entries = sorted(((g.label(u), prob) for u, prob in f.items()),
                         key=lambda e: label_sort_key(e[0]))
        out.write(" ".join(f"{lab}:{prob:.6f}" for lab, prob in entries) + "\n")


def write_crisp_cover(cc: CrispCover, out: TextIO) -> None:
    g = cc.graph
    for _, m in sorted(cc.communities.items()):
        labels = sorted((g.label(u) for u in m), key=label_sort_key)
        out.write(" ".join(str(x) for x in labels) + "\n")
