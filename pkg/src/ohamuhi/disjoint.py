"""Agglomerative disjoint community detection driven by edge similarities.

Every node starts alone. Communities that fail the community definition
merge with their most similar adjacent communities until none can; then
communities smaller than ``K`` are absorbed the same way. Optionally,
epsilon-core communities (candidates whose adjacent communities are all
nearly as similar as the best one) are frozen along the way so that the
overlap stage can split them between their neighbors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .dss import SimilarityMap
from .graph import Graph, label_sort_key


class CommunityDefinition(enum.Enum):
    WEAK = "weak"
    MOST_WEAK = "most-weak"

    @classmethod
    def parse(cls, value) -> "CommunityDefinition":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-").replace(" ", "-")
        for cd in cls:
            if cd.value == key:
                return cd
        raise ValueError(f"unknown community definition {value!r}")


def meets_definition(m_int: int, cross_counts: Iterable[int],
                     cd: CommunityDefinition) -> bool:
    counts = list(cross_counts)
    if not counts:
        return True
    if cd is CommunityDefinition.WEAK:
        return 2 * m_int > sum(counts)
    return m_int > max(counts)


@dataclass(eq=False)
class Partition:
    """Disjoint community assignment with per-community bookkeeping.

    ``cross[c]`` maps each adjacent community to ``(cross edge count,
    max cross-edge similarity)``. Community ids are ``0..k-1`` ordered by
    smallest member node.
    """

    graph: Graph
    assignment: np.ndarray
    members: list[np.ndarray]
    m_int: list[int]
    cross: list[dict[int, tuple[int, float]]]
    core_flags: frozenset = field(default_factory=frozenset)

    @property
    def community_count(self) -> int:
        return len(self.members)

    def sizes(self) -> np.ndarray:
        return np.array([len(m) for m in self.members], dtype=np.int64)

    def labeled(self) -> dict:
        g = self.graph
        return {g.label(u): int(c) for u, c in enumerate(self.assignment)}

    def same_as(self, other: "Partition") -> bool:
        return (np.array_equal(self.assignment, other.assignment)
                and self.core_flags == other.core_flags)


def check_community_definition(p: Partition, c: int,
                               cd: CommunityDefinition) -> bool:
    if not 0 <= c < p.community_count:
        raise KeyError(f"no community {c}")
    return meets_definition(p.m_int[c], (cnt for cnt, _ in p.cross[c].values()), cd)


class MergeState:
    """Live communities and their inter-community similarity index.

    Communities are stored under a key (a member node id); a merge keeps the
    key of the member with the largest adjacency index, so only the smaller
    indexes are rewritten. Communities are ordered by ``first[key]``, their
    smallest member node. ``adj[c][h]`` is a shared two-element list
    ``[cross edge count, max similarity]`` stored under both ``adj[c][h]``
    and ``adj[h][c]``.
    """

    def __init__(self, g: Graph, sim: SimilarityMap,
                 cd: CommunityDefinition = CommunityDefinition.MOST_WEAK,
                 K: int = 2, assignment=None):
        if len(sim.values) != g.edge_count:
            raise ValueError("similarity map does not match graph")
        n = g.node_count
        self.graph = g
        self.cd = CommunityDefinition.parse(cd)
        self.K = K
        self.phase = "definition"
        self.frozen: set[int] = set()
        self.parent = list(range(n))
        if assignment is None:
            roots = np.arange(n)
        else:
            assignment = np.asarray(assignment)
            first = {}
            for u, a in enumerate(assignment.tolist()):
                first.setdefault(a, u)
            roots = np.array([first[a] for a in assignment.tolist()])
            self.parent = roots.tolist()
        self.size = {int(c): int(k) for c, k in
                     zip(*np.unique(roots, return_counts=True))}
        self.m_int = dict.fromkeys(self.size, 0)
        self.first = {c: c for c in self.size}
        self.adj: dict[int, dict[int, list]] = {c: {} for c in self.size}

        cu = roots[g.edge_u]
        cv = roots[g.edge_v]
        inside = cu == cv
        for c, k in zip(*np.unique(cu[inside], return_counts=True)):
            self.m_int[int(c)] = int(k)
        a = np.minimum(cu, cv)[~inside]
        b = np.maximum(cu, cv)[~inside]
        s = sim.values[~inside]
        if len(a):
            order = np.lexsort((b, a))
            a, b, s = a[order], b[order], s[order]
            key = a * n + b
            starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
            counts = np.diff(np.r_[starts, len(key)])
            maxes = np.maximum.reduceat(s, starts)
            for x, y, k, mx in zip(a[starts].tolist(), b[starts].tolist(),
                                   counts.tolist(), maxes.tolist()):
                rec = [k, mx]
                self.adj[x][y] = rec
                self.adj[y][x] = rec

    # -- queries -----------------------------------------------------------

    def find(self, u: int) -> int:
        parent = self.parent
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    def live(self) -> list[int]:
        """Live community keys by smallest member."""
        return sorted(self.adj, key=self.first.__getitem__)

    def satisfies(self, c: int) -> bool:
        return meets_definition(self.m_int[c],
                                (rec[0] for rec in self.adj[c].values()), self.cd)

    def is_candidate(self, c: int) -> bool:
        if self.phase == "definition":
            return not self.satisfies(c)
        return self.size[c] < self.K

    def max_similarity(self, c: int) -> float:
        return max((rec[1] for rec in self.adj[c].values()), default=0.0)

    def best_targets(self, c: int) -> list[int]:
        """Unfrozen adjacent communities tied at the highest similarity."""
        best = None
        out: list[int] = []
        frozen = self.frozen
        for h, rec in self.adj[c].items():
            if h in frozen:
                continue
            s = rec[1]
            if best is None or s > best:
                best, out = s, [h]
            elif s == best:
                out.append(h)
        return sorted(out)

    # -- mutation ----------------------------------------------------------

    def merge(self, group: Iterable[int]) -> int:
        """Merge communities; returns the surviving key."""
        group = sorted(set(group))
        adj = self.adj
        base = max(group, key=lambda c: (len(adj[c]), -c))
        members = set(group)
        new = adj.pop(base)
        m_int = self.m_int.pop(base)
        size = self.size.pop(base)
        first = self.first.pop(base)
        for c in group:
            if c != base:
                rec = new.pop(c, None)
                if rec is not None:
                    m_int += rec[0]
        for c in group:
            if c == base:
                continue
            m_int += self.m_int.pop(c)
            size += self.size.pop(c)
            first = min(first, self.first.pop(c))
            for h, rec in adj.pop(c).items():
                if h in members:
                    if h != base and c < h:
                        m_int += rec[0]
                    continue
                hd = adj[h]
                del hd[c]
                cur = new.get(h)
                if cur is None:
                    new[h] = rec
                    hd[base] = rec
                else:
                    cur[0] += rec[0]
                    if rec[1] > cur[1]:
                        cur[1] = rec[1]
            self.parent[c] = base
        adj[base] = new
        self.m_int[base] = m_int
        self.size[base] = size
        self.first[base] = first
        return base

    def _sweep(self, needs_merge, eps) -> bool:
        """One pass in order of smallest member; a community formed in this
        pass is not revisited until the next one."""
        if eps is not None:
            flag_epsilon_cores(self, eps)
        frozen = self.frozen
        work = [c for c in self.live() if c not in frozen and needs_merge(c)]
        touched: set[int] = set()
        for c in work:
            if c not in self.adj or c in touched or not needs_merge(c):
                continue
            targets = self.best_targets(c)
            if targets:
                touched.add(self.merge([c, *targets]))
        return bool(touched)

    def run(self, eps: float | None = None) -> None:
        self.phase = "definition"
        while self._sweep(lambda c: not self.satisfies(c), eps):
            pass
        self.phase = "size"
        while self._sweep(lambda c: self.size[c] < self.K, eps):
            pass

    def to_partition(self) -> Partition:
        g = self.graph
        ids = self.live()
        rank = {c: i for i, c in enumerate(ids)}
        roots = np.array([self.find(u) for u in range(g.node_count)], dtype=np.int64)
        lookup = np.zeros(g.node_count, dtype=np.int64)
        lookup[ids] = np.arange(len(ids))
        assignment = lookup[roots] if g.node_count else roots
        order = np.argsort(assignment, kind="stable")
        bounds = np.cumsum(np.bincount(assignment, minlength=len(ids)))[:-1]
        members = np.split(order, bounds) if len(ids) else []
        cross = [
            {rank[h]: (int(rec[0]), float(rec[1]))
             for h, rec in sorted(self.adj[c].items())}
            for c in ids
        ]
        return Partition(
            graph=g,
            assignment=assignment,
            members=members,
            m_int=[self.m_int[c] for c in ids],
            cross=cross,
            core_flags=frozenset(rank[c] for c in self.frozen if c in rank),
        )


def flag_epsilon_cores(state: MergeState, eps: float) -> set[int]:
    """Freeze candidate communities whose neighbors are all within ``eps``
    of their best neighbor.

    Only multi-node candidates with at least two adjacent communities
    qualify. Returns the ids flagged by this call.
    """
    if eps < 0:
        raise ValueError("eps must be >= 0")
    flagged = set()
    for c in sorted(state.adj):
        if c in state.frozen or state.size[c] < 2:
            continue
        nbrs = state.adj[c]
        if len(nbrs) < 2 or not state.is_candidate(c):
            continue
        threshold = max(state.max_similarity(c) - eps, 0.0)
        if all(rec[1] >= threshold for rec in nbrs.values()):
            flagged.add(c)
    state.frozen |= flagged
    return flagged


def detect_disjoint(
    g: Graph,
    sim: SimilarityMap,
    cd: CommunityDefinition | str = CommunityDefinition.MOST_WEAK,
    K: int = 2,
    eps: float | None = None,
) -> Partition:
    if K < 1:
        raise ValueError("K must be >= 1")
    if sim.graph is not g and len(sim.values) != g.edge_count:
        raise ValueError("similarity map does not cover the graph")
    state = MergeState(g, sim, CommunityDefinition.parse(cd), K)
    state.run(eps)
    return state.to_partition()


def write_partition(p: Partition, out: TextIO) -> None:
    g = p.graph
    rows = sorted(((g.label(u), int(c)) for u, c in enumerate(p.assignment)),
                  key=lambda r: label_sort_key(r[0]))
    for label, c in rows:
        out.write(f"{label} {c}\n")
