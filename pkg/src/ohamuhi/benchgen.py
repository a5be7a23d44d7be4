"""Seeded synthetic graphs with planted communities.

``gen_planted_partition`` draws equal-sized blocks; ``gen_lfr_like`` follows
the LFR recipe (power-law degrees and community sizes, mixing parameter,
overlapping nodes) without the official tool's final rewiring loop, so the
realized mixing is only approximately ``mu``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import TextIO

import numpy as np
from scipy.optimize import brentq

from .graph import Graph, from_edges

RNG_ALGORITHM = "numpy.random.PCG64"
MATCH_RETRIES = 20


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class LFRParams:
    N: int = 1000
    avgk: float = 10.0
    maxk: int = 50
    tau1: float = -2.0
    tau2: float = -1.0
    minc: int = 10
    maxc: int = 50
    mu: float = 0.1
    On: int = 0
    Om: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.N < 2:
            raise GeneratorError("N must be >= 2")
        if not 0 < self.avgk <= self.maxk:
            raise GeneratorError("need 0 < avgk <= maxk")
        if self.maxk >= self.N:
            raise GeneratorError("maxk must be < N")
        if self.tau1 >= 0 or self.tau2 >= 0:
            raise GeneratorError("tau1 and tau2 are negative exponents")
        if not 1 <= self.minc <= self.maxc <= self.N:
            raise GeneratorError("need 1 <= minc <= maxc <= N")
        if not 0.0 <= self.mu <= 1.0:
            raise GeneratorError("mu must lie in [0, 1]")
        if not 0 <= self.On <= self.N:
            raise GeneratorError("On must lie in [0, N]")
        if self.Om < 1:
            raise GeneratorError("Om must be >= 1")


@dataclass
class GroundTruth:
    """Planted cover over node ids; disjoint when every node has one membership."""

    cover: list[list[int]]

    def memberships(self, n: int) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(n)]
        for c, members in enumerate(self.cover):
            for u in members:
                out[u].append(c)
        return out

    def labeled(self, g: Graph) -> list[set]:
        return [{g.label(u) for u in m} for m in self.cover]

    def as_partition(self, g: Graph) -> dict:
        mem = self.memberships(g.node_count)
        if any(len(m) != 1 for m in mem):
            raise GeneratorError("ground truth is not a partition")
        return {g.label(u): m[0] for u, m in enumerate(mem)}


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def gen_planted_partition(n: int, k: int, p_in: float, p_out: float,
                          seed: int = 0) -> tuple[Graph, GroundTruth]:
    if k < 1 or n < 1 or n % k:
        raise GeneratorError("k must divide n")
    if not 0.0 <= p_out < p_in <= 1.0:
        raise GeneratorError("need 0 <= p_out < p_in <= 1")
    rng = _rng(seed)
    s = n // k
    iu, ju = np.triu_indices(s, 1)
    chunks = []
    for b in range(k):
        hit = rng.random(len(iu)) < p_in
        chunks.append(np.column_stack([iu[hit], ju[hit]]) + b * s)

    total = n * (n - 1) // 2
    draws = rng.binomial(total, p_out) if p_out > 0 else 0
    if draws:
        flat = np.sort(rng.choice(total, size=draws, replace=False))
        i, j = _unrank_pairs(flat, n)
        inter = (i // s) != (j // s)
        chunks.append(np.column_stack([i[inter], j[inter]]))
    edges = np.concatenate(chunks) if chunks else np.zeros((0, 2), dtype=np.int64)
    truth = GroundTruth([list(range(b * s, (b + 1) * s)) for b in range(k)])
    return from_edges(n, edges), truth


def _unrank_pairs(r: np.ndarray, n: int):
    """Map ranks in the row-major upper triangle (i < j) back to pairs."""
    r = r.astype(np.int64)
    # rows start at r0(i) = i*n - i*(i+1)/2
    i = np.floor((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8.0 * r)) / 2).astype(np.int64)
    start = i * n - i * (i + 1) // 2
    over = start > r
    i[over] -= 1
    start = i * n - i * (i + 1) // 2
    nxt = (i + 1) * n - (i + 1) * (i + 2) // 2
    under = nxt <= r
    i[under] += 1
    start = i * n - i * (i + 1) // 2
    j = r - start + i + 1
    return i, j


# -- LFR-like ----------------------------------------------------------------

def _power_mean(kmin: float, kmax: float, tau: float) -> float:
    """Mean of the continuous density proportional to x**tau on [kmin, kmax]."""
    if kmax - kmin < 1e-12:
        return kmin
    def integral(p):
        if abs(p + 1.0) < 1e-12:
            return math.log(kmax / kmin)
        return (kmax ** (p + 1) - kmin ** (p + 1)) / (p + 1)
    return integral(tau + 1) / integral(tau)


def solve_kmin(avgk: float, maxk: float, tau1: float) -> float:
    """Lower degree bound giving the requested mean degree."""
    lo, hi = 1.0, float(maxk)
    if not _power_mean(lo, hi, tau1) <= avgk <= hi:
        raise GeneratorError(
            f"no minimum degree yields avgk={avgk} with maxk={maxk}, tau1={tau1}")
    if avgk >= hi:
        return hi
    return brentq(lambda k: _power_mean(k, hi, tau1) - avgk, lo, hi, xtol=1e-10)


def _sample_power(rng, lo: float, hi: float, tau: float, size: int) -> np.ndarray:
    """Inverse-CDF samples from the continuous power law on [lo, hi]."""
    u = rng.random(size)
    if lo == hi:
        return np.full(size, lo)
    if abs(tau + 1.0) < 1e-12:
        return lo * (hi / lo) ** u
    a, b = lo ** (tau + 1), hi ** (tau + 1)
    return (a + u * (b - a)) ** (1.0 / (tau + 1))


def _community_sizes(rng, p: LFRParams) -> list[int]:
    target = p.N + p.On * (p.Om - 1)
    support = np.arange(p.minc, p.maxc + 1)
    weights = support.astype(float) ** p.tau2
    weights /= weights.sum()
    sizes: list[int] = []
    total = 0
    while total < target:
        s = int(rng.choice(support, p=weights))
        if total + s > target:
            rest = target - total
            if rest >= p.minc:
                sizes.append(rest)
                total += rest
                break
            # spread the remainder over communities with room left
            for i in range(len(sizes)):
                if rest == 0:
                    break
                room = min(p.maxc - sizes[i], rest)
                sizes[i] += room
                rest -= room
            if rest:
                raise GeneratorError(
                    "community sizes cannot cover N within [minc, maxc]")
            total = target
            break
        sizes.append(s)
        total += s
    if len(sizes) < p.Om:
        raise GeneratorError(f"only {len(sizes)} communities for Om={p.Om}")
    return sizes


def _assign(rng, p: LFRParams, sizes: list[int], internal: np.ndarray) -> list[list[int]]:
    """Fill community seats; overlapping nodes are labels ``0..On-1``.

    Nodes with larger internal degree are placed first, into communities
    large enough to hold their internal links where possible.
    """
    room = np.array(sizes, dtype=np.int64)
    cap = np.array(sizes, dtype=np.int64) - 1
    cover: list[list[int]] = [[] for _ in sizes]
    order = sorted(range(p.N), key=lambda u: (-(u < p.On), -internal[u], u))
    for u in order:
        m = p.Om if u < p.On else 1
        need = math.ceil(internal[u] / m) if m else 0
        open_ = np.flatnonzero(room > 0)
        if len(open_) < m:
            raise GeneratorError("community seats exhausted")
        fit = open_[cap[open_] >= need]
        pool = fit if len(fit) >= m else open_[np.argsort(-cap[open_], kind="stable")][:max(m, 1)]
        chosen = rng.choice(pool, size=m, replace=False) if len(pool) > m else pool[:m]
        for c in np.sort(chosen):
            cover[c].append(u)
            room[c] -= 1
    return [sorted(c) for c in cover if c]


def _pair_stubs(rng, stubs: np.ndarray, accept, edges: set) -> int:
    """Configuration-model pairing with bounded reshuffles; returns discards."""
    pending = stubs
    for _ in range(MATCH_RETRIES):
        if len(pending) < 2:
            break
        pending = rng.permutation(pending)
        if len(pending) % 2:
            left, pending = pending[-1:], pending[:-1]
        else:
            left = pending[:0]
        rejected = [left]
        for a, b in zip(pending[0::2].tolist(), pending[1::2].tolist()):
            key = (a, b) if a < b else (b, a)
            if a == b or key in edges or not accept(a, b):
                rejected.append(np.array([a, b]))
            else:
                edges.add(key)
        pending = np.concatenate(rejected)
    return len(pending)


def gen_lfr_like(p: LFRParams) -> tuple[Graph, GroundTruth]:
    p.validate()
    rng = _rng(p.seed)
    sizes = _community_sizes(rng, p)

    kmin = solve_kmin(p.avgk, p.maxk, p.tau1)
    degree = np.minimum(np.rint(_sample_power(rng, kmin, p.maxk, p.tau1, p.N)),
                        p.maxk).astype(np.int64)
    degree = np.maximum(degree, 1)
    internal = np.ceil((1.0 - p.mu) * degree - 1e-9).astype(np.int64)
    external = degree - internal

    cover = _assign(rng, p, sizes, internal)
    member_of: list[list[int]] = [[] for _ in range(p.N)]
    for c, members in enumerate(cover):
        for u in members:
            member_of[u].append(c)

    edges: set[tuple[int, int]] = set()
    for c, members in enumerate(cover):
        stubs = []
        for u in members:
            m = len(member_of[u])
            share = internal[u] // m + (1 if member_of[u].index(c) < internal[u] % m else 0)
            stubs.extend([u] * int(min(share, len(members) - 1)))
        _pair_stubs(rng, np.array(stubs, dtype=np.int64), lambda a, b: True, edges)

    groups = [frozenset(m) for m in member_of]
    outer = np.repeat(np.arange(p.N), external)
    _pair_stubs(rng, outer, lambda a, b: not (groups[a] & groups[b]), edges)

    g = from_edges(p.N, sorted(edges))
    return g, GroundTruth(cover)


def empirical_mixing(g: Graph, truth: GroundTruth) -> float:
    """Fraction of edges whose endpoints share no planted community."""
    if g.edge_count == 0:
        return 0.0
    groups = [frozenset(m) for m in truth.memberships(g.node_count)]
    inter = sum(1 for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist())
                if not groups[u] & groups[v])
    return inter / g.edge_count


# -- output ------------------------------------------------------------------

def write_edge_list(g: Graph, out: TextIO) -> None:
    for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist()):
        out.write(f"{g.label(u)} {g.label(v)}\n")


def write_truth_cover(g: Graph, truth: GroundTruth, out: TextIO) -> None:
    for members in truth.cover:
        out.write(" ".join(str(g.label(u)) for u in members) + "\n")


def write_truth_nodewise(g: Graph, truth: GroundTruth, out: TextIO) -> None:
    for u, cs in enumerate(truth.memberships(g.node_count)):
        out.write(" ".join([str(g.label(u)), *map(str, cs)]) + "\n")


def metadata(params, g: Graph, truth: GroundTruth) -> str:
    info = {
        "params": asdict(params) if hasattr(params, "__dataclass_fields__") else dict(params),
        "rng": RNG_ALGORITHM,
        "nodes": g.node_count,
        "edges": g.edge_count,
        "communities": len(truth.cover),
        "empirical_mu": round(empirical_mixing(g, truth), 6),
    }
    return json.dumps(info, indent=2, sort_keys=True) + "\n"
