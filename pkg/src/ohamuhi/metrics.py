"""Agreement scores between partitions and between overlapping covers.

All entropies use natural logarithms. Inputs are keyed by node label, so a
detected structure and a ground-truth file can be compared directly.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Mapping, Sequence

import numpy as np


class MetricError(ValueError):
    pass


def _entropy(counts: Iterable[int], n: int) -> float:
    h = 0.0
    for c in counts:
        if c:
            p = c / n
            h -= p * math.log(p)
    return h


def nmi_sqrt(a: Mapping, b: Mapping) -> float:
    """Mutual information over ``sqrt(H(A) * H(B))`` for two partitions."""
    if a.keys() != b.keys():
        raise MetricError("partitions cover different label sets")
    n = len(a)
    if n == 0:
        raise MetricError("empty partition")
    joint = Counter((a[k], b[k]) for k in a)
    ca = Counter(a.values())
    cb = Counter(b.values())
    ha = _entropy(ca.values(), n)
    hb = _entropy(cb.values(), n)
    if ha == 0.0 or hb == 0.0:
        return 1.0 if ha == hb else 0.0
    mi = 0.0
    for (x, y), c in joint.items():
        mi += (c / n) * math.log(c * n / (ca[x] * cb[y]))
    return min(max(mi / math.sqrt(ha * hb), 0.0), 1.0)


# -- covers ----------------------------------------------------------------

def _cover_matrix(cover: Sequence[Iterable], index: dict) -> np.ndarray:
    m = np.zeros((len(index), len(cover)), dtype=np.int64)
    for j, comm in enumerate(cover):
        for lab in comm:
            m[index[lab], j] = 1
    return m


def _universe(a: Sequence[Iterable], b: Sequence[Iterable]) -> list:
    if not a or not b:
        raise MetricError("empty cover")
    ua = set().union(*map(set, a))
    ub = set().union(*map(set, b))
    if ua != ub:
        raise MetricError("covers span different label sets")
    return sorted(ua, key=lambda x: (type(x).__name__, x))


def _h(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p, dtype=float)
    nz = p > 0
    out[nz] = -p[nz] * np.log(p[nz])
    return out


def _conditional(x: np.ndarray, y: np.ndarray, n: int) -> float:
    """Normalized H(X|Y) averaged over the communities of X."""
    d = x.T @ y                      # both
    sx = x.sum(axis=0)[:, None]
    sy = y.sum(axis=0)[None, :]
    c = sx - d                       # in X only
    b = sy - d                       # in Y only
    a = n - d - b - c                # in neither
    ha, hb, hc, hd = (_h(t / n) for t in (a, b, c, d))
    h_joint = ha + hb + hc + hd
    h_y = _h(sy / n) + _h((n - sy) / n)
    cond = h_joint - h_y
    admissible = ha + hd > hb + hc
    h_x = (_h(sx / n) + _h((n - sx) / n))[:, 0]
    best = np.where(admissible, cond, np.inf).min(axis=1)
    best = np.where(np.isinf(best), h_x, best)
    with np.errstate(invalid="ignore", divide="ignore"):
        norm = np.where(h_x > 0, best / np.where(h_x > 0, h_x, 1.0), 0.0)
    return float(norm.mean())


def onmi(a: Sequence[Iterable], b: Sequence[Iterable]) -> float:
    """Overlapping NMI: ``1 - (H(X|Y)_norm + H(Y|X)_norm) / 2``.

    A conditional entropy ``H(X_k|Y_l)`` only counts when
    ``h(P11) + h(P00) > h(P01) + h(P10)``; a community with no admissible
    match contributes its full entropy.
    """
    labels = _universe(a, b)
    index = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    x = _cover_matrix(a, index)
    y = _cover_matrix(b, index)
    score = 1.0 - 0.5 * (_conditional(x, y, n) + _conditional(y, x, n))
    return min(max(score, 0.0), 1.0)


def _pair_counts(cover: Sequence[Iterable], index: dict) -> tuple[np.ndarray, np.ndarray]:
    """Sorted pair keys ``i * n + j`` (i < j) and their shared-community counts."""
    n = len(index)
    keys = []
    for comm in cover:
        ids = np.array(sorted({index[lab] for lab in comm}), dtype=np.int64)
        if len(ids) < 2:
            continue
        i, j = np.triu_indices(len(ids), 1)
        keys.append(ids[i] * n + ids[j])
    if not keys:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.unique(np.concatenate(keys), return_counts=True)


def omega_adjusted(a: Sequence[Iterable], b: Sequence[Iterable]) -> float:
    """Adjusted Omega index over all unordered label pairs (not clamped)."""
    labels = _universe(a, b)
    n = len(labels)
    if n < 2:
        raise MetricError("omega needs at least two labels")
    index = {lab: i for i, lab in enumerate(labels)}
    pairs = n * (n - 1) // 2
    ka, va = _pair_counts(a, index)
    kb, vb = _pair_counts(b, index)

    both, ia, ib = np.intersect1d(ka, kb, assume_unique=True, return_indices=True)
    agree_nonzero = int(np.count_nonzero(va[ia] == vb[ib]))
    union = len(ka) + len(kb) - len(both)
    agree = agree_nonzero + (pairs - union)

    ta = Counter(va.tolist())
    tb = Counter(vb.tolist())
    ta[0] = pairs - len(ka)
    tb[0] = pairs - len(kb)
    expected_num = sum(ta[k] * tb.get(k, 0) for k in ta)
    if expected_num == pairs * pairs:
        return 1.0 if agree == pairs else 0.0
    observed = agree / pairs
    expected = expected_num / (pairs * pairs)
    return (observed - expected) / (1.0 - expected)


# -- file readers --------------------------------------------------------------

def read_partition(lines: Iterable[str]) -> dict:
    """``label community`` per line."""
    out = {}
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        tok = s.split()
        if len(tok) != 2:
            raise MetricError(f"line {lineno}: expected 'label community'")
        if tok[0] in out:
            raise MetricError(f"line {lineno}: label {tok[0]} listed twice")
        out[tok[0]] = tok[1]
    if not out:
        raise MetricError("empty partition file")
    return out


def read_cover(lines: Iterable[str], fmt: str = "cover") -> list[set]:
    """Read a cover: one community per line (``cover``) or
    ``label membership...`` per line (``nodewise``)."""
    if fmt == "cover":
        comms = []
        for line in lines:
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            comms.append(set(s.split()))
        if not comms:
            raise MetricError("empty cover file")
        return comms
    if fmt == "nodewise":
        by_comm: dict[str, set] = {}
        for lineno, line in enumerate(lines, 1):
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            tok = s.split()
            if len(tok) < 2:
                raise MetricError(f"line {lineno}: node without membership")
            for c in tok[1:]:
                by_comm.setdefault(c, set()).add(tok[0])
        if not by_comm:
            raise MetricError("empty cover file")
        return [by_comm[c] for c in sorted(by_comm, key=_natural)]
    raise MetricError(f"unknown cover format {fmt!r}")


def _natural(x: str):
    try:
        return (0, int(x), "")
    except ValueError:
        return (1, 0, x)


def partition_to_cover(p: Mapping) -> list[set]:
    groups: dict = {}
    for lab, c in p.items():
        groups.setdefault(c, set()).add(lab)
    return list(groups.values())
