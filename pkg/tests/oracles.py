"""Slow, literal reference implementations used as test oracles."""

import itertools
import math
from collections import Counter


def adjacency(n, edges):
    adj = {u: set() for u in range(n)}
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def naive_dss(n, edges, T):
    """Synchronous iteration over a dict keyed by frozenset pairs."""
    adj = adjacency(n, edges)
    cur = {frozenset((u, v)): 1.0 for u in adj for v in adj[u]}

    def s(d, a, b):
        return 1.0 if a == b else d[frozenset((a, b))]

    for _ in range(T):
        nxt = {}
        for key in cur:
            u, v = tuple(key)
            common = (adj[u] | {u}) & (adj[v] | {v})
            num = sum(s(cur, u, x) + s(cur, v, x) for x in common)
            den = math.sqrt(sum(s(cur, u, x) for x in adj[u])
                            * sum(s(cur, v, y) for y in adj[v]))
            nxt[key] = num / den
        cur = nxt
    return cur


def naive_cosine(n, edges):
    adj = adjacency(n, edges)
    out = {}
    for u in adj:
        for v in adj[u]:
            cu, cv = adj[u] | {u}, adj[v] | {v}
            out[frozenset((u, v))] = len(cu & cv) / math.sqrt(len(cu) * len(cv))
    return out


def entropy(counts, total):
    return -sum(c / total * math.log(c / total) for c in counts if c)


def naive_nmi(a, b):
    """a, b: lists of cluster ids aligned by position."""
    n = len(a)
    ha = entropy(Counter(a).values(), n)
    hb = entropy(Counter(b).values(), n)
    if ha == 0 and hb == 0:
        return 1.0 if len(set(zip(a, b))) == len(set(a)) else 0.0
    if ha == 0 or hb == 0:
        return 0.0
    joint = Counter(zip(a, b))
    ca, cb = Counter(a), Counter(b)
    mi = sum(c / n * math.log(c * n / (ca[x] * cb[y])) for (x, y), c in joint.items())
    return mi / math.sqrt(ha * hb)


def naive_ari(a, b):
    """Adjusted Rand index from the pair-counting contingency formula."""
    comb = lambda k: k * (k - 1) // 2
    n = len(a)
    idx = sum(comb(c) for c in Counter(zip(a, b)).values())
    sa = sum(comb(c) for c in Counter(a).values())
    sb = sum(comb(c) for c in Counter(b).values())
    expected = sa * sb / comb(n)
    top = (sa + sb) / 2
    if top == expected:
        return 1.0
    return (idx - expected) / (top - expected)


def naive_omega(a, b, universe):
    """a, b: lists of sets. Enumerates every unordered pair."""
    pairs = list(itertools.combinations(sorted(universe), 2))
    def shared(cover, x, y):
        return sum(1 for c in cover if x in c and y in c)
    ka = [shared(a, x, y) for x, y in pairs]
    kb = [shared(b, x, y) for x, y in pairs]
    P = len(pairs)
    obs = sum(1 for x, y in zip(ka, kb) if x == y) / P
    ta, tb = Counter(ka), Counter(kb)
    exp = sum(ta[k] * tb[k] for k in ta) / P ** 2
    if exp == 1:
        return 1.0 if ka == kb else 0.0
    return (obs - exp) / (1 - exp)


def _h2(p):
    return -p * math.log(p) if p > 0 else 0.0


def naive_onmi(a, b, universe):
    """Overlapping NMI with the constrained best-match conditional entropy,
    written per community from explicit 2x2 membership counts."""
    n = len(universe)

    def H(c):
        p = len(c) / n
        return _h2(p) + _h2(1 - p)

    def cond(x, y):
        n11 = len(x & y)
        n10 = len(x - y)
        n01 = len(y - x)
        n00 = n - n11 - n10 - n01
        h11, h10, h01, h00 = (_h2(k / n) for k in (n11, n10, n01, n00))
        if h11 + h00 <= h10 + h01:
            return None
        hy = H(y)
        return h11 + h10 + h01 + h00 - hy

    def direction(xs, ys):
        total = 0.0
        for x in xs:
            hx = H(x)
            if hx == 0:
                continue
            options = [c for c in (cond(x, y) for y in ys) if c is not None]
            best = min(options) if options else hx
            total += best / hx
        return total / len(xs)

    return 1 - 0.5 * (direction(a, b) + direction(b, a))


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]
        yield [[head]] + part


def naive_hamuhi(n, edges, sim, cd="most-weak", K=2, eps=None):
    """Agglomeration over frozensets, recomputing every statistic from the
    edge list on each query. ``sim`` maps frozenset edge -> value.

    Returns (sorted list of communities as sorted lists, list of frozen
    communities)."""
    live = {frozenset([u]) for u in range(n)}
    frozen = set()

    def owner(u):
        return next(c for c in live if u in c)

    def stats(c):
        m_int = 0
        cross = {}
        for u, v in edges:
            iu, iv = u in c, v in c
            if iu and iv:
                m_int += 1
            elif iu or iv:
                other = owner(v if iu else u)
                cnt, mx = cross.get(other, (0, 0.0))
                cross[other] = (cnt + 1, max(mx, sim[frozenset((u, v))]))
        return m_int, cross

    def satisfies(c):
        m_int, cross = stats(c)
        if not cross:
            return True
        counts = [k for k, _ in cross.values()]
        if cd == "weak":
            return 2 * m_int > sum(counts)
        return m_int > max(counts)

    def flag(failing):
        new = set()
        for c in live:
            if c in frozen or len(c) < 2 or not failing(c):
                continue
            _, cross = stats(c)
            if len(cross) < 2:
                continue
            top = max(s for _, s in cross.values())
            if all(s >= max(top - eps, 0.0) for _, s in cross.values()):
                new.add(c)
        frozen.update(new)

    def sweep(failing):
        if eps is not None:
            flag(failing)
        work = sorted((c for c in live if c not in frozen and failing(c)), key=min)
        merged = False
        for c in work:
            if c not in live or not failing(c):
                continue
            _, cross = stats(c)
            options = {h: s for h, (_, s) in cross.items() if h not in frozen}
            if not options:
                continue
            top = max(options.values())
            group = [c] + [h for h, s in options.items() if s == top]
            for h in group:
                live.remove(h)
            live.add(frozenset().union(*group))
            merged = True
        return merged

    while sweep(lambda c: not satisfies(c)):
        pass
    while sweep(lambda c: len(c) < K):
        pass
    comms = sorted((sorted(c) for c in live), key=lambda c: c[0])
    return comms, [sorted(c) for c in frozen]


def naive_fuzzy(n, edges, sim, communities, cores=()):
    """Membership probabilities straight from the definition.

    ``communities`` is a list of member sets indexed by community id;
    ``cores`` the ids of dissolved communities. Returns {c: {u: f}}."""
    adj = adjacency(n, edges)
    home = {u: c for c, m in enumerate(communities) for u in m}

    def conn(u, c):
        return sum(sim[frozenset((u, v))] for v in communities[c] if v in adj[u])

    out = {}
    for u in range(n):
        cands = {c for c, m in enumerate(communities)
                 if c not in cores and adj[u] & m}
        if home[u] not in cores:
            cands.add(home[u])
        elif not cands:
            cands = {home[u]}
        best = max(conn(u, c) for c in cands)
        for c in cands:
            rest = communities[c] - {u}
            if best == 0 or not rest:
                f = 0.0
            else:
                f = conn(u, c) / best * len(adj[u] & rest) / len(rest)
            if f > 0 or c == home[u]:
                out.setdefault(c, {})[u] = f
    return out
