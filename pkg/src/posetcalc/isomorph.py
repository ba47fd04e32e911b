"""Poset isomorphism: iterative refinement plus backtracking.

The colour refinement is an isomorphism invariant, so the fingerprint of the
stable colouring doubles as a memo key; two isomorphic posets always share a
fingerprint, non-isomorphic ones rarely do, and callers that need exactness
bucket by fingerprint and fall back to an explicit witness search.

An optional element colouring (any hashable per element) is respected: it
seeds the refinement, so witnesses preserve colours.  This is how searches
memoize (poset, distinguished-subset) pairs up to isomorphism of the pair.
"""

from __future__ import annotations

from .core import MonotoneMap, Poset


def _stable_coloring(p: Poset, colors=None):
    """Iterated refinement by cover-neighbourhood colour multisets."""
    n = p.n
    cov_up = p._cov_up_list()
    cov_dn = p._cov_dn_list()
    dn = p.dn
    up = p.up
    base = [(bin(dn[i]).count("1"), bin(up[i]).count("1"),
             len(cov_dn[i]), len(cov_up[i])) for i in range(n)]
    if colors is not None:
        base = [(colors[i],) + base[i] for i in range(n)]
    ranks = _rank(base)
    while True:
        sig = [(ranks[i],
                tuple(sorted(ranks[j] for j in cov_dn[i])),
                tuple(sorted(ranks[j] for j in cov_up[i])))
               for i in range(n)]
        new = _rank(sig)
        if new == ranks:
            return ranks
        ranks = new


def _rank(values):
    order = sorted(set(values))
    lookup = {v: k for k, v in enumerate(order)}
    return [lookup[v] for v in values]


def fingerprint(p: Poset, colors=None):
    """Hashable isomorphism-invariant key (not a complete invariant)."""
    ranks = _stable_coloring(p, colors)
    hist = {}
    for r in ranks:
        hist[r] = hist.get(r, 0) + 1
    edge_hist = {}
    for i, j in p.covers:
        key = (ranks[i], ranks[j])
        edge_hist[key] = edge_hist.get(key, 0) + 1
    return (p.n, tuple(sorted(hist.items())), tuple(sorted(edge_hist.items())))


def find_isomorphism(p: Poset, q: Poset, colors_p=None, colors_q=None):
    """An isomorphism p -> q as a MonotoneMap, or None (exhaustively refuted).

    With colours given, only colour-preserving isomorphisms count.
    """
    if p.n != q.n or len(p.covers) != len(q.covers):
        return None
    if (colors_p is None) != (colors_q is None):
        raise ValueError("specify colours for both sides or neither")
    if colors_p is not None:
        if sorted(colors_p) != sorted(colors_q):
            return None
        palette = {v: k for k, v in enumerate(sorted(set(colors_p)))}
        colors_p = [palette[v] for v in colors_p]
        colors_q = [palette[v] for v in colors_q]
    rp = _stable_coloring(p, colors_p)
    rq = _stable_coloring(q, colors_q)
    if sorted(rp) != sorted(rq):
        return None
    n = p.n
    by_color_q = {}
    for j in range(n):
        by_color_q.setdefault(rq[j], []).append(j)
    cand = []
    for i in range(n):
        if rp[i] not in by_color_q:
            return None
        cand.append(by_color_q[rp[i]])
    order = sorted(range(n), key=lambda i: (len(cand[i]), i))
    assign = [-1] * n
    used = [False] * n
    pdn = p.dn
    qdn = q.dn
    pos_in_order = {v: k for k, v in enumerate(order)}

    def consistent(i, j):
        for i2 in order[:pos_in_order[i]]:
            j2 = assign[i2]
            if bool(pdn[i] >> i2 & 1) != bool(qdn[j] >> j2 & 1):
                return False
            if bool(pdn[i2] >> i & 1) != bool(qdn[j2] >> j & 1):
                return False
        return True

    def backtrack(k):
        if k == n:
            return True
        i = order[k]
        for j in cand[i]:
            if used[j] or not consistent(i, j):
                continue
            assign[i] = j
            used[j] = True
            if backtrack(k + 1):
                return True
            assign[i] = -1
            used[j] = False
        return False

    if not backtrack(0):
        return None
    table = {p.labels[i]: q.labels[assign[i]] for i in range(n)}
    m = MonotoneMap(p, q, table, check=False)
    if not m.is_isomorphism():
        raise AssertionError("isomorphism witness failed to verify")
    return m


def are_isomorphic(p: Poset, q: Poset):
    return find_isomorphism(p, q)


class IsoTable:
    """Memo table keyed by fingerprint with explicit isomorphism fallback.

    Stores (poset, colors, value) buckets; lookups compare against each entry
    with a witness search, so distinct isomorphism classes never alias.
    """

    def __init__(self):
        self._buckets = {}
        self.hits = 0
        self.misses = 0

    def get(self, p: Poset, colors=None, default=None):
        bucket = self._buckets.get(fingerprint(p, colors))
        if bucket:
            for stored, stored_colors, value in bucket:
                if find_isomorphism(p, stored, colors, stored_colors) is not None:
                    self.hits += 1
                    return value
        self.misses += 1
        return default

    def put(self, p: Poset, value, colors=None):
        self._buckets.setdefault(fingerprint(p, colors), []).append(
            (p, colors, value))

    def __len__(self):
        return sum(len(b) for b in self._buckets.values())
