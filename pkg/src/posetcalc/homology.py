"""Integral homology of order complexes via Smith normal form.

All integer arithmetic is arbitrary-precision (plain Python ints); the
intermediate entry swell of SNF is real even at desk scale, which is why the
matrices never go through fixed-width types.
"""

from __future__ import annotations

from .core import Poset, mask_bits


class ChainComplexZ:
    """Chain complex of a poset's order complex over the integers.

    ``basis[k]`` lists the (k+1)-element chains as tuples of labels in poset
    order; ``boundary[k]`` is the integer matrix C_k -> C_{k-1} with the
    alternating-face signs.  The composite of consecutive boundaries is
    asserted to vanish at construction.
    """

    __slots__ = ("basis", "boundary")

    def __init__(self, basis, boundary):
        self.basis = basis
        self.boundary = boundary
        for k in range(2, len(basis)):
            prod = _mat_mul(boundary[k - 1], boundary[k])
            if any(any(v != 0 for v in row) for row in prod):
                raise AssertionError("boundary squared is nonzero in degree %d"
                                     % k)

    def dim(self):
        return len(self.basis) - 1

    def ranks(self):
        return [len(b) for b in self.basis]


def _mat_mul(a, b):
    if not a or not b:
        return []
    rows, mid, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(mid):
            v = ai[k]
            if v:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += v * bk[j]
    return out


def order_complex_chain(p: Poset) -> ChainComplexZ:
    """Chains of the poset as simplices, ordered by the poset order."""
    chains_by_len = {}
    dn = p.dn

    def grow(chain, top):
        chains_by_len.setdefault(len(chain), []).append(tuple(chain))
        for nxt in mask_bits(p.up[top] & ~(1 << top)):
            grow(chain + [nxt], nxt)

    for v in range(p.n):
        grow([v], v)
    if not chains_by_len:
        return ChainComplexZ([], [])
    top_len = max(chains_by_len)
    basis = []
    index = []
    for k in range(1, top_len + 1):
        items = sorted(chains_by_len.get(k, []),
                       key=lambda c: tuple(p.labels[v] for v in c))
        basis.append([tuple(p.labels[v] for v in c) for c in items])
        index.append({c: i for i, c in enumerate(items)})
    boundary = [[]]
    for k in range(1, top_len):
        rows = len(basis[k - 1])
        cols = len(basis[k])
        mat = [[0] * cols for _ in range(rows)]
        items = sorted(chains_by_len.get(k + 1, []),
                       key=lambda c: tuple(p.labels[v] for v in c))
        for j, c in enumerate(items):
            for i, drop in enumerate(c):
                face = c[:i] + c[i + 1:]
                mat[index[k - 1][face]][j] += (-1) ** i
        boundary.append(mat)
    return ChainComplexZ(basis, boundary)


def smith_diagonal(mat):
    """Invariant factors (nonzero diagonal of the Smith normal form)."""
    if not mat or not mat[0]:
        return []
    a = [row[:] for row in mat]
    rows, cols = len(a), len(a[0])
    diag = []
    r = c = 0
    while r < rows and c < cols:
        # pick the smallest nonzero entry as pivot
        best = None
        for i in range(r, rows):
            for j in range(c, cols):
                v = a[i][j]
                if v and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        a[r], a[bi] = a[bi], a[r]
        for row in a:
            row[c], row[bj] = row[bj], row[c]
        while True:
            pivot = a[r][c]
            dirty = False
            for i in range(r + 1, rows):
                if a[i][c]:
                    q = a[i][c] // pivot
                    if q:
                        for j in range(c, cols):
                            a[i][j] -= q * a[r][j]
                    if a[i][c]:
                        a[r], a[i] = a[i], a[r]
                        dirty = True
                        pivot = a[r][c]
            for j in range(c + 1, cols):
                if a[r][j]:
                    q = a[r][j] // pivot
                    if q:
                        for i in range(r, rows):
                            a[i][j] -= q * a[i][c]
                    if a[r][j]:
                        for i in range(rows):
                            a[i][c], a[i][j] = a[i][j], a[i][c]
                        dirty = True
                        pivot = a[r][c]
            if not dirty:
                break
        # ensure the pivot divides the rest of the block
        pivot = a[r][c]
        fixed = True
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                if a[i][j] % pivot:
                    for j2 in range(c, cols):
                        a[r][j2] += a[i][j2]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        diag.append(abs(pivot))
        r += 1
        c += 1
    return diag


def _rank_mod2(mat):
    if not mat or not mat[0]:
        return 0
    rows = []
    for row in mat:
        bits = 0
        for j, v in enumerate(row):
            if v & 1:
                bits |= 1 << j
        if bits:
            rows.append(bits)
    rank = 0
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


class HomologyProfile:
    """Betti numbers, torsion invariant factors and Euler characteristic."""

    __slots__ = ("betti", "torsion", "euler")

    def __init__(self, betti, torsion, euler):
        self.betti = list(betti)
        self.torsion = [list(t) for t in torsion]
        self.euler = euler
        alt = sum((-1) ** k * b for k, b in enumerate(self.betti))
        if self.betti and alt != euler:
            raise AssertionError("euler characteristic mismatch")

    def reduced_betti(self):
        """Reduced Betti numbers; the empty complex has none."""
        if not self.betti:
            return []
        out = self.betti[:]
        out[0] -= 1
        return out

    def is_reduced_trivial(self):
        return (all(b == 0 for b in self.reduced_betti())
                and all(not t for t in self.torsion)
                and bool(self.betti))

    def __repr__(self):
        return ("HomologyProfile(betti=%r, torsion=%r, euler=%d)"
                % (self.betti, self.torsion, self.euler))


def homology(c: ChainComplexZ) -> HomologyProfile:
    """Exact integral homology of a chain complex via SNF."""
    dims = c.ranks()
    if not dims:
        return HomologyProfile([], [], 0)
    top = len(dims) - 1
    factors = [[] for _ in range(top + 2)]
    for k in range(1, top + 1):
        factors[k] = smith_diagonal(c.boundary[k])
    betti = []
    torsion = []
    for k in range(top + 1):
        rank_in = len(factors[k + 1]) if k + 1 <= top else 0
        rank_out = len(factors[k]) if k >= 1 else 0
        betti.append(dims[k] - rank_out - rank_in)
        torsion.append([d for d in (factors[k + 1] if k + 1 <= top else [])
                        if d > 1])
    euler = sum((-1) ** k * d for k, d in enumerate(dims))
    return HomologyProfile(betti, torsion, euler)


def mod2_betti(c: ChainComplexZ):
    dims = c.ranks()
    if not dims:
        return []
    top = len(dims) - 1
    ranks = [0] * (top + 2)
    for k in range(1, top + 1):
        ranks[k] = _rank_mod2(c.boundary[k])
    return [dims[k] - ranks[k] - (ranks[k + 1] if k + 1 <= top else 0)
            for k in range(top + 1)]


def poset_homology(p: Poset) -> HomologyProfile:
    return homology(order_complex_chain(p))


def is_z_acyclic(p: Poset) -> bool:
    """Reduced integral homology of the order complex vanishes."""
    if p.n == 0:
        return False
    return poset_homology(p).is_reduced_trivial()


def euler_characteristic(p: Poset) -> int:
    return p.chain_count_euler()


def is_connected(p: Poset) -> bool:
    return p.connected()
