"""Finite posets, preposets, subposet masks and monotone maps.

Elements are identified by string labels at the API boundary and by dense
integer indices internally.  Reachability is kept as per-element bitmasks
(one Python int per element), computed lazily and cached; every type is
immutable after construction, so instances are safe to share.
"""

from __future__ import annotations

from functools import reduce


class CycleError(ValueError):
    """Raised when a relation that must be acyclic contains a cycle.

    The offending cycle (a list of labels) is kept in ``.cycle``.
    """

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("relation has a cycle: " + " < ".join(self.cycle))


def _bits(mask):
    """Iterate over the set bit positions of an int mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _find_cycle(n, succ):
    """Return one directed cycle (list of vertices) in succ, or None."""
    color = [0] * n  # 0 new, 1 on stack, 2 done
    parent = [-1] * n
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(succ[root]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if color[w] == 0:
                    color[w] = 1
                    parent[w] = v
                    stack.append((w, iter(succ[w])))
                    advanced = True
                    break
                if color[w] == 1:
                    cyc = [w, v]
                    x = v
                    while x != w:
                        x = parent[x]
                        cyc.append(x)
                    cyc.reverse()
                    return cyc[:-1]
            if not advanced:
                color[v] = 2
                stack.pop()
    return None


class Preposet:
    """A finite carrier with a strictly acyclic relation (the arrows).

    The arrows need not be transitive; their transitive closure is a strict
    partial order, recovered by :func:`transitive_closure`.
    """

    __slots__ = ("labels", "index", "n", "arrows")

    def __init__(self, labels, arrows):
        labels = tuple(labels)
        index = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise ValueError("duplicate label: %r" % (lab,))
            index[lab] = i
        self.labels = labels
        self.index = index
        self.n = len(labels)
        arr = set()
        for a, b in arrows:
            i, j = self._ix(a), self._ix(b)
            if i == j:
                raise CycleError([labels[i]])
            arr.add((i, j))
        succ = [[] for _ in range(self.n)]
        for i, j in arr:
            succ[i].append(j)
        cyc = _find_cycle(self.n, succ)
        if cyc is not None:
            raise CycleError([labels[v] for v in cyc])
        self.arrows = frozenset(arr)

    def _ix(self, x):
        if isinstance(x, int):
            if 0 <= x < self.n:
                return x
            raise KeyError("element index out of range: %r" % (x,))
        try:
            return self.index[x]
        except KeyError:
            raise KeyError("unknown element id: %r" % (x,)) from None

    def arrow_labels(self):
        return sorted((self.labels[i], self.labels[j]) for i, j in self.arrows)

    def is_partial_order(self):
        """True if the arrow relation itself is already transitive."""
        succ = [0] * self.n
        for i, j in self.arrows:
            succ[i] |= 1 << j
        for i, j in self.arrows:
            if succ[j] & ~succ[i]:
                return False
        return True

    def __len__(self):
        return self.n

    def __repr__(self):
        return "Preposet(%d elements, %d arrows)" % (self.n, len(self.arrows))


class Poset:
    """A finite poset stored as its covering relation (Hasse diagram).

    ``covers`` is always the transitive reduction of the order; the
    reachability bitmasks ``dn``/``up`` (weak down- and up-sets) are derived
    lazily and cached.
    """

    __slots__ = ("labels", "index", "n", "covers", "_dn", "_up",
                 "_cov_dn", "_cov_up", "_hash")

    def __init__(self, labels, covers, _trusted=False):
        labels = tuple(labels)
        index = {}
        for i, lab in enumerate(labels):
            if lab in index:
                raise ValueError("duplicate label: %r" % (lab,))
            index[lab] = i
        self.labels = labels
        self.index = index
        self.n = len(labels)
        self.covers = frozenset(covers)
        self._dn = None
        self._up = None
        self._cov_dn = None
        self._cov_up = None
        self._hash = None
        if not _trusted:
            self._check_reduced()

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_covers(cls, labels, cover_pairs):
        """Build from labelled cover pairs; rejects redundant pairs.

        A pair that is implied by two others is not a cover, so its presence
        signals a malformed Hasse diagram.
        """
        p = cls(tuple(labels), set(), _trusted=True)
        covers = {(p._ix(a), p._ix(b)) for a, b in cover_pairs}
        return cls(p.labels, covers)

    @classmethod
    def from_relation(cls, labels, pairs):
        """Build from an arbitrary strict acyclic relation (closed, reduced)."""
        pre = Preposet(labels, pairs)
        return transitive_closure(pre)

    def _check_reduced(self):
        succ = [[] for _ in range(self.n)]
        for i, j in self.covers:
            if i == j:
                raise CycleError([self.labels[i]])
            succ[i].append(j)
        cyc = _find_cycle(self.n, succ)
        if cyc is not None:
            raise CycleError([self.labels[v] for v in cyc])
        dn = self.dn  # forces closure computation
        for i, j in self.covers:
            for k in _bits(self.up[i] & dn[j] & ~(1 << i) & ~(1 << j)):
                raise ValueError(
                    "pair (%r, %r) is not a cover: %r lies between"
                    % (self.labels[i], self.labels[j], self.labels[k]))

    # -- derived structure ----------------------------------------------

    @property
    def dn(self):
        """dn[i] = bitmask of all j with j <= i (weak down-set)."""
        if self._dn is None:
            n = self.n
            preds = [[] for _ in range(n)]
            outdeg = [0] * n
            for i, j in self.covers:
                preds[j].append(i)
                outdeg[i] += 1
            dn = [1 << i for i in range(n)]
            # process in topological order (Kahn on reversed edges)
            indeg = [len(preds[j]) for j in range(n)]
            order = [i for i in range(n) if indeg[i] == 0]
            k = 0
            while k < len(order):
                v = order[k]
                k += 1
                for w in self._cov_up_list()[v]:
                    dn[w] |= dn[v]
                    indeg[w] -= 1
                    if indeg[w] == 0:
                        order.append(w)
            self._dn = dn
        return self._dn

    def _cov_up_list(self):
        if self._cov_up is None:
            up = [[] for _ in range(self.n)]
            dn = [[] for _ in range(self.n)]
            for i, j in self.covers:
                up[i].append(j)
                dn[j].append(i)
            for lst in up:
                lst.sort()
            for lst in dn:
                lst.sort()
            self._cov_up = up
            self._cov_dn = dn
        return self._cov_up

    def _cov_dn_list(self):
        self._cov_up_list()
        return self._cov_dn

    @property
    def up(self):
        """up[i] = bitmask of all j with j >= i (weak up-set)."""
        if self._up is None:
            up = [1 << i for i in range(self.n)]
            dn = self.dn
            for i in range(self.n):
                for j in _bits(dn[i]):
                    if j != i:
                        up[j] |= 1 << i
            self._up = up
        return self._up

    def _ix(self, x):
        if isinstance(x, int):
            if 0 <= x < self.n:
                return x
            raise KeyError("element index out of range: %r" % (x,))
        try:
            return self.index[x]
        except KeyError:
            raise KeyError("unknown element id: %r" % (x,)) from None

    def _mask_of(self, elements):
        m = 0
        for x in elements:
            m |= 1 << self._ix(x)
        return m

    def full_mask(self):
        return (1 << self.n) - 1

    def le(self, a, b):
        return bool(self.dn[self._ix(b)] >> self._ix(a) & 1)

    def lt(self, a, b):
        i, j = self._ix(a), self._ix(b)
        return i != j and bool(self.dn[j] >> i & 1)

    def cover_labels(self):
        return sorted((self.labels[i], self.labels[j]) for i, j in self.covers)

    def maximal_mask(self, within=None):
        m = self.full_mask() if within is None else within
        out = 0
        for i in _bits(m):
            if self.up[i] & m == 1 << i:
                out |= 1 << i
        return out

    def minimal_mask(self, within=None):
        m = self.full_mask() if within is None else within
        out = 0
        for i in _bits(m):
            if self.dn[i] & m == 1 << i:
                out |= 1 << i
        return out

    def greatest(self, within=None):
        """Index of the greatest element of the (sub)poset, or None."""
        m = self.full_mask() if within is None else within
        for i in _bits(m):
            if self.dn[i] & m == m:
                return i
        return None

    def least(self, within=None):
        m = self.full_mask() if within is None else within
        for i in _bits(m):
            if self.up[i] & m == m:
                return i
        return None

    def height(self):
        """Length of a longest chain minus one (order-complex dimension)."""
        if self.n == 0:
            return -1
        h = [0] * self.n
        order = sorted(range(self.n), key=lambda i: bin(self.dn[i]).count("1"))
        for i in order:
            for j in self._cov_dn_list()[i]:
                h[i] = max(h[i], h[j] + 1)
        return max(h)

    # -- operations from the calculus ------------------------------------

    def dual(self):
        return Poset(self.labels, frozenset((j, i) for i, j in self.covers),
                     _trusted=True)

    def down_set(self, x):
        return SubposetMask(self, self.dn[self._ix(x)])

    def up_set(self, x):
        return SubposetMask(self, self.up[self._ix(x)])

    def closure_of(self, mask):
        m = mask.mask if isinstance(mask, SubposetMask) else self._mask_of(mask)
        out = 0
        for i in _bits(m):
            out |= self.dn[i]
        return SubposetMask(self, out)

    def hull_of(self, mask):
        m = mask.mask if isinstance(mask, SubposetMask) else self._mask_of(mask)
        out = 0
        for i in _bits(m):
            out |= self.up[i]
        return SubposetMask(self, out)

    def boundary(self):
        """The closure of all q with precisely one strict upper bound."""
        gen = 0
        for q in range(self.n):
            if bin(self.up[q] & ~(1 << q)).count("1") == 1:
                gen |= 1 << q
        return self.closure_of(SubposetMask(self, gen))

    def coboundary(self):
        """Dual image of boundary(dual): q with precisely one strict lower bound."""
        gen = 0
        for q in range(self.n):
            if bin(self.dn[q] & ~(1 << q)).count("1") == 1:
                gen |= 1 << q
        return self.hull_of(SubposetMask(self, gen))

    def atoms(self):
        return SubposetMask(self, self.minimal_mask())

    def lub(self, mask_or_elements):
        """Index of the least upper bound of a set, or None."""
        if isinstance(mask_or_elements, SubposetMask):
            m = mask_or_elements.mask
        elif isinstance(mask_or_elements, int):
            m = mask_or_elements
        else:
            m = self._mask_of(mask_or_elements)
        if m == 0:
            return None
        ub = reduce(lambda a, i: a & self.up[i], _bits(m), self.full_mask())
        if ub == 0:
            return None
        for i in _bits(ub):
            if ub & ~self.up[i] == 0:
                return i
        return None

    def glb(self, mask_or_elements):
        if isinstance(mask_or_elements, SubposetMask):
            m = mask_or_elements.mask
        elif isinstance(mask_or_elements, int):
            m = mask_or_elements
        else:
            m = self._mask_of(mask_or_elements)
        if m == 0:
            return None
        lb = reduce(lambda a, i: a & self.dn[i], _bits(m), self.full_mask())
        if lb == 0:
            return None
        for i in _bits(lb):
            if lb & ~self.dn[i] == 0:
                return i
        return None

    def is_conditionally_complete(self, method="pairwise"):
        """Every nonempty bounded-above subset has a least upper bound.

        The pairwise check suffices for finite posets (fold binary joins);
        ``method='exhaustive'`` enumerates all subsets as a guard and is
        only sensible for small carriers.
        """
        if method == "pairwise":
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    if self.up[i] & self.up[j]:
                        if self.lub((1 << i) | (1 << j)) is None:
                            return False
            return True
        if method == "exhaustive":
            if self.n > 20:
                raise ValueError("exhaustive check limited to <= 20 elements")
            for m in range(1, 1 << self.n):
                ub = self.full_mask()
                for i in _bits(m):
                    ub &= self.up[i]
                if ub and self.lub(m) is None:
                    return False
            return True
        raise ValueError("unknown method: %r" % (method,))

    def is_atomic(self):
        """Every element is the least upper bound of the atoms below it."""
        amask = self.minimal_mask()
        for x in range(self.n):
            below = self.dn[x] & amask
            if below == 0 or self.lub(below) != x:
                return False
        return True

    def atom_embedding(self):
        """The embedding x -> atoms-below-x into the simplex on the atoms."""
        from .ops import simplex, face_label
        if not self.is_atomic():
            raise ValueError("poset is not atomic")
        amask = self.minimal_mask()
        atom_labels = [self.labels[i] for i in _bits(amask)]
        target = simplex(atom_labels)
        table = {}
        for x in range(self.n):
            labs = frozenset(self.labels[i] for i in _bits(self.dn[x] & amask))
            table[self.labels[x]] = face_label(labs)
        m = MonotoneMap(self, target, table)
        if not m.is_embedding():
            raise AssertionError("atom embedding failed to verify")
        return m

    def linear_extension(self):
        """Labels sorted by down-set size, ties broken lexicographically."""
        order = sorted(range(self.n),
                       key=lambda i: (bin(self.dn[i]).count("1"), self.labels[i]))
        return [self.labels[i] for i in order]

    def chain_count_euler(self):
        """Euler characteristic of the order complex via chain counting."""
        # c[i] = number of chains with greatest element i, signed by length
        sgn = [0] * self.n
        order = sorted(range(self.n), key=lambda i: bin(self.dn[i]).count("1"))
        total = 0
        for i in order:
            s = 1  # the singleton chain {i}
            for j in _bits(self.dn[i] & ~(1 << i)):
                s -= sgn[j]
            sgn[i] = s
            total += s
        return total

    def connected(self, within=None):
        m = self.full_mask() if within is None else within
        if m == 0:
            return True
        adj = {}
        for i in _bits(m):
            adj[i] = []
        for i, j in self.covers:
            if (m >> i & 1) and (m >> j & 1):
                adj[i].append(j)
                adj[j].append(i)
        start = next(_bits(m))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == bin(m).count("1")

    def induced(self, mask):
        """Induced subposet on a mask; returns (poset, sub-to-parent indices)."""
        m = mask.mask if isinstance(mask, SubposetMask) else mask
        keep = list(_bits(m))
        pos = {v: k for k, v in enumerate(keep)}
        labels = tuple(self.labels[v] for v in keep)
        # cover pairs of the induced order recomputed from reachability
        dn = self.dn
        covers = set()
        for bj, j in enumerate(keep):
            below = dn[j] & m & ~(1 << j)
            for i in _bits(below):
                between = dn[j] & self.up[i] & m & ~(1 << i) & ~(1 << j)
                if between == 0:
                    covers.add((pos[i], bj))
        return Poset(labels, covers, _trusted=True), keep

    def relabel(self, fn):
        return Poset(tuple(fn(l) for l in self.labels), self.covers,
                     _trusted=True)

    def element_labels(self, mask):
        m = mask.mask if isinstance(mask, SubposetMask) else mask
        return [self.labels[i] for i in _bits(m)]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return (isinstance(other, Poset) and self.labels == other.labels
                and self.covers == other.covers)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.labels, self.covers))
        return self._hash

    def __repr__(self):
        return "Poset(%d elements, %d covers)" % (self.n, len(self.covers))


def transitive_closure(pre):
    """The poset generated by a preposet's arrows (covers recomputed)."""
    n = pre.n
    succ = [0] * n
    for i, j in pre.arrows:
        succ[i] |= 1 << j
    # longest-path style closure over a topological order
    indeg = [0] * n
    adj = [[] for _ in range(n)]
    for i, j in pre.arrows:
        adj[i].append(j)
        indeg[j] += 1
    order = [i for i in range(n) if indeg[i] == 0]
    k = 0
    while k < len(order):
        v = order[k]
        k += 1
        for w in adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
    reach = [0] * n  # strict up-reach
    for v in reversed(order):
        r = 0
        for w in adj[v]:
            r |= (1 << w) | reach[w]
        reach[v] = r
    covers = set()
    for i in range(n):
        above = reach[i]
        for j in _bits(above):
            between = False
            for k2 in _bits(above & ~(1 << j)):
                if reach[k2] >> j & 1:
                    between = True
                    break
            if not between:
                covers.add((i, j))
    return Poset(pre.labels, covers, _trusted=True)


class SubposetMask:
    """A subset of a parent poset's carrier, as a bitmask."""

    __slots__ = ("parent", "mask")

    def __init__(self, parent, members):
        self.parent = parent
        if isinstance(members, int):
            self.mask = members
        else:
            self.mask = parent._mask_of(members)

    def labels(self):
        return [self.parent.labels[i] for i in _bits(self.mask)]

    def is_closed(self):
        p = self.parent
        for i in _bits(self.mask):
            if p.dn[i] & ~self.mask:
                return False
        return True

    def is_open(self):
        p = self.parent
        for i in _bits(self.mask):
            if p.up[i] & ~self.mask:
                return False
        return True

    def is_full(self):
        """Every cone of the parent meets this subset in a cone or emptily."""
        p = self.parent
        for x in range(p.n):
            m = p.dn[x] & self.mask
            if m == 0:
                continue
            if not any(m & ~p.dn[g] == 0 for g in _bits(m)):
                return False
        return True

    def induced(self):
        return self.parent.induced(self.mask)

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, x):
        return bool(self.mask >> self.parent._ix(x) & 1)

    def __eq__(self, other):
        return (isinstance(other, SubposetMask)
                and self.parent is other.parent and self.mask == other.mask)

    def __hash__(self):
        return hash((id(self.parent), self.mask))

    def __repr__(self):
        return "SubposetMask(%s)" % (sorted(self.labels()),)


class MonotoneMap:
    """A total order-preserving map between posets, stored as a table."""

    __slots__ = ("source", "target", "table")

    def __init__(self, source, target, table, check=True):
        self.source = source
        self.target = target
        t = [None] * source.n
        for a, b in table.items():
            t[source._ix(a)] = target._ix(b)
        if any(v is None for v in t):
            missing = [source.labels[i] for i, v in enumerate(t) if v is None]
            raise ValueError("map table not total; missing %r" % (missing,))
        self.table = tuple(t)
        if check:
            for i, j in source.covers:
                if not target.dn[self.table[j]] >> self.table[i] & 1:
                    raise ValueError(
                        "not monotone at cover (%r, %r)"
                        % (source.labels[i], source.labels[j]))

    @classmethod
    def identity(cls, p):
        return cls(p, p, {l: l for l in p.labels}, check=False)

    def __call__(self, x):
        return self.target.labels[self.table[self.source._ix(x)]]

    def apply_index(self, i):
        return self.table[i]

    def image_mask(self, mask):
        out = 0
        for i in _bits(mask):
            out |= 1 << self.table[i]
        return out

    def fiber_mask(self, y):
        j = self.target._ix(y)
        out = 0
        for i, v in enumerate(self.table):
            if v == j:
                out |= 1 << i
        return out

    def compose(self, other):
        """self after other (other's target must be self's source)."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        table = {other.source.labels[i]:
                 self.target.labels[self.table[other.table[i]]]
                 for i in range(other.source.n)}
        return MonotoneMap(other.source, self.target, table, check=False)

    def is_closed(self):
        """f(lower cone) = lower cone of image, for every element."""
        src, tgt = self.source, self.target
        for p in range(src.n):
            if self.image_mask(src.dn[p]) != tgt.dn[self.table[p]]:
                return False
        return True

    def is_open(self):
        src, tgt = self.source, self.target
        for p in range(src.n):
            if self.image_mask(src.up[p]) != tgt.up[self.table[p]]:
                return False
        return True

    def is_embedding(self):
        src, tgt = self.source, self.target
        if len(set(self.table)) != src.n:
            return False
        for i in range(src.n):
            for j in range(src.n):
                fwd = bool(src.dn[j] >> i & 1)
                back = bool(tgt.dn[self.table[j]] >> self.table[i] & 1)
                if fwd != back:
                    return False
        return True

    def is_full(self):
        """Every point-inverse is a full subposet of the source."""
        for y in range(self.target.n):
            m = 0
            for i, v in enumerate(self.table):
                if v == y:
                    m |= 1 << i
            if m and not SubposetMask(self.source, m).is_full():
                return False
        return True

    def is_isomorphism(self):
        return (self.source.n == self.target.n and self.is_embedding()
                and len(set(self.table)) == self.target.n)

    def inverse(self):
        if not self.is_isomorphism():
            raise ValueError("map is not an isomorphism")
        table = {self.target.labels[self.table[i]]: self.source.labels[i]
                 for i in range(self.source.n)}
        return MonotoneMap(self.target, self.source, table, check=False)

    def dual(self):
        """The same table viewed as a map between the dual posets."""
        table = {self.source.labels[i]: self.target.labels[self.table[i]]
                 for i in range(self.source.n)}
        return MonotoneMap(self.source.dual(), self.target.dual(), table,
                           check=False)

    def preserves_infima(self, subset_limit=16):
        """f(glb S) = glb f(S) for every subset S that has a glb."""
        src, tgt = self.source, self.target
        if src.n <= subset_limit:
            subsets = range(1, 1 << src.n)
            for m in subsets:
                g = src.glb(m)
                if g is None:
                    continue
                img = self.image_mask(m)
                h = tgt.glb(img)
                if h is None or h != self.table[g]:
                    return False
            return True
        for i in range(src.n):
            for j in range(i + 1, src.n):
                g = src.glb((1 << i) | (1 << j))
                if g is None:
                    continue
                h = tgt.glb((1 << self.table[i]) | (1 << self.table[j]))
                if h is None or h != self.table[g]:
                    return False
        return True

    def __eq__(self, other):
        return (isinstance(other, MonotoneMap) and self.source == other.source
                and self.target == other.target and self.table == other.table)

    def __hash__(self):
        return hash((self.source, self.target, self.table))

    def __repr__(self):
        pairs = ", ".join("%s>%s" % (self.source.labels[i],
                                     self.target.labels[self.table[i]])
                          for i in range(min(self.source.n, 8)))
        more = "..." if self.source.n > 8 else ""
        return "MonotoneMap(%s%s)" % (pairs, more)


def mask_bits(mask):
    return list(_bits(mask))
