"""Constructions on finite posets: cones, (pre)joins, products, stars and
links, barycentric and canonical subdivisions, standard complexes, mirroring
and handle decompositions.

All functions are pure; constructed carriers use structured labels rendered
to canonical strings so certificates replay across runs.
"""

from __future__ import annotations

from itertools import combinations

from .core import MonotoneMap, Poset, Preposet, SubposetMask, mask_bits


def fresh_label(taken, base):
    if base not in taken:
        return base
    k = 1
    while "%s_%d" % (base, k) in taken:
        k += 1
    return "%s_%d" % (base, k)


def face_label(vertices):
    """Canonical string for a set of vertex labels ('abc' or 'v1+v2')."""
    vs = sorted(vertices)
    if not vs:
        return "{}"
    if all(len(v) == 1 for v in vs):
        return "".join(vs)
    return "+".join(vs)


def pair_label(a, b):
    return "(%s,%s)" % (a, b)


def split_pair(label):
    """Split '(a,b)' or '[a,b]' at the top-level comma (labels may nest)."""
    inner = label[1:-1]
    depth = 0
    for k, ch in enumerate(inner):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif ch == "," and depth == 0:
            return inner[:k], inner[k + 1:]
    raise ValueError("not a pair label: %r" % (label,))


# ---------------------------------------------------------------------------
# unary constructions


def cone(p: Poset) -> Poset:
    """Adjoin a greatest element."""
    top = fresh_label(set(p.labels), "^1")
    labels = p.labels + (top,)
    covers = set(p.covers)
    ti = len(p.labels)
    for i in mask_bits(p.maximal_mask()):
        covers.add((i, ti))
    return Poset(labels, covers, _trusted=True)


def dual_cone(p: Poset) -> Poset:
    """Adjoin a least element; equals dual(cone(dual(p))) up to labels."""
    bot = fresh_label(set(p.labels), "^0")
    labels = p.labels + (bot,)
    covers = set(p.covers)
    bi = len(p.labels)
    for i in mask_bits(p.minimal_mask()):
        covers.add((bi, i))
    return Poset(labels, covers, _trusted=True)


def prejoin(p: Poset, q: Poset) -> Poset:
    """Everything of p below everything of q, internal orders kept."""
    taken = set(p.labels)
    qlabels = []
    for l in q.labels:
        nl = fresh_label(taken, l)
        taken.add(nl)
        qlabels.append(nl)
    labels = p.labels + tuple(qlabels)
    off = p.n
    covers = set(p.covers)
    covers.update((i + off, j + off) for i, j in q.covers)
    for i in mask_bits(p.maximal_mask()):
        for j in mask_bits(q.minimal_mask()):
            covers.add((i, j + off))
    return Poset(labels, covers, _trusted=True)


def product(p: Poset, q: Poset) -> Poset:
    """Cartesian product with the componentwise order."""
    labels = tuple(pair_label(a, b) for a in p.labels for b in q.labels)
    covers = set()
    # covers of a product: step one coordinate along a cover
    for i, j in p.covers:
        for k in range(q.n):
            covers.add((i * q.n + k, j * q.n + k))
    for k, l in q.covers:
        for i in range(p.n):
            covers.add((i * q.n + k, i * q.n + l))
    return Poset(labels, covers, _trusted=True)


def join(p: Poset, q: Poset) -> Poset:
    """P*Q: the product of dual cones with the bottom removed."""
    cp = dual_cone(p)
    cq = dual_cone(q)
    prod = product(cp, cq)
    bottom = prod._ix(pair_label(cp.labels[-1], cq.labels[-1]))
    keep = prod.full_mask() & ~(1 << bottom)
    sub, _ = prod.induced(keep)
    return sub


def cojoin(p: Poset, q: Poset) -> Poset:
    """Van Kampen dual of the join: (P* * Q*)*."""
    return join(p.dual(), q.dual()).dual()


def star(p: Poset, x) -> SubposetMask:
    """Closure of the open hull of x (a closed subposet)."""
    return p.closure_of(p.up_set(x))


def link(p: Poset, x) -> SubposetMask:
    """Coboundary of the dual cone of x: everything strictly above x."""
    i = p._ix(x)
    return SubposetMask(p, p.up[i] & ~(1 << i))


def chain_label(labels):
    return "{" + "<".join(labels) + "}"


def barycentric(p) -> Poset:
    """Poset of nonempty chains ordered by inclusion.

    Accepts a Poset or a Preposet; for a preposet a chain is a subset that is
    pairwise related by the arrow relation itself.
    """
    if isinstance(p, Preposet):
        n = p.n
        rel = [0] * n
        for i, j in p.arrows:
            rel[i] |= 1 << j
        from .core import transitive_closure
        closed = transitive_closure(p)
        order_dn = closed.dn

        def comparable(i, j):
            return bool(rel[i] >> j & 1) or bool(rel[j] >> i & 1)
    else:
        n = p.n
        order_dn = p.dn

        def comparable(i, j):
            return bool(order_dn[j] >> i & 1) or bool(order_dn[i] >> j & 1)

    labels = p.labels
    chains = []
    # grow chains upward; elements ordered by the closure's down-set size
    topo = sorted(range(n), key=lambda i: (bin(order_dn[i]).count("1"), labels[i]))
    pos = {v: k for k, v in enumerate(topo)}

    def grow(chain):
        chains.append(tuple(chain))
        last = chain[-1]
        for v in topo[pos[last] + 1:]:
            if all(comparable(u, v) for u in chain):
                # keep chains sorted by the underlying order
                if all(order_dn[v] >> u & 1 for u in chain):
                    grow(chain + [v])

    for v in topo:
        grow([v])
    chain_sets = [frozenset(c) for c in chains]
    lab = tuple(chain_label([labels[v] for v in c]) for c in chains)
    idx = {s: i for i, s in enumerate(chain_sets)}
    covers = set()
    for i, c in enumerate(chains):
        s = chain_sets[i]
        for drop in c:
            smaller = s - {drop}
            if smaller:
                covers.add((idx[smaller], i))
    return Poset(lab, covers, _trusted=True)


def interval_label(a, b):
    return "[%s,%s]" % (a, b)


def canonical(p: Poset) -> Poset:
    """The interval poset P#: intervals [a,b] ordered by inclusion."""
    ivals = []
    for a in range(p.n):
        for b in mask_bits(p.up[a]):
            ivals.append((a, b))
    labels = tuple(interval_label(p.labels[a], p.labels[b]) for a, b in ivals)
    idx = {v: i for i, v in enumerate(ivals)}
    pairs = []
    for (a, b) in ivals:
        # raising the bottom along a cover or the top along a cover generates
        # the inclusion order; the closure recovers it, covers get recomputed
        for a2 in p._cov_up_list()[a]:
            if p.dn[b] >> a2 & 1:
                pairs.append((labels[idx[(a2, b)]], labels[idx[(a, b)]]))
        for b2 in p._cov_up_list()[b]:
            pairs.append((labels[idx[(a, b)]], labels[idx[(a, b2)]]))
    from .core import transitive_closure
    return transitive_closure(Preposet(labels, pairs))


def subset_label(vertices):
    return face_label(vertices)


def simplex(vertex_labels) -> Poset:
    """Poset of all nonempty subsets of the vertex set."""
    vs = sorted(str(v) for v in vertex_labels)
    faces = []
    for k in range(1, len(vs) + 1):
        faces.extend(frozenset(c) for c in combinations(vs, k))
    labels = tuple(face_label(f) for f in faces)
    idx = {f: i for i, f in enumerate(faces)}
    covers = set()
    for f in faces:
        for v in f:
            if len(f) > 1:
                covers.add((idx[f - {v}], idx[f]))
    return Poset(labels, covers, _trusted=True)


def powerset(vertex_labels) -> Poset:
    """Poset of all subsets of the vertex set, empty set included."""
    vs = sorted(str(v) for v in vertex_labels)
    faces = [frozenset()]
    for k in range(1, len(vs) + 1):
        faces.extend(frozenset(c) for c in combinations(vs, k))
    labels = tuple(subset_label(f) for f in faces)
    idx = {f: i for i, f in enumerate(faces)}
    covers = set()
    for f in faces:
        for v in f:
            covers.add((idx[f - {v}], idx[f]))
    return Poset(labels, covers, _trusted=True)


def cube(vertex_labels) -> Poset:
    """The cube I^S = (2^S)#."""
    return canonical(powerset(vertex_labels))


def point() -> Poset:
    return Poset(("pt",), set(), _trusted=True)


def empty() -> Poset:
    return Poset((), set(), _trusted=True)


def boundary_poset(p: Poset) -> Poset:
    """Induced poset on the boundary mask."""
    sub, _ = p.induced(p.boundary())
    return sub


# ---------------------------------------------------------------------------
# facet complexes


class FacetComplex:
    """A finite simplicial complex given by its facet list."""

    __slots__ = ("vertices", "facets")

    def __init__(self, facets, vertices=None):
        fs = [frozenset(str(v) for v in f) for f in facets]
        for f in fs:
            if not f:
                raise ValueError("empty facet")
        for a in fs:
            for b in fs:
                if a is not b and a < b:
                    raise ValueError("facet %r contained in %r"
                                     % (sorted(a), sorted(b)))
        if len(set(fs)) != len(fs):
            raise ValueError("duplicate facet")
        self.facets = tuple(sorted(fs, key=lambda f: sorted(f)))
        seen = set().union(*fs) if fs else set()
        if vertices is None:
            self.vertices = tuple(sorted(seen))
        else:
            vs = tuple(str(v) for v in vertices)
            if set(vs) != seen:
                raise ValueError("vertex list does not match facets")
            self.vertices = tuple(sorted(vs))

    def faces(self):
        out = set()
        for f in self.facets:
            items = sorted(f)
            for k in range(1, len(items) + 1):
                out.update(frozenset(c) for c in combinations(items, k))
        return out

    def has_face(self, s):
        s = frozenset(s)
        return any(s <= f for f in self.facets)

    def dim(self):
        return max((len(f) for f in self.facets), default=0) - 1

    def simplicial_link(self, s):
        """All faces t disjoint from s with s|t a face (plus the empty face)."""
        s = frozenset(s)
        out = {frozenset()}
        for f in self.faces():
            if not (f & s) and self.has_face(f | s):
                out.add(f)
        return out

    def face_poset(self) -> Poset:
        faces = sorted(self.faces(), key=lambda f: (len(f), sorted(f)))
        labels = tuple(face_label(f) for f in faces)
        idx = {f: i for i, f in enumerate(faces)}
        covers = set()
        for f in faces:
            if len(f) > 1:
                for v in f:
                    covers.add((idx[f - {v}], idx[f]))
        return Poset(labels, covers, _trusted=True)

    def __eq__(self, other):
        return isinstance(other, FacetComplex) and self.facets == other.facets

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        return "FacetComplex(%s)" % ([sorted(f) for f in self.facets],)


# ---------------------------------------------------------------------------
# mirroring


def mirror(k: FacetComplex) -> Poset:
    """Cubical complex whose every vertex link is the input complex.

    Realized inside the n-cube as the preimage of C*K under the n-fold
    product of the folding map [lo,hi] -> hi minus lo.
    """
    n = len(k.vertices)
    vs = list(k.vertices)
    faces = k.faces()
    elems = []
    # intervals [S,T] of 2^[n] with T\S a face of K or empty
    universe = list(range(n))

    def subsets(items):
        for r in range(len(items) + 1):
            yield from combinations(items, r)

    for s in subsets(universe):
        s = frozenset(s)
        rest = [v for v in universe if v not in s]
        for t_extra in subsets(rest):
            t = s | frozenset(t_extra)
            diff = frozenset(vs[i] for i in (t - s))
            if not diff or diff in faces:
                elems.append((s, t))
    elems.sort(key=lambda st: (sorted(st[0]), sorted(st[1])))
    idx = {e: i for i, e in enumerate(elems)}

    def lab(st):
        s, t = st
        return interval_label(subset_label(str(i) for i in s),
                              subset_label(str(i) for i in t))

    labels = tuple(lab(e) for e in elems)
    covers = set()
    for (s, t) in elems:
        # going up in interval inclusion: shrink S by one or grow T by one;
        # Q is closed in the cube, so ambient covers restrict
        for v in s:
            other = (s - {v}, t)
            if other in idx:
                covers.add((idx[(s, t)], idx[other]))
        for v in universe:
            if v not in t:
                other = (s, t | {v})
                if other in idx:
                    covers.add((idx[(s, t)], idx[other]))
    return Poset(labels, covers, _trusted=True)


def mirror_vertices(q: Poset):
    """Labels of the mirror construction's vertices [S,S]."""
    out = []
    for lab in q.labels:
        inner = lab[1:-1]
        a, b = inner.split(",", 1)
        if a == b:
            out.append(lab)
    return out


# ---------------------------------------------------------------------------
# handles


def handles(p: Poset) -> Poset:
    """h(X) = dual of the canonical subdivision."""
    return canonical(p).dual()


def barycentric_handles(p: Poset) -> Poset:
    """H(P) = dual of the barycentric subdivision."""
    return barycentric(p).dual()


def _interval_parts(label):
    return split_pair(label)


def handle_core_map(p: Poset) -> MonotoneMap:
    """r_X: h(X) -> X, sending [a,b]* to a."""
    h = handles(p)
    table = {lab: _interval_parts(lab)[0] for lab in h.labels}
    return MonotoneMap(h, p, table)


def handle_cocore_map(p: Poset) -> MonotoneMap:
    """r̄_X: h(X) -> X*, sending [a,b]* to b."""
    h = handles(p)
    table = {lab: _interval_parts(lab)[1] for lab in h.labels}
    return MonotoneMap(h, p.dual(), table)
