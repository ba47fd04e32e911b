"""Adjunction preposets, quotients, amalgams, the mapping-cylinder family,
pullbacks, Hatcher maps, homotopy colimits and Homma factorization.

Adjunction-style constructions return the generated relation verbatim as a
Preposet (so "is it already a partial order" is a meaningful question about
the construction, per the mapping-cylinder criterion); quotient-style
helpers take the transitive closure where the result is known to be a poset.
"""

from __future__ import annotations

from .core import (CycleError, MonotoneMap, Poset, Preposet, SubposetMask,
                   mask_bits, transitive_closure)
from .ops import fresh_label, pair_label, simplex, split_pair


class AdjunctionDatum:
    """Ambient poset P, a subposet mask A, and an attaching map f: A -> Q.

    The attaching map's source must be the induced subposet of the mask.
    """

    __slots__ = ("ambient", "domain_mask", "attaching")

    def __init__(self, ambient: Poset, domain_mask: SubposetMask,
                 attaching: MonotoneMap):
        if domain_mask.parent is not ambient:
            raise ValueError("mask does not live in the ambient poset")
        sub, _ = ambient.induced(domain_mask.mask)
        if (attaching.source.labels != sub.labels
                or attaching.source.covers != sub.covers):
            raise ValueError("attaching map source is not the induced subposet")
        self.ambient = ambient
        self.domain_mask = domain_mask
        self.attaching = attaching


def adjunction(d: AdjunctionDatum) -> Preposet:
    """The adjunction preposet P ∪_f Q.

    Classes are related when some representatives are; a class containing a
    Q element is named after it, pure-P classes keep their P label (with a
    disambiguating suffix on collision).
    """
    p, q = d.ambient, d.attaching.target
    sub_labels = d.attaching.source.labels
    glued = {}
    for k, lab in enumerate(sub_labels):
        glued[p._ix(lab)] = d.attaching.table[k]
    taken = set()
    qname = {}
    pname = {}
    for j, lab in enumerate(q.labels):
        nl = fresh_label(taken, lab)
        taken.add(nl)
        qname[j] = nl
    for i, lab in enumerate(p.labels):
        if i in glued:
            pname[i] = qname[glued[i]]
        else:
            nl = fresh_label(taken, lab)
            taken.add(nl)
            pname[i] = nl
    labels = tuple(qname[j] for j in range(q.n)) + tuple(
        pname[i] for i in range(p.n) if i not in glued)
    arrows = set()
    for j in range(q.n):
        for j2 in mask_bits(q.up[j] & ~(1 << j)):
            arrows.add((qname[j], qname[j2]))
    for i in range(p.n):
        for i2 in mask_bits(p.up[i] & ~(1 << i)):
            if pname[i] != pname[i2]:
                arrows.add((pname[i], pname[i2]))
    try:
        return Preposet(labels, arrows)
    except CycleError as e:
        raise CycleError(e.cycle) from None


def quotient(p: Poset, m: SubposetMask) -> Poset:
    """P/Q: adjunction with the constant map to a point, then closed.

    The merged class takes the least label of its members; quotient by the
    empty mask adds a disjoint fresh point.
    """
    if m.mask == 0:
        labels = p.labels + (fresh_label(set(p.labels), "pt"),)
        return Poset(labels, p.covers, _trusted=True)
    sub, _ = p.induced(m.mask)
    cls = min(sub.labels)
    pt = Poset((cls,), set(), _trusted=True)
    f = MonotoneMap(sub, pt, {l: cls for l in sub.labels}, check=False)
    pre = adjunction(AdjunctionDatum(p, m, f))
    return transitive_closure(pre)


def amalgam(p: Poset, q: Poset, a: SubposetMask, b: SubposetMask,
            h: MonotoneMap) -> Preposet:
    """P ∪_h Q along an isomorphism h between subposet masks a and b."""
    if a.parent is not p or b.parent is not q:
        raise ValueError("masks must live in the amalgam's factors")
    if not h.is_isomorphism():
        raise ValueError("gluing map is not an isomorphism")
    suba, _ = p.induced(a.mask)
    subb, _ = q.induced(b.mask)
    if h.source.labels != suba.labels or h.target.labels != subb.labels:
        raise ValueError("gluing map does not match the masks")
    inc = MonotoneMap(subb, q, {l: l for l in subb.labels}, check=False)
    jh = inc.compose(h)
    return adjunction(AdjunctionDatum(p, a, jh))


# ---------------------------------------------------------------------------
# mapping cylinders


def mc(f: MonotoneMap) -> Preposet:
    """Mapping cylinder MC(f) = P x [2] ∪_{f1} Q.

    The relation is generated exactly as in the pushout: the free copy of p
    sits above q iff some p' <= p maps to q.  It is already a partial order
    iff f is closed.
    """
    p, q = f.source, f.target
    taken = set(q.labels)
    top = []
    for l in p.labels:
        nl = fresh_label(taken, l)
        taken.add(nl)
        top.append(nl)
    arrows = set()
    for j in range(q.n):
        for j2 in mask_bits(q.up[j] & ~(1 << j)):
            arrows.add((q.labels[j], q.labels[j2]))
    for i in range(p.n):
        for i2 in mask_bits(p.up[i] & ~(1 << i)):
            arrows.add((top[i], top[i2]))
    for i in range(p.n):
        for ip in mask_bits(p.dn[i]):
            arrows.add((q.labels[f.table[ip]], top[i]))
    return Preposet(q.labels + tuple(top), arrows)


def mc_star(f: MonotoneMap) -> Preposet:
    """Dual mapping cylinder MC*(f) = (MC(f*))*; a partial order iff f is open."""
    dual_pre = mc(f.dual())
    rev = {(b, a) for a, b in dual_pre.arrow_labels()}
    return Preposet(dual_pre.labels, rev)


def mc_poset(f: MonotoneMap) -> Poset:
    """Transitive closure of MC(f) (the poset when f is closed)."""
    return transitive_closure(mc(f))


def lmc(f: MonotoneMap) -> Preposet:
    """Long mapping cylinder: MC(f) with a second cylinder attached along
    the free copy of P, hanging an outer copy below it.

    Carrier Q ⊔ P(mid) ⊔ P(outer) with q <= mid[p] iff some p' <= p maps to
    q, outer[p] <= mid[p'] iff p <= p', and Q, P(outer) incomparable.
    """
    p, q = f.source, f.target
    taken = set(q.labels)
    mid, outer = [], []
    for l in p.labels:
        nl = fresh_label(taken, l)
        taken.add(nl)
        mid.append(nl)
    for l in p.labels:
        nl = fresh_label(taken, l + "^")
        taken.add(nl)
        outer.append(nl)
    arrows = set()
    for j in range(q.n):
        for j2 in mask_bits(q.up[j] & ~(1 << j)):
            arrows.add((q.labels[j], q.labels[j2]))
    for i in range(p.n):
        for i2 in mask_bits(p.up[i] & ~(1 << i)):
            arrows.add((mid[i], mid[i2]))
            arrows.add((outer[i], outer[i2]))
    for i in range(p.n):
        for ip in mask_bits(p.dn[i]):
            arrows.add((q.labels[f.table[ip]], mid[i]))
            arrows.add((outer[ip], mid[i]))
    return Preposet(q.labels + tuple(mid) + tuple(outer), arrows)


def iterated_mc(maps) -> Preposet:
    """MC(P_n -> ... -> P_0): the homotopy colimit over the chain [n].

    ``maps`` lists f_n, ..., f_1 with f_i: P_i -> P_{i-1}; the result is a
    poset whenever all maps are closed.
    """
    maps = list(maps)
    if not maps:
        raise ValueError("need at least one map")
    n = len(maps)
    chain_labels = [str(i) for i in range(n + 1)]
    index = Poset.from_covers(chain_labels,
                              list(zip(chain_labels, chain_labels[1:])))
    nodes = {}
    nodes[chain_labels[n]] = maps[0].source
    for k, f in enumerate(maps):
        nodes[chain_labels[n - 1 - k]] = f.target
    edges = {}
    for hi in range(n, 0, -1):
        f = maps[n - hi]  # map P_hi -> P_{hi-1}
        edges[(chain_labels[hi], chain_labels[hi - 1])] = f
        for lo in range(hi - 2, -1, -1):
            g = maps[n - lo - 1]
            edges[(chain_labels[hi], chain_labels[lo])] = g.compose(
                edges[(chain_labels[hi], chain_labels[lo + 1])])
    dia = DiagramOverPoset(index, nodes, edges, "covariant")
    return hocolim(dia)


def graph_closure_mask(f: MonotoneMap, prod: Poset):
    """Mask of the closure of the graph of f inside source x target."""
    q = f.target
    m = 0
    for i in range(f.source.n):
        m |= 1 << prod._ix(pair_label(f.source.labels[i],
                                      q.labels[f.table[i]]))
    out = 0
    for i in mask_bits(m):
        out |= prod.dn[i]
    return out


def tmc(f: MonotoneMap) -> Poset:
    """Thick mapping cylinder, realized as a closed subposet of P * Q.

    Carrier: P as (p,^0), Q as (^0,q), and the closure R of the graph of f
    in P x Q; always a poset.
    """
    from .ops import dual_cone, product
    p, q = f.source, f.target
    cp = dual_cone(p)
    cq = dual_cone(q)
    prod = product(cp, cq)
    bot_p = cp.labels[-1]
    bot_q = cq.labels[-1]
    keep = 0
    for l in p.labels:
        keep |= 1 << prod._ix(pair_label(l, bot_q))
    for l in q.labels:
        keep |= 1 << prod._ix(pair_label(bot_p, l))
    pq = product(p, q)
    rmask = graph_closure_mask(f, pq)
    for i in mask_bits(rmask):
        keep |= 1 << prod._ix(pq.labels[i])
    sub, _ = prod.induced(keep)
    return sub


def tmc_parts(f: MonotoneMap):
    """The TMC poset with masks for its P, Q and graph-closure parts."""
    from .ops import dual_cone
    p, q = f.source, f.target
    t = tmc(f)
    bot_p = dual_cone(p).labels[-1]
    bot_q = dual_cone(q).labels[-1]
    pmask = 0
    for l in p.labels:
        pmask |= 1 << t._ix(pair_label(l, bot_q))
    qmask = 0
    for l in q.labels:
        qmask |= 1 << t._ix(pair_label(bot_p, l))
    rmask = t.full_mask() & ~pmask & ~qmask
    return t, pmask, qmask, rmask


def lmc_embedding(f: MonotoneMap):
    """The long cylinder and its embedding into TMC(f).

    Q embeds as (^0,q), the middle copy of P as the graph (p,f(p)), the
    outer copy as (p,^0).
    """
    from .ops import dual_cone
    p, q = f.source, f.target
    t = tmc(f)
    lposet = transitive_closure(lmc(f))
    bot_p = dual_cone(p).labels[-1]
    bot_q = dual_cone(q).labels[-1]
    table = {}
    for j, lab in enumerate(lposet.labels):
        if j < q.n:
            table[lab] = pair_label(bot_p, lab)
        elif j < q.n + p.n:
            src = p.labels[j - q.n]
            table[lab] = pair_label(src, q.labels[f.table[j - q.n]])
        else:
            table[lab] = pair_label(p.labels[j - q.n - p.n], bot_q)
    return lposet, MonotoneMap(lposet, t, table)


def tmc_retraction(f: MonotoneMap):
    """Strong deformation retraction of TMC(f) onto the long cylinder.

    Returns (tmc_poset, lmc_poset, r, h): r maps TMC(f) onto LMC(f) (Q and
    the outer copy of P stay put, a graph-closure element (p,q) goes to the
    middle copy at p) and h: TMC(f) x I -> TMC(f) is the monotone homotopy
    over the 1-simplex I = {0,1,01}; slice 0 is the identity, slice 1 is r
    followed by the embedding, and the top slice is the least-upper-bound
    displacement (p,q) -> (p, lub(q, f(p))).
    """
    from .ops import product
    p, q = f.source, f.target
    if not q.is_conditionally_complete():
        raise ValueError("target is not conditionally complete")
    t, pmask, qmask, rmask = tmc_parts(f)
    lposet, emb = lmc_embedding(f)
    emb_inv = {t.labels[emb.table[k]]: lposet.labels[k]
               for k in range(lposet.n)}

    rtab = {}
    for i in range(t.n):
        lab = t.labels[i]
        if (pmask >> i & 1) or (qmask >> i & 1):
            rtab[lab] = emb_inv[lab]
        else:
            a, _ = split_pair(lab)
            rtab[lab] = emb_inv[pair_label(a, q.labels[f.table[p._ix(a)]])]
    r = MonotoneMap(t, lposet, rtab)

    gtab = {}
    for i in range(t.n):
        lab = t.labels[i]
        if (pmask >> i & 1) or (qmask >> i & 1):
            gtab[lab] = lab
        else:
            a, b = split_pair(lab)
            y = q.lub((1 << q._ix(b)) | (1 << f.table[p._ix(a)]))
            if y is None:
                raise AssertionError("missing least upper bound in target")
            gtab[lab] = pair_label(a, q.labels[y])
    ival = simplex("01")
    ti = product(t, ival)
    htab = {}
    for i in range(t.n):
        lab = t.labels[i]
        htab[pair_label(lab, "0")] = lab
        htab[pair_label(lab, "1")] = t.labels[emb.table[lposet._ix(rtab[lab])]]
        htab[pair_label(lab, "01")] = gtab[lab]
    h = MonotoneMap(ti, t, htab)
    return t, lposet, r, h


def pullback(f: MonotoneMap, g: MonotoneMap):
    """Pullback of f: P -> Q and g: Q' -> Q with its two projections."""
    if f.target != g.target:
        raise ValueError("maps must share a target")
    from .ops import product
    p, q2 = f.source, g.source
    prod = product(p, q2)
    keep = 0
    for i in range(p.n):
        for j in range(q2.n):
            if f.table[i] == g.table[j]:
                keep |= 1 << prod._ix(pair_label(p.labels[i], q2.labels[j]))
    sub, _ = prod.induced(keep)
    proj_p = MonotoneMap(sub, p, {l: split_pair(l)[0] for l in sub.labels})
    proj_q2 = MonotoneMap(sub, q2, {l: split_pair(l)[1] for l in sub.labels})
    return sub, proj_p, proj_q2


# ---------------------------------------------------------------------------
# Hatcher maps, homotopy colimits, Homma factorization


def hatcher_map(f: MonotoneMap, r, q) -> MonotoneMap:
    """The induced map between fibers F_r -> F_q of a full map, for r > q."""
    tgt = f.target
    ri, qi = tgt._ix(r), tgt._ix(q)
    if ri == qi or not (tgt.dn[ri] >> qi & 1):
        raise ValueError("need r > q in the target")
    if not f.is_full():
        raise ValueError("map is not full")
    src = f.source
    fr = f.fiber_mask(tgt.labels[ri])
    fq = f.fiber_mask(tgt.labels[qi])
    sub_r, keep_r = src.induced(fr)
    sub_q, keep_q = src.induced(fq)
    pos_q = {v: k for k, v in enumerate(keep_q)}
    table = {}
    for k, v in enumerate(keep_r):
        m = src.dn[v] & fq
        if m == 0:
            raise ValueError(
                "fiber of %r not reachable below %r; Hatcher map undefined"
                % (q, src.labels[v]))
        apex = None
        for c in mask_bits(m):
            if m & ~src.dn[c] == 0:
                apex = c
                break
        if apex is None:
            raise AssertionError("full map fiber intersection not a cone")
        table[sub_r.labels[k]] = sub_q.labels[pos_q[apex]]
    return MonotoneMap(sub_r, sub_q, table)


class DiagramOverPoset:
    """A commutative diagram of posets indexed by a poset.

    ``edges[(a, b)]`` is the map node[a] -> node[b]; covariant diagrams carry
    an edge for every a > b, contravariant ones for every a < b.
    Functoriality is validated eagerly: the composite along any chain must
    equal the stored long edge (witness triple reported otherwise).
    """

    __slots__ = ("index", "nodes", "edges", "variance")

    def __init__(self, index: Poset, nodes, edges, variance="covariant"):
        if variance not in ("covariant", "contravariant"):
            raise ValueError("variance must be covariant or contravariant")
        self.index = index
        self.nodes = dict(nodes)
        self.edges = dict(edges)
        self.variance = variance
        self._validate()

    def _validate(self):
        idx = self.index
        for lab in idx.labels:
            if lab not in self.nodes:
                raise ValueError("missing node for index %r" % (lab,))
        for a in range(idx.n):
            for b in mask_bits(idx.dn[a] & ~(1 << a)):
                if self.variance == "covariant":
                    key = (idx.labels[a], idx.labels[b])
                else:
                    key = (idx.labels[b], idx.labels[a])
                if key not in self.edges:
                    raise ValueError("missing edge map %r -> %r" % key)
                e = self.edges[key]
                if e.source != self.nodes[key[0]] or e.target != self.nodes[key[1]]:
                    raise ValueError("edge %r -> %r has wrong endpoints" % key)
        for a in range(idx.n):
            for b in mask_bits(idx.dn[a] & ~(1 << a)):
                for c in mask_bits(idx.dn[b] & ~(1 << b)):
                    la, lb, lc = idx.labels[a], idx.labels[b], idx.labels[c]
                    if self.variance == "covariant":
                        left = self.edges[(lb, lc)].compose(self.edges[(la, lb)])
                        long = self.edges[(la, lc)]
                    else:
                        left = self.edges[(lb, la)].compose(self.edges[(lc, lb)])
                        long = self.edges[(lc, la)]
                    if left.table != long.table:
                        raise ValueError(
                            "diagram does not commute along (%r, %r, %r)"
                            % (la, lb, lc))


def hocolim(d: DiagramOverPoset) -> Preposet:
    """Homotopy colimit preposet over the index poset (exact relation)."""
    idx = d.index
    labels = []
    name = {}
    taken = set()
    for lam in idx.labels:
        for x in d.nodes[lam].labels:
            nl = fresh_label(taken, "%s:%s" % (lam, x))
            taken.add(nl)
            name[(lam, x)] = nl
            labels.append(nl)
    arrows = set()
    for lam in idx.labels:
        node = d.nodes[lam]
        for i in range(node.n):
            for i2 in mask_bits(node.up[i] & ~(1 << i)):
                arrows.add((name[(lam, node.labels[i])],
                            name[(lam, node.labels[i2])]))
    for a in range(idx.n):
        for b in mask_bits(idx.dn[a] & ~(1 << a)):
            lam, mu = idx.labels[a], idx.labels[b]  # lam > mu
            pl, pm = d.nodes[lam], d.nodes[mu]
            if d.variance == "covariant":
                e = d.edges[(lam, mu)]
                for i in range(pl.n):
                    for ip in mask_bits(pl.dn[i]):
                        qlab = pm.labels[e.table[ip]]
                        arrows.add((name[(mu, qlab)],
                                    name[(lam, pl.labels[i])]))
            else:
                e = d.edges[(mu, lam)]
                for j in range(pm.n):
                    for jp in mask_bits(pm.up[j]):
                        plab = pl.labels[e.table[jp]]
                        arrows.add((name[(mu, pm.labels[j])],
                                    name[(lam, plab)]))
    return Preposet(tuple(labels), arrows)


def fiber_diagram(f: MonotoneMap) -> DiagramOverPoset:
    """Covariant diagram of fibers and Hatcher maps over the target."""
    tgt = f.target
    nodes = {}
    for y in tgt.labels:
        sub, _ = f.source.induced(f.fiber_mask(y))
        nodes[y] = sub
    edges = {}
    for a in range(tgt.n):
        for b in mask_bits(tgt.dn[a] & ~(1 << a)):
            la, lb = tgt.labels[a], tgt.labels[b]
            edges[(la, lb)] = hatcher_map(f, la, lb)
    return DiagramOverPoset(tgt, nodes, edges, "covariant")


def hocolim_reconstruct(f: MonotoneMap):
    """Rebuild the source of a full map from its fiber diagram.

    Returns (poset, witness) where the witness is an isomorphism onto the
    source; requires a nonsingular source (e.g. any simplicial map).
    """
    d = fiber_diagram(f)
    pre = hocolim(d)
    rebuilt = transitive_closure(pre)
    table = {}
    for lab in rebuilt.labels:
        _, x = lab.split(":", 1)
        table[lab] = x
    w = MonotoneMap(rebuilt, f.source, table)
    if not w.is_isomorphism():
        raise AssertionError("hocolim reconstruction is not an isomorphism")
    return rebuilt, w


def homma_factorization(f: MonotoneMap):
    """Factor a full map with nonsingular source into full maps with at most
    one non-degenerate point-inverse each; one factor per target element.

    Stage i collapses the fiber over the i-th element of the canonical
    linear extension; the factors compose to f on the nose.
    """
    tgt = f.target
    order = tgt.linear_extension()
    d = fiber_diagram(f)
    if tgt.n == 0:
        return []

    def stage_poset(i):
        collapsed = set(order[:i])
        nodes = {}
        edges = {}
        for y in tgt.labels:
            if y in collapsed:
                nodes[y] = Poset(("*",), set(), _trusted=True)
            else:
                nodes[y] = d.nodes[y]
        for a in range(tgt.n):
            for b in mask_bits(tgt.dn[a] & ~(1 << a)):
                la, lb = tgt.labels[a], tgt.labels[b]
                if lb in collapsed:
                    edges[(la, lb)] = MonotoneMap(
                        nodes[la], nodes[lb],
                        {x: "*" for x in nodes[la].labels}, check=False)
                else:
                    # the linear extension refines the order, so whenever la
                    # is collapsed, lb already is; this branch has el > both
                    edges[(la, lb)] = d.edges[(la, lb)]
        dia = DiagramOverPoset(tgt, nodes, edges, "covariant")
        return transitive_closure(hocolim(dia))

    stages = [stage_poset(i) for i in range(tgt.n)]

    def stage_name(i, x):
        """Name of source element x inside stage i."""
        y = tgt.labels[f.table[f.source._ix(x)]]
        if y in set(order[:i]):
            return "%s:*" % y
        return "%s:%s" % (y, x)

    maps = []
    for i in range(tgt.n):
        yi = order[i]
        target_stage = stages[i + 1] if i + 1 < tgt.n else tgt
        if i == 0:
            source_stage = f.source
            src_labels = f.source.labels
        else:
            source_stage = stages[i]
            src_labels = stages[i].labels
        table = {}
        for lab in src_labels:
            if i == 0:
                y = tgt.labels[f.table[f.source._ix(lab)]]
                cur = "%s:%s" % (y, lab)
            else:
                cur = lab
            y, x = cur.split(":", 1)
            nxt = "%s:*" % y if (y == yi or x == "*") else cur
            if i + 1 == tgt.n:
                table[lab] = y
            else:
                table[lab] = nxt
        maps.append(MonotoneMap(source_stage, target_stage, table))
    return maps
