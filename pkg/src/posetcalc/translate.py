"""Constructive translations between certificate kinds.

* construction tree for the dual  ->  zip sequence onto a singleton,
  via the scheme-poset bookkeeping of the constructibility-to-zipping proof;
* edge-zipping of a simplicial complex  ->  zip sequence of face posets,
  through the intermediate adjunction stages;
* poset collapse  ->  simplicial collapse of the barycentric subdivision.
"""

from __future__ import annotations

from .certificates import (CollapseSequence, ConstructionTree, EdgeZipStep,
                           ZipStep, apply_zip, verify_construction)
from .core import Poset, mask_bits
from .ops import FacetComplex
from .verdict import Verdict


class SchemeInvariantError(RuntimeError):
    """A scheme-poset invariant failed during zip extraction.

    Indicates a bug or an unsatisfied sphere hypothesis; the failing cell,
    when known, is carried in .cell.
    """

    def __init__(self, message, cell=None):
        self.cell = cell
        super().__init__(message)


class SchemeNode:
    """singleton leaf | (plus ⊔ minus) + core, mutable for quotient steps."""

    __slots__ = ("leaf", "plus", "minus", "core")

    def __init__(self, leaf=None, plus=None, minus=None, core=None):
        self.leaf = leaf
        self.plus = plus
        self.minus = minus
        self.core = core

    @property
    def is_leaf(self):
        return self.leaf is not None

    def leaves(self):
        if self.is_leaf:
            return [self.leaf]
        return self.plus.leaves() + self.minus.leaves() + self.core.leaves()

    def atoms(self):
        """Leaves at the bottom of the prejoin tower."""
        if self.is_leaf:
            return [self.leaf]
        return self.plus.atoms() + self.minus.atoms()

    def order_pairs(self):
        """Strict order pairs of the scheme poset (leaf-id pairs)."""
        if self.is_leaf:
            return []
        pairs = (self.plus.order_pairs() + self.minus.order_pairs()
                 + self.core.order_pairs())
        below = self.plus.leaves() + self.minus.leaves()
        for a in below:
            for b in self.core.leaves():
                pairs.append((a, b))
        return pairs


class SchemePoset:
    """A construction scheme: the shape tree plus the map element -> leaf.

    Every point-inverse of the map must be a dual cone (have a least
    element) in the complex-side poset; validation replays that, the
    monotonicity of the map, and the covering-witness condition.
    """

    def __init__(self, root: SchemeNode, assignment):
        self.root = root
        self.assignment = dict(assignment)

    def fiber_labels(self, leaf):
        return [x for x, l in self.assignment.items() if l == leaf]

    def validate(self, k: Poset):
        leaves = set(self.root.leaves())
        if set(self.assignment) != set(k.labels):
            raise SchemeInvariantError("scheme map is not total")
        if set(self.assignment.values()) - leaves:
            raise SchemeInvariantError("scheme map hits a missing leaf")
        mins = {}
        for leaf in leaves:
            fiber = self.fiber_labels(leaf)
            if not fiber:
                raise SchemeInvariantError("empty scheme fiber")
            mins[leaf] = self._least(k, fiber, leaf)
        order = set(self.root.order_pairs())
        for x in range(k.n):
            for y in mask_bits(k.dn[x] & ~(1 << x)):
                # y < x in K must give s(y) <= s(x); deeper intersection
                # parts of the construction sit higher in both K and S
                lx = self.assignment[k.labels[x]]
                ly = self.assignment[k.labels[y]]
                if lx != ly and (ly, lx) not in order:
                    raise SchemeInvariantError(
                        "scheme map not monotone at (%r, %r)"
                        % (k.labels[y], k.labels[x]))
        self._validate_witnesses(k, mins)
        return mins

    def _least(self, k, fiber, leaf):
        idxs = [k._ix(x) for x in fiber]
        m = 0
        for i in idxs:
            m |= 1 << i
        for i in idxs:
            if m & ~k.up[i] == 0:
                return k.labels[i]
        raise SchemeInvariantError(
            "scheme fiber %r is not a dual cone" % (sorted(fiber),))

    def _validate_witnesses(self, k, mins):
        aplus, aminus = {}, {}

        def assign(node):
            if node.is_leaf:
                return
            for leaf in node.core.atoms():
                aplus[leaf] = node.plus.atoms()
                aminus[leaf] = node.minus.atoms()
            assign(node.plus)
            assign(node.minus)
            assign(node.core)

        assign(self.root)
        atom_set = set(self.root.atoms())
        for leaf in self.root.leaves():
            if leaf in atom_set:
                continue
            if leaf not in aplus:
                raise SchemeInvariantError("non-atom leaf missing witnesses")
            x = k._ix(mins[leaf])
            cov = set(k._cov_dn_list()[x])
            ok_plus = any(k._ix(mins[l]) in cov for l in aplus[leaf])
            ok_minus = any(k._ix(mins[l]) in cov for l in aminus[leaf])
            if not (ok_plus and ok_minus):
                raise SchemeInvariantError(
                    "covering-witness condition fails at fiber of %r"
                    % (mins[leaf],))


def _build_scheme(kd: Poset, tree: ConstructionTree, state, counter):
    """Scheme node and assignment for a construction tree of the dual."""
    if tree.kind == "cone":
        leaf = counter[0]
        counter[0] += 1
        node = SchemeNode(leaf=leaf)
        return node, {kd.labels[i]: leaf for i in mask_bits(state)}
    qm = kd._mask_of(tree.q_max)
    rm = kd._mask_of(tree.r_max)
    qmask = 0
    for i in mask_bits(qm):
        qmask |= kd.dn[i]
    rmask = 0
    for i in mask_bits(rm):
        rmask |= kd.dn[i]
    qmask &= state
    rmask &= state
    inter = qmask & rmask
    nq, aq = _build_scheme(kd, tree.q, qmask, counter)
    nr, ar = _build_scheme(kd, tree.r, rmask, counter)
    nc, ac = _build_scheme(kd, tree.qr, inter, counter)
    assignment = {}
    for i in mask_bits(qmask & ~inter):
        assignment[kd.labels[i]] = aq[kd.labels[i]]
    for i in mask_bits(rmask & ~inter):
        assignment[kd.labels[i]] = ar[kd.labels[i]]
    for i in mask_bits(inter):
        assignment[kd.labels[i]] = ac[kd.labels[i]]
    return SchemeNode(plus=nq, minus=nr, core=nc), assignment


def _find_ladder(root: SchemeNode):
    """Walk to the zip site: descend principal subschemes to a both-cones
    split, then repeat inside its core, until the core is a leaf.

    Returns (node, parent, which) for the final (leaf ⊔ leaf)+leaf node.
    """
    parent, which = None, None
    cur = root
    while True:
        while not (cur.plus.is_leaf and cur.minus.is_leaf):
            parent, which = cur, ("plus" if not cur.plus.is_leaf else "minus")
            cur = getattr(cur, which)
        if cur.core.is_leaf:
            return cur, parent, which
        parent, which = cur, "core"
        cur = cur.core


def zipping_from_construction(k: Poset, tree: ConstructionTree,
                              allow_assumed_spheres=True):
    """Emit the zip sequence of the constructibility-to-zipping proof.

    Returns (steps, assumed_spheres): the zip steps reaching a singleton,
    plus the cells whose sphere hypothesis was undecidable and therefore
    assumed (recorded in the certificate).
    """
    from .recognize import is_cell_complex, is_sphere
    kd = k.dual()
    ok, why = verify_construction(kd, tree)
    if not ok:
        raise ValueError("construction tree does not verify: %s" % (why,))
    cell = is_cell_complex(k)
    if cell.is_no:
        raise ValueError("not a cell complex: %r" % (cell.witness,))
    counter = [0]
    root, assignment = _build_scheme(kd, tree, kd.full_mask(), counter)
    scheme = SchemePoset(root, assignment)
    current = k
    steps = []
    assumed = []
    while True:
        mins = scheme.validate(current)
        if scheme.root.is_leaf:
            break
        node, parent, which = _find_ladder(scheme.root)
        q_lab = mins[node.plus.leaf]
        r_lab = mins[node.minus.leaf]
        p_lab = mins[node.core.leaf]
        bd_mask = current.dn[current._ix(p_lab)] & ~(1 << current._ix(p_lab))
        bd, _ = current.induced(bd_mask)
        sv = is_sphere(bd)
        if sv.is_no:
            raise SchemeInvariantError(
                "cell boundary of %r is not a sphere" % (p_lab,), cell=p_lab)
        if sv.is_unknown:
            if not allow_assumed_spheres:
                raise SchemeInvariantError(
                    "cell boundary of %r undecided" % (p_lab,), cell=p_lab)
            assumed.append(p_lab)
        step = ZipStep(p_lab, q_lab, r_lab)
        try:
            nxt = apply_zip(current, step)
        except ValueError as e:
            raise SchemeInvariantError(
                "emitted zip step invalid at %r: %s" % (p_lab, e),
                cell=p_lab) from None
        merged = min(p_lab, q_lab, r_lab)
        old_leaves = {node.plus.leaf, node.minus.leaf, node.core.leaf}
        fresh = counter[0]
        counter[0] += 1
        replacement = SchemeNode(leaf=fresh)
        if parent is None:
            scheme.root = replacement
        else:
            setattr(parent, which, replacement)
        new_assignment = {}
        for lab in nxt.labels:
            src = lab if lab != merged else p_lab
            leaf = scheme.assignment[src]
            new_assignment[lab] = fresh if leaf in old_leaves else leaf
        scheme.assignment = new_assignment
        steps.append(step)
        current = nxt
    if current.least() is None:
        raise SchemeInvariantError("scheme exhausted away from a dual cone")
    if cell.is_yes and current.n != 1:
        raise SchemeInvariantError(
            "cell complex should zip to a singleton, ended at %d elements"
            % current.n)
    return steps, assumed


# ---------------------------------------------------------------------------
# edge zipping to zipping


def _face_key(face):
    return frozenset(str(v) for v in face)


def zipping_from_edge_zipping(k: FacetComplex, steps):
    """Translate elementary edge-zippings into elementary poset zips.

    Each contraction of an edge v*w becomes 1 + |link simplices| zips: first
    the edge's own triple, then one triple per link simplex in order of
    increasing dimension, walking through the adjunction stages of the
    corresponding proof.
    """
    from .certificates import is_elementary_edge_zip, edge_contract
    from .ops import face_label
    current = k.face_poset()
    phi = {f: face_label(f) for f in k.faces()}
    complex_now = k
    out = []

    def zap(step):
        nonlocal current
        merged = min(step.p, step.q, step.r)
        current = apply_zip(current, step)
        drop = {step.p, step.q, step.r}
        for f, lab in list(phi.items()):
            if lab in drop:
                phi[f] = merged
        out.append(step)

    for ez in steps:
        v, w = str(ez.v), str(ez.w)
        if not is_elementary_edge_zip(complex_now, v, w):
            raise ValueError("(%s,%s) is not an elementary edge-zipping"
                             % (v, w))
        links = sorted((f for f in complex_now.simplicial_link([v, w]) if f),
                       key=lambda f: (len(f), sorted(f)))
        zap(ZipStep(phi[_face_key({v, w})],
                    phi[_face_key({v})], phi[_face_key({w})]))
        for a in links:
            zap(ZipStep(phi[_face_key(a | {v, w})],
                        phi[_face_key(a | {v})], phi[_face_key(a | {w})]))
        contracted = edge_contract(complex_now, v, w)
        new_phi = {}
        for f in contracted.faces():
            if v in f:
                pre = [f, (f - {v}) | {w}, f | {w}]
                vals = {phi[_face_key(g)] for g in pre
                        if _face_key(g) in phi}
                if len(vals) != 1:
                    raise AssertionError(
                        "edge-zip stages did not merge the classes of %r"
                        % (sorted(f),))
                new_phi[_face_key(f)] = vals.pop()
            else:
                new_phi[_face_key(f)] = phi[_face_key(f)]
        phi = new_phi
        complex_now = contracted
        _assert_matches_face_poset(current, complex_now, phi)
    return out


def _assert_matches_face_poset(poset, komplex, phi):
    if poset.n != len(komplex.faces()):
        raise AssertionError("stage poset size mismatch")
    for f in komplex.faces():
        for g in komplex.faces():
            if f == g:
                continue
            sub = f < g
            le = poset.le(phi[_face_key(f)], phi[_face_key(g)])
            if sub != le:
                raise AssertionError("stage poset order mismatch at %r, %r"
                                     % (sorted(f), sorted(g)))


# ---------------------------------------------------------------------------
# barycentric lift of poset collapses


def _chains_of_mask(p: Poset, mask):
    out = []

    def grow(chain, top):
        out.append([p.labels[v] for v in chain])
        for nxt in mask_bits(p.up[top] & mask & ~(1 << top)):
            grow(chain + [nxt], nxt)

    for v in mask_bits(mask):
        grow([v], v)
    return [frozenset(c) for c in out]


def barycentric_collapse_lift(p: Poset, seq: CollapseSequence, start=None):
    """Lift a poset collapse to a simplicial collapse of the barycentric
    subdivision, as elementary free-face pairs.

    Returns (pairs, final_vertex_label): replaying the pairs on the chains
    of p collapses them onto the single vertex chain {final}.
    """
    state = p.full_mask() if start is None else start
    pairs = []

    def lift(state, seq):
        cur = state
        last = None
        for step in seq.steps:
            s = p._ix(step.sigma)
            kept = p._mask_of(step.kept)
            cone = p.dn[s] & cur
            bd = cone & ~(1 << s)
            # phase A: cone chains not inside the kept part join the apex
            bd_chains = _chains_of_mask(p, bd)
            kept_chains = set(_chains_of_mask(p, kept))
            phase_a = sorted((c for c in bd_chains if c not in kept_chains),
                             key=lambda c: (-len(c), sorted(c)))
            for c in phase_a:
                pairs.append((c, c | {step.sigma}))
            # phase B: the kept part's own lifted collapse, joined with sigma
            sub_pairs_start = len(pairs)
            point = lift(kept, step.sub)
            sub_pairs = pairs[sub_pairs_start:]
            del pairs[sub_pairs_start:]
            for (t, r) in sub_pairs:
                pairs.append((t | {step.sigma}, r | {step.sigma}))
            # phase C: drop the apex edge
            pairs.append((frozenset([step.sigma]),
                          frozenset([step.sigma, point])))
            cur = (cur & ~cone) | kept
            last = point
        if bin(cur).count("1") != 1:
            raise ValueError("collapse sequence does not reach a singleton")
        return p.labels[next(iter(mask_bits(cur)))]

    final = lift(state, seq)
    return pairs, final


def simplicial_collapsibility_of_barycentric(p: Poset,
                                             seq: CollapseSequence):
    """Verdict wrapper: lift and replay, returning yes with the pair list."""
    from .certificates import verify_simplicial_collapse
    pairs, final = barycentric_collapse_lift(p, seq)
    faces = _chains_of_mask(p, p.full_mask())
    ok, why = verify_simplicial_collapse(faces, pairs,
                                         [frozenset([final])])
    if not ok:
        return Verdict.no(why)
    return Verdict.yes({"pairs": len(pairs), "final": final})
