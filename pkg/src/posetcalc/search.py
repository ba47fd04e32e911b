"""Certificate searches: constructibility, zipping, collapsing, shelling.

Searchers are exhaustive (absence means refutation) and deterministic: split
and site enumeration follows label order.  Every searcher takes a node
budget and raises BudgetExceeded with its progress when it runs out; the
acceptance corpora are sized so budgets are never hit.

Pruning uses only paper-backed necessary conditions (constructible and
shellable posets are contractible, hence connected with Euler characteristic
one; zipping of a nonsingular poset onto a dual cone forces the same).
"""

from __future__ import annotations

from itertools import combinations

from .certificates import (CollapseSequence, CollapseStep, ConstructionTree,
                           EdgeZipStep, ShellSequence, ShellStep, ZipStep,
                           apply_zip, edge_contract, goal_reached,
                           is_elementary_edge_zip, zip_step_valid)
from .core import Poset, SubposetMask, mask_bits
from .isomorph import IsoTable, fingerprint, find_isomorphism
from .ops import FacetComplex
from .verdict import Verdict


class BudgetExceeded(RuntimeError):
    """Search ran out of nodes; carries the nodes spent so far."""

    def __init__(self, what, nodes):
        self.what = what
        self.nodes = nodes
        super().__init__("%s search exceeded its node budget (%d nodes)"
                         % (what, nodes))


class _Budget:
    __slots__ = ("limit", "used", "what")

    def __init__(self, limit, what):
        self.limit = limit
        self.used = 0
        self.what = what

    def spend(self):
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(self.what, self.used)


def _closure_mask(p, gen, within):
    out = 0
    for i in mask_bits(gen):
        out |= p.dn[i]
    return out & within


def _codim_one(p, small, big):
    big_max = p.maximal_mask(big)
    for x in mask_bits(p.maximal_mask(small)):
        if not any(big_max >> y & 1 for y in p._cov_up_list()[x]):
            return False
    return True


def _xor_rank(cols):
    rank = 0
    basis = []
    for v in cols:
        for b in basis:
            low = b & -b
            if v & low:
                v ^= b
        if v:
            basis.append(v)
            rank += 1
    return rank


def _chi_mask(p, mask):
    """Euler characteristic of the order complex of an induced subposet."""
    sgn = {}
    order = sorted(mask_bits(mask), key=lambda i: bin(p.dn[i]).count("1"))
    total = 0
    for i in order:
        s = 1
        for j in mask_bits(p.dn[i] & mask & ~(1 << i)):
            s -= sgn[j]
        sgn[i] = s
        total += s
    return total


# ---------------------------------------------------------------------------
# constructibility


class ConstructionSearch:
    """Exhaustive constructibility search over the ideals of one poset.

    Splits are determined by partitions of the maximal elements (order
    ideals in a construction step are regular closed), enumerated smallest
    Q-side first with lexicographic tie-break.  Refutations are memoized per
    exact mask and, across search sessions, per isomorphism class.
    """

    def __init__(self, p: Poset, budget=None, iso_table: IsoTable = None):
        self.p = p
        self.budget = _Budget(budget, "constructibility")
        self.exact = {}
        self.iso = iso_table if iso_table is not None else IsoTable()

    def search(self, mask=None):
        state = self.p.full_mask() if mask is None else mask
        if state == 0:
            return None
        return self._go(state)

    def _go(self, state):
        if state in self.exact:
            return self.exact[state]
        self.budget.spend()
        p = self.p
        g = p.greatest(state)
        if g is not None:
            tree = ConstructionTree.cone(p.labels[g])
            self.exact[state] = tree
            return tree
        result = None
        induced = None
        if not p.connected(state) or _chi_mask(p, state) != 1:
            pass  # constructible posets are contractible; refuted
        else:
            induced, _ = p.induced(state)
            if self.iso.get(induced, default=None) is not None:
                self.exact[state] = None
                return None
            result = self._try_splits(state)
        if result is None:
            if induced is None:
                induced, _ = p.induced(state)
            if self.iso.get(induced, default=None) is None:
                self.iso.put(induced, True)  # refuted marker
        self.exact[state] = result
        return result

    def _try_splits(self, state):
        p = self.p
        maxima = sorted(mask_bits(p.maximal_mask(state)),
                        key=lambda i: p.labels[i])
        m0, rest = maxima[0], maxima[1:]
        for size in range(len(rest)):
            for extra in combinations(rest, size):
                qgen = (1 << m0)
                for e in extra:
                    qgen |= 1 << e
                rgen = 0
                for m in rest:
                    if not qgen >> m & 1:
                        rgen |= 1 << m
                qmask = _closure_mask(p, qgen, state)
                rmask = _closure_mask(p, rgen, state)
                inter = qmask & rmask
                if inter == 0:
                    continue
                if not _codim_one(p, inter, qmask):
                    continue
                if not _codim_one(p, inter, rmask):
                    continue
                tq = self._go(qmask)
                if tq is None:
                    continue
                tr = self._go(rmask)
                if tr is None:
                    continue
                ti = self._go(inter)
                if ti is None:
                    continue
                return ConstructionTree.split(
                    [p.labels[i] for i in mask_bits(qgen)],
                    [p.labels[i] for i in mask_bits(rgen)],
                    tq, tr, ti)
        return None


_construction_iso_table = IsoTable()


def find_construction(p: Poset, budget=None, shared_memo=True):
    """A construction tree for p, or None (exhaustively refuted)."""
    if p.n == 0:
        return None
    table = _construction_iso_table if shared_memo else IsoTable()
    return ConstructionSearch(p, budget, table).search()


# ---------------------------------------------------------------------------
# Hochster-style constructibility of C*K for a facet complex


_hochster_iso_table = IsoTable()


class HochsterSearch:
    """Constructibility of the bottom-augmented face poset via the
    dimension-form split conditions on the complex itself.

    Prunes with necessary conditions from the Mayer-Vietoris lemma: a
    complex with constructible face poset is pure and acyclic below its top
    dimension (connected, and with vanishing first mod-2 homology in the
    two-dimensional case)."""

    def __init__(self, k: FacetComplex, budget=None):
        self.k = k
        self.budget = _Budget(budget, "hochster")
        self.exact = {}
        self.iso = _hochster_iso_table

    @staticmethod
    def _faces_of(facets):
        out = set()
        for f in facets:
            items = sorted(f)
            for r in range(1, len(items) + 1):
                out.update(frozenset(c) for c in combinations(items, r))
        return out

    @staticmethod
    def _facets_of_faceset(faces):
        return frozenset(f for f in faces
                         if not any(f < g for g in faces))

    def _connected(self, facets):
        facets = list(facets)
        if not facets:
            return True
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(len(facets)):
                if j not in seen and facets[i] & facets[j]:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(facets)

    def search(self, facets=None):
        if facets is None:
            facets = frozenset(self.k.facets)
        return self._go(frozenset(facets))

    def _face_label(self, f):
        from .ops import face_label
        return face_label(f)

    def _go(self, facets):
        if facets in self.exact:
            return self.exact[facets]
        self.budget.spend()
        result = self._solve(facets)
        self.exact[facets] = result
        return result

    def _acyclic_below_top(self, facets, d):
        """Necessary: connected, and mod-2 H_1 vanishes when dim >= 2."""
        if not self._connected(facets):
            return False
        if d < 3:
            return True
        faces = self._faces_of(facets)
        edges = sorted((f for f in faces if len(f) == 2), key=sorted)
        verts = sorted((f for f in faces if len(f) == 1), key=sorted)
        tris = [f for f in faces if len(f) == 3]
        eidx = {e: i for i, e in enumerate(edges)}
        vidx = {v: i for i, v in enumerate(verts)}
        cols2 = []
        for t in tris:
            m = 0
            for pair in combinations(sorted(t), 2):
                m |= 1 << eidx[frozenset(pair)]
            cols2.append(m)
        rank2 = _xor_rank(cols2)
        cols1 = []
        for e in edges:
            m = 0
            for v in e:
                m |= 1 << vidx[frozenset([v])]
            cols1.append(m)
        rank1 = _xor_rank(cols1)
        b1 = len(edges) - rank1 - rank2
        return b1 == 0

    def _solve(self, facets):
        if not facets:
            return ConstructionTree.cone("^0")
        if len(facets) == 1:
            return ConstructionTree.cone(self._face_label(next(iter(facets))))
        dims = {len(f) for f in facets}
        if len(dims) != 1:
            return None  # constructible face posets are pure
        d = next(iter(dims))
        if d == 1:
            # a set of points: always constructible (splits meet in ^0 alone)
            return self._point_tree(sorted(facets, key=sorted))
        if not self._acyclic_below_top(facets, d):
            return None  # Mayer-Vietoris: acyclic below the top dimension
        if d == 2:
            tree = self._graph_tree(facets)
            if tree is not None:
                return tree
        if self.iso.get(self._poset_of(facets), default=None) is not None:
            return None
        ordered = sorted(facets, key=sorted)
        f0, rest = ordered[0], ordered[1:]
        pairdim = {(a, b): len(a & b) for a in ordered for b in ordered}
        for size in range(len(rest)):
            for extra in combinations(rest, size):
                f1 = frozenset((f0,) + extra)
                f2 = frozenset(facets - f1)
                top_i = max(pairdim[(a, b)] for a in f1 for b in f2)
                dim_q = max(len(f) for f in f1) - 1
                dim_r = max(len(f) for f in f2) - 1
                if not (dim_q == dim_r == top_i):
                    continue
                inter = self._faces_of(f1) & self._faces_of(f2)
                tq = self._go(f1)
                if tq is None:
                    continue
                tr = self._go(f2)
                if tr is None:
                    continue
                ti = self._go(self._facets_of_faceset(inter))
                if ti is None:
                    continue
                return ConstructionTree.split(
                    [self._face_label(f) for f in sorted(f1, key=sorted)],
                    [self._face_label(f) for f in sorted(f2, key=sorted)],
                    tq, tr, ti)
        self.iso.put(self._poset_of(facets), True)
        return None

    def _poset_of(self, facets):
        return FacetComplex(self._facets_of_faceset(
            self._faces_of(facets))).face_poset()

    def _point_tree(self, points):
        if len(points) == 1:
            return ConstructionTree.cone(self._face_label(points[0]))
        head, tail = points[0], points[1:]
        return ConstructionTree.split(
            [self._face_label(head)],
            [self._face_label(f) for f in tail],
            ConstructionTree.cone(self._face_label(head)),
            self._point_tree(tail),
            ConstructionTree.cone("^0"))

    def _graph_tree(self, facets):
        """Connected pure graphs are constructible: peel leaf or cycle edges."""
        edges = sorted(facets, key=sorted)
        for e in edges:
            rest = frozenset(facets) - {e}
            if not rest:
                return ConstructionTree.cone(self._face_label(e))
            if not self._connected(rest):
                continue
            vs = set().union(*rest)
            inter = [frozenset([v]) for v in sorted(e & vs)]
            if not inter:
                continue
            sub = self._go(rest)
            if sub is None:
                return None
            return ConstructionTree.split(
                [self._face_label(e)],
                [self._face_label(f) for f in sorted(rest, key=sorted)],
                ConstructionTree.cone(self._face_label(e)),
                sub,
                self._point_tree(inter))
        return None


def hochster_construction(k: FacetComplex, budget=None):
    """Construction tree for C*(face poset of k), or None if refuted.

    The emitted tree verifies against dual_cone(k.face_poset()).
    """
    from .ops import face_label
    if any(face_label(f) == "^0" for f in k.faces()):
        raise ValueError("face label ^0 collides with the adjoined bottom")
    return HochsterSearch(k, budget).search()


# ---------------------------------------------------------------------------
# zipping


def zip_sites(p: Poset):
    """Valid zip triples (p; q, r), ordered by the canonical linear extension
    of the apex and lexicographically on the covered pair."""
    out = []
    ext = p.linear_extension()
    for lab in ext:
        i = p._ix(lab)
        down = sorted(p._cov_dn_list()[i], key=lambda j: p.labels[j])
        for a in range(len(down)):
            for b in range(a + 1, len(down)):
                q, r = down[a], down[b]
                below = p.dn[i] & ~(1 << i) & ~(1 << q) & ~(1 << r)
                if below & ~(p.dn[q] & p.dn[r]):
                    continue
                if (p.up[q] & p.up[r]) & ~p.up[i]:
                    continue
                out.append(ZipStep(p.labels[i], p.labels[q], p.labels[r]))
    return out


def elementary_zip(p: Poset, step: ZipStep) -> Poset:
    """Apply one elementary zip (validating Reading's conditions)."""
    return apply_zip(p, step)


_zip_iso_tables = {}


class ZipSearch:
    """Depth-first zip search with isomorphism-class memoization.

    Pruning is by direct invariants of the zip move: an elementary zip
    preserves both the connected-component count and the Euler
    characteristic of the order complex (every chain through the zip triple
    decomposes uniquely as below-part, triple-part, above-part, and the
    signed counts agree before and after the quotient).  All three goals
    have chi = 1 and are connected, so states violating either can never
    reach them.
    """

    def __init__(self, p: Poset, goal, budget=None):
        self.goal = goal
        self.budget = _Budget(budget, "zipping")
        self.iso = _zip_iso_tables.setdefault(goal, IsoTable())

    def search(self, p: Poset):
        self.budget.spend()
        if goal_reached(p, self.goal):
            return []
        if not p.connected() or p.chain_count_euler() != 1:
            return None
        if self.iso.get(p, default=None) is not None:
            return None
        for step in zip_sites(p):
            child = apply_zip(p, step)
            sub = self.search(child)
            if sub is not None:
                return [step] + sub
        self.iso.put(p, True)
        return None


def find_zipping(p: Poset, goal="singleton", budget=None):
    """A zip sequence reaching the goal, or None (exhaustively refuted)."""
    if goal not in ("singleton", "cone", "dual-cone"):
        raise ValueError("goal must be singleton, cone or dual-cone")
    return ZipSearch(p, goal, budget).search(p)


# ---------------------------------------------------------------------------
# collapsing


def _closed_supersets(p, required, optional_region, state):
    """All closed masks required ∪ X with X inside the optional region.

    Enumerated by generating antichains of the optional region's elements,
    smallest resulting mask first, deterministically.
    """
    opts = list(mask_bits(optional_region))
    seen = set()
    out = []
    for size in range(len(opts) + 1):
        for gens in combinations(opts, size):
            m = required
            for g in gens:
                m |= p.dn[g] & state
            if m & ~(required | optional_region):
                continue
            if m not in seen:
                seen.add(m)
                out.append(m)
    return sorted(out, key=lambda m: (bin(m).count("1"), m))


class CollapseSearch:
    """Exhaustive poset-collapse search over closed masks of one poset.

    States are memoized per exact (state, target) mask pair and, for
    refutations, per isomorphism class of the coloured pair.
    """

    def __init__(self, p: Poset, budget=None):
        self.p = p
        self.budget = _Budget(budget, "collapse")
        self.exact = {}
        self.iso = IsoTable()

    def search(self, state, target):
        """target is a mask, or None for `any singleton'."""
        state, target = self._excise(state, target)
        key = (state, target)
        if key in self.exact:
            return self.exact[key]
        self.budget.spend()
        result = self._solve(state, target)
        self.exact[key] = result
        return result

    def _excise(self, state, target):
        """Shrink (state, target): drop the part of the target not touching
        the rest (the excision rule is an equivalence)."""
        if target is None or target == 0:
            return state, target
        d = state & ~target
        cl = _closure_mask(self.p, d, state)
        r = state & ~cl  # inside target, away from everything removed
        return state & ~r, target & ~r

    def _done(self, state, target):
        if target is None:
            return bin(state).count("1") == 1
        return state == target

    def _solve(self, state, target):
        p = self.p
        if self._done(state, target):
            return CollapseSequence([])
        if state == 0:
            return None
        if target is None and (not p.connected(state)
                               or _chi_mask(p, state) != 1):
            return None  # collapsible posets are contractible
        colors = self._colors(state, target)
        induced, keep = p.induced(state)
        cls = [colors[v] for v in keep]
        if self.iso.get(induced, colors=cls, default=None) is not None:
            return None
        for sigma in sorted(mask_bits(p.maximal_mask(state)),
                            key=lambda i: p.labels[i]):
            if target is not None and target >> sigma & 1:
                continue
            cone = p.dn[sigma] & state
            rest = state & ~cone
            required = cone & _closure_mask(p, rest, state)
            if target is not None:
                required |= cone & target
            boundary = cone & ~(1 << sigma)
            if required & ~boundary:
                continue
            for c in _closed_supersets(p, required, boundary & ~required,
                                       state):
                sub = self.search(c, None)
                if sub is None:
                    continue
                nxt = rest | c
                if nxt == state:
                    continue
                tail = self.search(nxt, target)
                if tail is not None:
                    step = CollapseStep(p.labels[sigma],
                                        [p.labels[i] for i in mask_bits(c)],
                                        sub)
                    return CollapseSequence([step] + tail.steps)
        self.iso.put(induced, True, colors=cls)
        return None

    def _colors(self, state, target):
        if target is None:
            return [0] * self.p.n
        return [1 if target >> i & 1 else 0 for i in range(self.p.n)]


def find_collapse(p: Poset, target: SubposetMask, budget=None):
    """A collapse of p onto the closed target, or None (refuted)."""
    tgt = target.mask if isinstance(target, SubposetMask) else target
    if tgt & ~p.full_mask():
        raise ValueError("target outside the poset")
    if not SubposetMask(p, tgt).is_closed():
        return None
    return CollapseSearch(p, budget).search(p.full_mask(), tgt)


def is_collapsible_poset(p: Poset, budget=None) -> Verdict:
    """Collapses onto some singleton (necessarily an atom)."""
    if p.n == 0:
        return Verdict.no("empty poset")
    try:
        seq = CollapseSearch(p, budget).search(p.full_mask(), None)
    except BudgetExceeded as e:
        return Verdict.unknown("budget exhausted after %d nodes" % e.nodes)
    if seq is None:
        return Verdict.no("exhaustive search refuted every first step")
    return Verdict.yes(seq)


# ---------------------------------------------------------------------------
# shelling


class ShellSearch:
    def __init__(self, p: Poset, budget=None, empty_goal=False):
        self.p = p
        self.budget = _Budget(budget, "shelling")
        self.empty_goal = empty_goal
        self.exact = {}
        self.iso = IsoTable()

    def _done(self, state):
        if self.empty_goal:
            return state == 0
        return state != 0 and self.p.greatest(state) is not None

    def search(self, state):
        if state in self.exact:
            return self.exact[state]
        self.budget.spend()
        result = self._solve(state)
        self.exact[state] = result
        return result

    def _solve(self, state):
        p = self.p
        if self._done(state):
            return ShellSequence([], self.empty_goal)
        if state == 0:
            return None
        if not self.empty_goal:
            if not p.connected(state) or _chi_mask(p, state) != 1:
                return None  # shellable implies constructible, contractible
        induced, _ = p.induced(state)
        if self.iso.get(induced, default=None) is not None:
            return None
        for sigma in sorted(mask_bits(p.maximal_mask(state)),
                            key=lambda i: p.labels[i]):
            cone = p.dn[sigma] & state
            rest = state & ~cone
            boundary = cone & ~(1 << sigma)
            required = cone & _closure_mask(p, rest, state)
            if required & ~boundary:
                continue
            for r_mask in _closed_supersets(p, required,
                                            boundary & ~required, state):
                nxt = rest | r_mask
                if nxt == state:
                    continue
                if not self._step_conditions(state, sigma, r_mask, nxt):
                    continue
                if self.empty_goal:
                    rseq = self.search(r_mask)
                else:
                    rseq = self._sub_shellable(r_mask)
                if rseq is None:
                    continue
                tail = self.search(nxt)
                if tail is not None:
                    step = ShellStep(p.labels[sigma],
                                     [p.labels[i] for i in mask_bits(r_mask)],
                                     rseq)
                    return ShellSequence([step] + tail.steps, self.empty_goal)
        self.iso.put(induced, True)
        return None

    def _sub_shellable(self, r_mask):
        if r_mask == 0:
            return None  # the empty poset is not shellable
        return self.search(r_mask)

    def _step_conditions(self, state, sigma, r_mask, nxt):
        p = self.p
        if not _codim_one(p, r_mask, nxt):
            return False
        boundary = (p.dn[sigma] & state) & ~(1 << sigma)
        xr = boundary & ~r_mask
        w = _closure_mask(p, xr, boundary)
        meet = r_mask & w
        if not _codim_one(p, meet, r_mask):
            return False
        if not _codim_one(p, meet, w):
            return False
        return True


def find_shelling(p: Poset, budget=None, empty_goal=False):
    """A shell sequence for p (down to a cone, or to nothing when
    empty_goal), or None (exhaustively refuted)."""
    if p.n == 0:
        return ShellSequence([], True) if empty_goal else None
    return ShellSearch(p, budget, empty_goal).search(p.full_mask())


# ---------------------------------------------------------------------------
# edge zipping


def _complex_key(k: FacetComplex):
    return fingerprint(k.face_poset())


def find_edge_zipping(k: FacetComplex, target: FacetComplex, budget=None):
    """A sequence of elementary edge-zippings from k to the target, or None.

    Iterative deepening over contraction sequences with isomorphism-class
    memoization of visited complexes.
    """
    budget = _Budget(budget, "edge-zipping")
    target_poset = target.face_poset()
    seen = IsoTable()

    def edges_of(c):
        out = set()
        for f in c.facets:
            for pair in combinations(sorted(f), 2):
                out.add(pair)
        return sorted(out)

    def dfs(c):
        budget.spend()
        cp = c.face_poset()
        if find_isomorphism(cp, target_poset) is not None:
            return []
        if cp.n <= target_poset.n:
            return None
        if seen.get(cp, default=None) is not None:
            return None
        for v, w in edges_of(c):
            if not is_elementary_edge_zip(c, v, w):
                continue
            sub = dfs(edge_contract(c, v, w))
            if sub is not None:
                return [EdgeZipStep(v, w)] + sub
        seen.put(cp, True)
        return None

    return dfs(k)


# ---------------------------------------------------------------------------
# constructible point inverses


def point_inverse_dual_constructibility(f, budget=None) -> Verdict:
    """Both routes of the point-inverse theorem, compared.

    Route one: every fiber's dual is constructible.  Route two: the dual map
    is constructible, i.e. the dual preimage of every dual cone is
    constructible (the filtration condition is a precondition).
    """
    from .recognize import is_filtration_map
    if not f.is_full():
        return Verdict.no("map is not full")
    fstar = f.dual()
    filt = is_filtration_map(fstar)
    if not filt.is_yes:
        return Verdict.no("dual map is not a filtration map: %r"
                          % (filt.witness,))
    src = f.source
    per_fiber = True
    fiber_witness = None
    for y in f.target.labels:
        sub, _ = src.induced(f.fiber_mask(y))
        if find_construction(sub.dual(), budget) is None:
            per_fiber = False
            fiber_witness = y
            break
    per_preimage = True
    preimage_witness = None
    for y in f.target.labels:
        m = 0
        for i, v in enumerate(f.table):
            if f.target.up[f.target._ix(y)] >> v & 1:
                m |= 1 << i
        sub, _ = src.induced(m)
        if find_construction(sub.dual(), budget) is None:
            per_preimage = False
            preimage_witness = y
            break
    if per_fiber != per_preimage:
        raise AssertionError(
            "point-inverse routes disagree (fiber %r vs preimage %r)"
            % (fiber_witness, preimage_witness))
    if per_fiber:
        return Verdict.yes()
    return Verdict.no("fiber over %r has non-constructible dual"
                      % (fiber_witness,))
