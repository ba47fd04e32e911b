"""Certificate types, canonical JSON serialization, and replay verifiers.

Verifiers are independent of the searchers: they replay every defining
condition from scratch and return (ok, reason).  Any malformed payload is a
rejection, never an exception.
"""

from __future__ import annotations

import json

from .core import Poset, SubposetMask, mask_bits
from .cylinders import quotient
from .ops import FacetComplex

FORMAT_VERSION = "posetcalc-cert-v1"


# ---------------------------------------------------------------------------
# construction trees


class ConstructionTree:
    """Cone(apex) | Split(q_max, r_max, q, r, qr) bound to a poset's labels."""

    __slots__ = ("kind", "apex", "q_max", "r_max", "q", "r", "qr")

    def __init__(self, kind, apex=None, q_max=None, r_max=None,
                 q=None, r=None, qr=None):
        self.kind = kind
        self.apex = apex
        self.q_max = sorted(q_max) if q_max is not None else None
        self.r_max = sorted(r_max) if r_max is not None else None
        self.q = q
        self.r = r
        self.qr = qr

    @classmethod
    def cone(cls, apex):
        return cls("cone", apex=apex)

    @classmethod
    def split(cls, q_max, r_max, q, r, qr):
        return cls("split", q_max=q_max, r_max=r_max, q=q, r=r, qr=qr)

    def to_obj(self):
        if self.kind == "cone":
            return {"type": "cone", "apex": self.apex}
        return {"type": "split", "q_max": self.q_max, "r_max": self.r_max,
                "q": self.q.to_obj(), "r": self.r.to_obj(),
                "qr": self.qr.to_obj()}

    @classmethod
    def from_obj(cls, obj):
        if not isinstance(obj, dict):
            raise ValueError("construction node must be an object")
        t = obj.get("type")
        if t == "cone":
            if not isinstance(obj.get("apex"), str):
                raise ValueError("cone node needs a string apex")
            return cls.cone(obj["apex"])
        if t == "split":
            for key in ("q_max", "r_max"):
                if (not isinstance(obj.get(key), list)
                        or not all(isinstance(x, str) for x in obj[key])):
                    raise ValueError("split node needs label lists")
            return cls.split(obj["q_max"], obj["r_max"],
                             cls.from_obj(obj["q"]), cls.from_obj(obj["r"]),
                             cls.from_obj(obj["qr"]))
        raise ValueError("unknown construction node type: %r" % (t,))

    def size(self):
        if self.kind == "cone":
            return 1
        return 1 + self.q.size() + self.r.size() + self.qr.size()


def _is_codim_one_masks(p: Poset, small, big):
    """Every maximal element of small is covered by a maximal element of big."""
    big_max = p.maximal_mask(big)
    for x in mask_bits(p.maximal_mask(small)):
        ok = False
        for y in p._cov_up_list()[x]:
            if big_max >> y & 1:
                ok = True
                break
        if not ok:
            return False, p.labels[x]
    return True, None


def verify_construction(p: Poset, tree: ConstructionTree, within=None):
    """Replay a construction tree against a poset (or an ideal of it)."""
    state = p.full_mask() if within is None else within
    if state == 0:
        return False, "empty poset is not constructible"
    if not isinstance(tree, ConstructionTree):
        return False, "not a construction tree"
    if tree.kind == "cone":
        try:
            a = p._ix(tree.apex)
        except KeyError:
            return False, "unknown apex %r" % (tree.apex,)
        if not state >> a & 1:
            return False, "apex %r outside the state" % (tree.apex,)
        if p.dn[a] & state != state:
            return False, "apex %r is not the greatest element" % (tree.apex,)
        return True, None
    if tree.kind != "split":
        return False, "unknown node kind %r" % (tree.kind,)
    try:
        qm = p._mask_of(tree.q_max)
        rm = p._mask_of(tree.r_max)
    except KeyError as e:
        return False, str(e)
    maxm = p.maximal_mask(state)
    if qm & rm:
        return False, "q_max and r_max overlap"
    if (qm | rm) != maxm:
        return False, "split does not partition the maximal elements"
    if qm == 0 or rm == 0:
        return False, "split side is empty"
    qmask = 0
    for i in mask_bits(qm):
        qmask |= p.dn[i]
    rmask = 0
    for i in mask_bits(rm):
        rmask |= p.dn[i]
    qmask &= state
    rmask &= state
    inter = qmask & rmask
    if inter == 0:
        return False, "split parts do not meet"
    ok, w = _is_codim_one_masks(p, inter, qmask)
    if not ok:
        return False, "intersection not codimension one in Q at %r" % (w,)
    ok, w = _is_codim_one_masks(p, inter, rmask)
    if not ok:
        return False, "intersection not codimension one in R at %r" % (w,)
    for sub, m, name in ((tree.q, qmask, "Q"), (tree.r, rmask, "R"),
                         (tree.qr, inter, "Q∩R")):
        ok, why = verify_construction(p, sub, m)
        if not ok:
            return False, "%s: %s" % (name, why)
    return True, None


# ---------------------------------------------------------------------------
# zipping


class ZipStep:
    __slots__ = ("p", "q", "r")

    def __init__(self, p, q, r):
        self.p = p
        self.q = q
        self.r = r

    def to_obj(self):
        return {"p": self.p, "q": self.q, "r": self.r}

    @classmethod
    def from_obj(cls, obj):
        if (not isinstance(obj, dict)
                or not all(isinstance(obj.get(k), str) for k in "pqr")):
            raise ValueError("zip step needs string fields p, q, r")
        return cls(obj["p"], obj["q"], obj["r"])

    def __repr__(self):
        return "ZipStep(%s; %s, %s)" % (self.p, self.q, self.r)


def zip_step_valid(poset: Poset, step: ZipStep):
    """Reading's two bullet conditions, plus p covering q and r."""
    try:
        pi, qi, ri = (poset._ix(step.p), poset._ix(step.q), poset._ix(step.r))
    except KeyError as e:
        return False, str(e)
    if len({pi, qi, ri}) != 3:
        return False, "zip triple must be three distinct elements"
    covs = poset.covers
    if (qi, pi) not in covs or (ri, pi) not in covs:
        return False, "%r must cover %r and %r" % (step.p, step.q, step.r)
    dn, up = poset.dn, poset.up
    below = dn[pi] & ~(1 << pi) & ~(1 << qi) & ~(1 << ri)
    if below & ~(dn[qi] & dn[ri]):
        bad = next(iter(mask_bits(below & ~(dn[qi] & dn[ri]))))
        return False, ("element %r below %r is not below both %r and %r"
                       % (poset.labels[bad], step.p, step.q, step.r))
    above_both = up[qi] & up[ri]
    if above_both & ~up[pi]:
        bad = next(iter(mask_bits(above_both & ~up[pi])))
        return False, ("element %r above %r and %r is not above %r"
                       % (poset.labels[bad], step.q, step.r, step.p))
    return True, None


def apply_zip(poset: Poset, step: ZipStep) -> Poset:
    """Quotient by the triple; the merged class takes the least label."""
    ok, why = zip_step_valid(poset, step)
    if not ok:
        raise ValueError("invalid zip step: %s" % (why,))
    m = SubposetMask(poset, [step.p, step.q, step.r])
    out = quotient(poset, m)
    if out.n != poset.n - 2:
        raise AssertionError("zip must drop exactly two elements")
    return out


GOALS = ("singleton", "cone", "dual-cone", "replay")


def goal_reached(poset: Poset, goal):
    if goal == "singleton":
        return poset.n == 1
    if goal == "cone":
        return poset.greatest() is not None
    if goal == "dual-cone":
        return poset.least() is not None
    if goal == "replay":
        return True  # steps only; no end condition
    raise ValueError("unknown goal %r" % (goal,))


def verify_zipping(poset: Poset, steps, goal="singleton"):
    """Replay a zip sequence; success means the goal holds at the end."""
    if goal not in GOALS:
        return False, "unknown goal %r" % (goal,)
    cur = poset
    for k, step in enumerate(steps):
        if not isinstance(step, ZipStep):
            return False, "step %d is not a zip step" % k
        ok, why = zip_step_valid(cur, step)
        if not ok:
            return False, "step %d: %s" % (k, why)
        cur = apply_zip(cur, step)
    if not goal_reached(cur, goal):
        return False, "sequence ends at %d elements without the goal" % cur.n
    return True, None


# ---------------------------------------------------------------------------
# edge zipping


class EdgeZipStep:
    __slots__ = ("v", "w")

    def __init__(self, v, w):
        self.v = v
        self.w = w

    def to_obj(self):
        return {"v": self.v, "w": self.w}

    @classmethod
    def from_obj(cls, obj):
        if (not isinstance(obj, dict)
                or not all(isinstance(obj.get(k), str) for k in "vw")):
            raise ValueError("edge-zip step needs string fields v, w")
        return cls(obj["v"], obj["w"])

    def __repr__(self):
        return "EdgeZipStep(%s,%s)" % (self.v, self.w)


def edge_contract(k: FacetComplex, v, w) -> FacetComplex:
    """Contract the edge v*w, merging w into v."""
    v, w = str(v), str(w)
    if not k.has_face([v, w]):
        raise ValueError("%r*%r is not an edge" % (v, w))
    mapped = set()
    for f in k.facets:
        g = frozenset(v if x == w else x for x in f)
        mapped.add(g)
    maximal = [f for f in mapped if not any(f < g for g in mapped)]
    return FacetComplex(maximal)


def is_elementary_edge_zip(k: FacetComplex, v, w):
    """Link condition lk(v) ∩ lk(w) = lk(v*w), on the pre-step complex."""
    v, w = str(v), str(w)
    if not k.has_face([v, w]):
        return False
    lv = k.simplicial_link([v])
    lw = k.simplicial_link([w])
    lvw = k.simplicial_link([v, w])
    return lv & lw == lvw


def verify_edge_zipping(k: FacetComplex, steps, target: FacetComplex):
    """Replay edge contractions; the result must equal the target complex
    up to a vertex bijection."""
    cur = k
    for i, step in enumerate(steps):
        if not isinstance(step, EdgeZipStep):
            return False, "step %d is not an edge-zip step" % i
        if not is_elementary_edge_zip(cur, step.v, step.w):
            return False, ("step %d: (%s,%s) fails the link condition"
                           % (i, step.v, step.w))
        cur = edge_contract(cur, step.v, step.w)
    from .isomorph import find_isomorphism
    if find_isomorphism(cur.face_poset(), target.face_poset()) is None:
        return False, "result is not isomorphic to the target complex"
    return True, None


# ---------------------------------------------------------------------------
# collapse sequences (shared mask-state machinery with shellings)


class CollapseStep:
    __slots__ = ("sigma", "kept", "sub")

    def __init__(self, sigma, kept, sub):
        self.sigma = sigma
        self.kept = sorted(kept)
        self.sub = sub  # CollapseSequence for the kept intersection

    def to_obj(self):
        return {"sigma": self.sigma, "kept": self.kept,
                "sub": self.sub.to_obj()}

    @classmethod
    def from_obj(cls, obj):
        if not isinstance(obj, dict) or not isinstance(obj.get("sigma"), str):
            raise ValueError("collapse step needs a sigma label")
        if (not isinstance(obj.get("kept"), list)
                or not all(isinstance(x, str) for x in obj["kept"])):
            raise ValueError("collapse step needs a kept label list")
        return cls(obj["sigma"], obj["kept"],
                   CollapseSequence.from_obj(obj.get("sub")))


class CollapseSequence:
    __slots__ = ("steps",)

    def __init__(self, steps):
        self.steps = list(steps)

    def to_obj(self):
        return {"steps": [s.to_obj() for s in self.steps]}

    @classmethod
    def from_obj(cls, obj):
        if not isinstance(obj, dict) or not isinstance(obj.get("steps"), list):
            raise ValueError("collapse sequence needs a step list")
        return cls([CollapseStep.from_obj(s) for s in obj["steps"]])

    def __len__(self):
        return len(self.steps)


def collapse_step_apply(p: Poset, state, step: CollapseStep):
    """Check one elementary collapse at a mask state; return the new state."""
    try:
        s = p._ix(step.sigma)
        kept = p._mask_of(step.kept)
    except KeyError as e:
        return None, str(e)
    if not state >> s & 1:
        return None, "sigma %r outside the state" % (step.sigma,)
    if p.up[s] & state != 1 << s:
        return None, "sigma %r is not maximal in the state" % (step.sigma,)
    cone = p.dn[s] & state
    if kept & ~cone or kept >> s & 1:
        return None, "kept part must lie strictly inside the cone of sigma"
    rest = state & ~cone
    rest_cl = 0
    for i in mask_bits(rest):
        rest_cl |= p.dn[i]
    required = cone & rest_cl
    if required & ~kept:
        return None, "kept part misses boundary shared with the rest"
    q = rest | kept
    for i in mask_bits(q):
        if p.dn[i] & state & ~q:
            return None, "resulting subposet is not closed"
    if q == state:
        return None, "collapse step removes nothing"
    ok, why = verify_collapse_to_any_singleton(p, kept, step.sub)
    if not ok:
        return None, "intersection not collapsible: %s" % (why,)
    return q, None


def verify_collapse_to_any_singleton(p: Poset, state, seq: CollapseSequence):
    if not isinstance(seq, CollapseSequence):
        return False, "missing sub-certificate"
    cur = state
    for k, step in enumerate(seq.steps):
        cur, why = collapse_step_apply(p, cur, step)
        if cur is None:
            return False, "step %d: %s" % (k, why)
    if bin(cur).count("1") != 1:
        return False, "sequence ends at %d elements" % bin(cur).count("1")
    return True, None


def verify_collapse(p: Poset, seq: CollapseSequence, target, start=None):
    """Replay a collapse of (an ideal of) p onto the target mask."""
    cur = p.full_mask() if start is None else start
    tgt = target.mask if isinstance(target, SubposetMask) else target
    if tgt & ~cur:
        return False, "target is not inside the start state"
    for k in mask_bits(tgt):
        if p.dn[k] & cur & ~tgt:
            return False, "target mask is not closed"
    for k, step in enumerate(seq.steps):
        nxt, why = collapse_step_apply(p, cur, step)
        if nxt is None:
            return False, "step %d: %s" % (k, why)
        if tgt & ~nxt:
            return False, "step %d removed part of the target" % k
        cur = nxt
    if cur != tgt:
        return False, "sequence ends away from the target"
    return True, None


# ---------------------------------------------------------------------------
# shellings


class ShellStep:
    __slots__ = ("apex", "kept", "sub")

    def __init__(self, apex, kept, sub):
        self.apex = apex
        self.kept = sorted(kept)
        self.sub = sub  # ShellSequence for the intersection R

    def to_obj(self):
        return {"apex": self.apex, "kept": self.kept, "sub": self.sub.to_obj()}

    @classmethod
    def from_obj(cls, obj):
        if not isinstance(obj, dict) or not isinstance(obj.get("apex"), str):
            raise ValueError("shell step needs an apex label")
        if (not isinstance(obj.get("kept"), list)
                or not all(isinstance(x, str) for x in obj["kept"])):
            raise ValueError("shell step needs a kept label list")
        return cls(obj["apex"], obj["kept"], ShellSequence.from_obj(obj["sub"]))


class ShellSequence:
    """Steps are stored in peeling order; replay runs them in order,
    shrinking the state down to the base (a cone, or empty for the
    empty-shelling variant)."""

    __slots__ = ("steps", "empty_goal")

    def __init__(self, steps, empty_goal=False):
        self.steps = list(steps)
        self.empty_goal = bool(empty_goal)

    def to_obj(self):
        return {"empty_goal": self.empty_goal,
                "steps": [s.to_obj() for s in self.steps]}

    @classmethod
    def from_obj(cls, obj):
        if not isinstance(obj, dict) or not isinstance(obj.get("steps"), list):
            raise ValueError("shell sequence needs a step list")
        return cls([ShellStep.from_obj(s) for s in obj["steps"]],
                   bool(obj.get("empty_goal", False)))

    def __len__(self):
        return len(self.steps)


def shell_step_apply(p: Poset, state, step: ShellStep, empty_goal):
    try:
        m = p._ix(step.apex)
        kept = p._mask_of(step.kept)
    except KeyError as e:
        return None, str(e)
    if not state >> m & 1:
        return None, "apex %r outside the state" % (step.apex,)
    if p.up[m] & state != 1 << m:
        return None, "apex %r is not maximal in the state" % (step.apex,)
    cone = p.dn[m] & state
    bd = cone & ~(1 << m)  # boundary of the cone
    if kept & ~bd:
        return None, "intersection must lie in the cone boundary"
    rest = state & ~cone
    rest_cl = 0
    for i in mask_bits(rest):
        rest_cl |= p.dn[i]
    required = cone & rest_cl
    if required & ~kept:
        return None, "intersection misses boundary shared with the rest"
    q = rest | kept
    for i in mask_bits(q):
        if p.dn[i] & state & ~q:
            return None, "resulting subposet is not closed"
    if q == state:
        return None, "shell step removes nothing"
    # R shellable (recursively)
    ok, why = verify_shelling_state(p, kept, step.sub, empty_goal)
    if not ok:
        return None, "intersection not shellable: %s" % (why,)
    # R of codimension one in Q
    ok, w = _is_codim_one_masks(p, kept, q)
    if not ok:
        return None, "intersection not codimension one in Q at %r" % (w,)
    # R ∩ closure(X \ R) of codimension one in R and in closure(X \ R)
    xr = bd & ~kept
    w_cl = 0
    for i in mask_bits(xr):
        w_cl |= p.dn[i]
    w_cl &= bd
    meet = kept & w_cl
    ok, w = _is_codim_one_masks(p, meet, kept)
    if not ok:
        return None, "side condition fails in R at %r" % (w,)
    ok, w = _is_codim_one_masks(p, meet, w_cl)
    if not ok:
        return None, "side condition fails in the leftover closure at %r" % (w,)
    return q, None


def verify_shelling_state(p: Poset, state, seq: ShellSequence, empty_goal=None):
    if not isinstance(seq, ShellSequence):
        return False, "missing shelling certificate"
    if empty_goal is None:
        empty_goal = seq.empty_goal
    cur = state
    for k, step in enumerate(seq.steps):
        cur, why = shell_step_apply(p, cur, step, empty_goal)
        if cur is None:
            return False, "step %d: %s" % (k, why)
    if empty_goal:
        if cur != 0:
            return False, "empty-shelling ends at a nonempty state"
        return True, None
    if cur == 0 or p.greatest(cur) is None:
        return False, "shelling does not end at a cone"
    return True, None


def verify_shelling(p: Poset, seq: ShellSequence):
    return verify_shelling_state(p, p.full_mask(), seq)


# ---------------------------------------------------------------------------
# simplicial collapse (free-face pairs), used by the barycentric lift


def verify_simplicial_collapse(faces, pairs, target_faces):
    """Replay elementary simplicial collapses given as (free, coface) pairs.

    ``faces`` and ``target_faces`` are collections of frozensets; each pair
    removes a free face and its unique proper coface.
    """
    cur = set(faces)
    for k, (tau, sigma) in enumerate(pairs):
        tau = frozenset(tau)
        sigma = frozenset(sigma)
        if tau not in cur or sigma not in cur:
            return False, "pair %d references missing faces" % k
        if not (tau < sigma) or len(sigma) != len(tau) + 1:
            return False, "pair %d is not a free-face pair" % k
        cofaces = [f for f in cur if tau < f]
        if cofaces != [sigma]:
            return False, "free face of pair %d has %d cofaces" % (
                k, len(cofaces))
        cur.discard(tau)
        cur.discard(sigma)
    if cur != set(frozenset(f) for f in target_faces):
        return False, "collapse does not end at the target subcomplex"
    return True, None


# ---------------------------------------------------------------------------
# certificate files


_KINDS = {
    "construction": (ConstructionTree, "tree"),
    "zipping": (None, "steps"),
    "edge-zipping": (None, "steps"),
    "collapse": (None, "sequence"),
    "shelling": (None, "sequence"),
}


def certificate_to_json(kind, payload_obj, subject_hash, extra=None):
    obj = {"format": FORMAT_VERSION, "kind": kind,
           "subject_sha256": subject_hash, "payload": payload_obj}
    if extra:
        obj.update(extra)
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def certificate_from_json(text):
    obj = json.loads(text)
    if not isinstance(obj, dict) or obj.get("format") != FORMAT_VERSION:
        raise ValueError("not a %s certificate" % (FORMAT_VERSION,))
    return obj


def zipping_payload(steps, goal, assumed_spheres=()):
    obj = {"goal": goal, "steps": [s.to_obj() for s in steps]}
    if assumed_spheres:
        obj["assumed_spheres"] = sorted(assumed_spheres)
    return obj


def edge_zipping_payload(steps):
    return {"steps": [s.to_obj() for s in steps]}
