import random

import pytest

from posetcalc.core import (MonotoneMap, Poset, SubposetMask,
                            transitive_closure)
from posetcalc.cylinders import (AdjunctionDatum, DiagramOverPoset, adjunction,
                                 amalgam, fiber_diagram, hatcher_map, hocolim,
                                 hocolim_reconstruct, homma_factorization,
                                 iterated_mc, lmc, lmc_embedding, mc, mc_poset,
                                 mc_star, pullback, quotient, tmc, tmc_parts,
                                 tmc_retraction)
from posetcalc.isomorph import find_isomorphism
from posetcalc.ops import (FacetComplex, cone, dual_cone, join, point,
                           product, simplex)


def iso(p, q):
    return find_isomorphism(p, q) is not None


def boundary_complex(p):
    sub, _ = p.induced(p.boundary())
    return sub


def random_poset(rng, max_n=5, lo=1):
    n = rng.randrange(lo, max_n + 1)
    labels = [chr(97 + i) for i in range(n)]
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(n)
             if i < j and rng.random() < 0.4]
    return Poset.from_relation(labels, pairs)


def random_monotone_map(rng, p, q):
    """Assign targets along a linear extension, respecting lower covers."""
    table = {}
    for lab in p.linear_extension():
        i = p._ix(lab)
        allowed = q.full_mask()
        for j in range(p.n):
            if j != i and p.dn[i] >> j & 1:
                allowed &= q.up[q._ix(table[p.labels[j]])]
        if allowed == 0:
            return None
        choices = [q.labels[k] for k in range(q.n) if allowed >> k & 1]
        table[lab] = rng.choice(choices)
    return MonotoneMap(p, q, table)


SIMPLICIAL_SURJ = MonotoneMap(
    simplex("abc"), simplex("ad"),
    {"a": "a", "b": "d", "c": "d", "ab": "ad", "ac": "ad", "bc": "d",
     "abc": "ad"})


def test_adjunction_empty_domain_is_disjoint_union():
    p = simplex("ab")
    q = point()
    d = AdjunctionDatum(p, SubposetMask(p, 0),
                        MonotoneMap(Poset((), set()), q, {}, check=False))
    pre = adjunction(d)
    out = transitive_closure(pre)
    assert out.n == 4 and not out.connected()


def test_adjunction_closed_case_is_poset():
    # fold a 1-simplex onto an edge of another: closed A, closed (simplicial) f
    p = simplex("ab")
    q = simplex("cd")
    amask = p.closure_of(["ab"])
    sub, _ = p.induced(amask.mask)
    f = MonotoneMap(sub, q, {"a": "c", "b": "d", "ab": "cd"})
    pre = adjunction(AdjunctionDatum(p, amask, f))
    assert pre.is_partial_order()


def test_quotient_examples():
    d1 = simplex("ab")
    q = quotient(d1, SubposetMask(d1, d1.full_mask()))
    assert q.n == 1
    b2 = boundary_complex(simplex("abc"))
    dig = quotient(b2, b2.closure_of(["ab"]))
    assert dig.n == 4
    assert dig.maximal_mask().bit_count() == 2
    assert dig.minimal_mask().bit_count() == 2
    assert not dig.is_conditionally_complete()
    # quotient by the empty mask adds a disjoint point
    p = simplex("ab")
    out = quotient(p, SubposetMask(p, 0))
    assert out.n == 4 and not out.connected()


def test_amalgam_two_edges_share_vertex():
    p = simplex("ab")
    q = simplex("bc")
    a = SubposetMask(p, ["a"])
    b = SubposetMask(q, ["c"])
    suba, _ = p.induced(a.mask)
    subb, _ = q.induced(b.mask)
    h = MonotoneMap(suba, subb, {"a": "c"})
    out = transitive_closure(amalgam(p, q, a, b, h))
    assert out.n == 5
    assert out.connected()


def test_amalgam_closed_masks_give_poset():
    p = simplex("ab")
    q = simplex("cd")
    a = SubposetMask(p, ["a", "b"])
    b = SubposetMask(q, ["c", "d"])
    suba, _ = p.induced(a.mask)
    subb, _ = q.induced(b.mask)
    h = MonotoneMap(suba, subb, {"a": "c", "b": "d"})
    pre = amalgam(p, q, a, b, h)
    assert pre.is_partial_order()
    circle = transitive_closure(pre)
    # two segments glued along both endpoints: the 4-element digon circle
    assert circle.n == 4
    assert iso(circle, boundary_complex(simplex("abc"))) is False


def test_mc_identity_on_point_is_two_chain():
    f = MonotoneMap.identity(point())
    out = transitive_closure(mc(f))
    assert iso(out, Poset.from_covers("ab", [("a", "b")]))


def test_mc_poset_iff_closed_biconditional():
    rng = random.Random(11)
    checked = 0
    for _ in range(120):
        p = random_poset(rng, 5)
        q = random_poset(rng, 5)
        f = random_monotone_map(rng, p, q)
        if f is None:
            continue
        checked += 1
        assert mc(f).is_partial_order() == f.is_closed()
        assert mc_star(f).is_partial_order() == f.is_open()
    assert checked > 60


def test_mc_simplicial_surjection_not_conditionally_complete():
    f = SIMPLICIAL_SURJ
    assert f.is_closed()
    out = mc_poset(f)
    assert not out.is_conditionally_complete()


def test_mc_diagonal_fails_is_poset():
    d1 = simplex("ab")
    pp = product(d1, d1)
    diag = MonotoneMap(d1, pp, {l: "(%s,%s)" % (l, l) for l in d1.labels})
    assert not diag.is_closed()
    assert not mc(diag).is_partial_order()


def test_mc_ccp_for_infima_preserving_maps():
    rng = random.Random(12)
    found = 0
    for _ in range(200):
        p = random_poset(rng, 4)
        q = random_poset(rng, 4)
        f = random_monotone_map(rng, p, q)
        if f is None:
            continue
        if not (p.is_conditionally_complete() and q.is_conditionally_complete()):
            continue
        if not f.preserves_infima():
            continue
        found += 1
        assert transitive_closure(mc(f)).is_conditionally_complete()
        assert transitive_closure(lmc(f)).is_conditionally_complete()
    assert found > 20


def test_double_cylinder_counterexample_not_ccp():
    # MC(pt+pt -> pt) glued with itself over the open two-point part
    two = Poset.from_covers(["x", "y"], [])
    f = MonotoneMap(two, point(), {"x": "pt", "y": "pt"})
    m1 = transitive_closure(mc(f))
    m2 = transitive_closure(mc(f))
    a = SubposetMask(m1, ["x", "y"])
    b = SubposetMask(m2, ["x", "y"])
    suba, _ = m1.induced(a.mask)
    subb, _ = m2.induced(b.mask)
    h = MonotoneMap(suba, subb, {"x": "x", "y": "y"})
    out = transitive_closure(amalgam(m1, m2, a, b, h))
    assert not out.is_conditionally_complete()


def test_tmc_always_poset_and_closed_in_join():
    rng = random.Random(13)
    for _ in range(40):
        p = random_poset(rng, 4)
        q = random_poset(rng, 4)
        f = random_monotone_map(rng, p, q)
        if f is None:
            continue
        t = tmc(f)  # construction succeeding means it is a poset
        j = join(p, q)
        labs = set(t.labels)
        keep = 0
        for i, l in enumerate(j.labels):
            if l in labs:
                keep |= 1 << i
        assert SubposetMask(j, keep).is_closed()
        sub, _ = j.induced(keep)
        assert iso(sub, t)


def test_join_as_union_of_cylinders():
    # P*Q = MC(PxQ -> P) cup_{PxQ} MC(PxQ -> Q)
    rng = random.Random(14)
    for _ in range(15):
        p = random_poset(rng, 3)
        q = random_poset(rng, 3)
        pq = product(p, q)
        from posetcalc.ops import split_pair
        fp = MonotoneMap(pq, p, {l: split_pair(l)[0] for l in pq.labels})
        fq = MonotoneMap(pq, q, {l: split_pair(l)[1] for l in pq.labels})
        m1 = mc_poset(fp)
        m2 = mc_poset(fq)
        a = SubposetMask(m1, [l for l in pq.labels])
        b = SubposetMask(m2, [l for l in pq.labels])
        suba, _ = m1.induced(a.mask)
        subb, _ = m2.induced(b.mask)
        h = MonotoneMap(suba, subb, {l: l for l in suba.labels})
        glued = transitive_closure(amalgam(m1, m2, a, b, h))
        assert iso(glued, join(p, q))


def test_tmc_retraction_simple_cases():
    f = MonotoneMap.identity(point())
    t, l, r, h = tmc_retraction(f)
    assert t.n == 3 and l.n == 3
    assert r.is_isomorphism()

    two = Poset.from_covers(["x", "y"], [])
    f = MonotoneMap(two, point(), {"x": "pt", "y": "pt"})
    t, l, r, h = tmc_retraction(f)
    lp, emb = lmc_embedding(f)
    # r restricted to the embedded long cylinder is the identity
    back = r.compose(emb)
    assert back.table == tuple(range(lp.n))

    f = MonotoneMap(simplex("ab"), point(),
                    {"a": "pt", "b": "pt", "ab": "pt"})
    t, l, r, h = tmc_retraction(f)  # monotonicity is checked on construction


def test_tmc_retraction_needs_ccp_target():
    dig = Poset.from_covers(["x", "y", "e1", "e2"],
                            [("x", "e1"), ("x", "e2"),
                             ("y", "e1"), ("y", "e2")])
    with pytest.raises(ValueError):
        tmc_retraction(MonotoneMap.identity(dig))


def test_pullback_identity_and_closed():
    rng = random.Random(15)
    for _ in range(30):
        p = random_poset(rng, 4)
        q = random_poset(rng, 4)
        f = random_monotone_map(rng, p, q)
        if f is None:
            continue
        x, prj_p, prj_q = pullback(f, MonotoneMap.identity(q))
        assert iso(x, p)
        g = random_monotone_map(rng, random_poset(rng, 4), q)
        if g is None or not g.is_closed():
            continue
        x, phi, _ = pullback(f, g)
        assert phi.is_closed()


def test_pullback_of_mc_is_mc_of_pullback():
    rng = random.Random(16)
    done = 0
    for _ in range(80):
        p = random_poset(rng, 3)
        q = random_poset(rng, 3)
        q2 = random_poset(rng, 3)
        f = random_monotone_map(rng, p, q)
        psi = random_monotone_map(rng, q2, q)
        if f is None or psi is None or not psi.is_closed():
            continue
        done += 1
        prime, phi, _ = pullback(f, psi)
        # pull f back over the cylinder projection MC(psi) -> Q; the free
        # copy occupies the label positions after Q's
        mcp = mc_poset(psi)
        proj_table = {}
        for k, lab in enumerate(mcp.labels):
            proj_table[lab] = lab if k < q.n else q.labels[psi.table[k - q.n]]
        proj = MonotoneMap(mcp, q, proj_table)
        x, _, _ = pullback(f, proj)
        assert iso(x, mc_poset(phi))
        if done > 15:
            break
    assert done > 5


def test_hatcher_maps_of_simplicial_map():
    f = SIMPLICIAL_SURJ
    h = hatcher_map(f, "ad", "d")
    assert h("ab") == "b"
    assert h("abc") == "bc"
    h2 = hatcher_map(f, "ad", "a")
    assert set(h2.target.labels) == {"a"}
    ident = MonotoneMap.identity(simplex("ab"))
    h3 = hatcher_map(ident, "ab", "a")
    assert h3.source.n == 1 and h3.target.n == 1


def test_hatcher_composition_law():
    f = SIMPLICIAL_SURJ
    tgt = f.target
    for r in tgt.labels:
        for s in tgt.labels:
            for t in tgt.labels:
                if tgt.lt(s, r) and tgt.lt(t, s):
                    lhs = hatcher_map(f, r, t)
                    rhs = hatcher_map(f, s, t).compose(hatcher_map(f, r, s))
                    assert lhs.table == rhs.table


def test_hocolim_constant_diagram_over_point():
    p = simplex("ab")
    d = DiagramOverPoset(point(), {"pt": p}, {})
    out = transitive_closure(hocolim(d))
    assert iso(out, p)


def test_hocolim_reconstruction_simplicial():
    f = SIMPLICIAL_SURJ
    rebuilt, w = hocolim_reconstruct(f)
    assert w.is_isomorphism()
    assert rebuilt.n == 7


def test_conical_hocolim_is_mapping_cylinder():
    # contravariant diagram over C*Lambda equals MC of the induced map
    lam = Poset.from_covers(["l"], [])
    clam = dual_cone(lam)
    rng = random.Random(17)
    for _ in range(10):
        pl = random_poset(rng, 4)
        p0 = random_poset(rng, 4)
        f = random_monotone_map(rng, pl, p0)
        if f is None:
            continue
        d = DiagramOverPoset(clam, {"l": pl, "^0": p0}, {("l", "^0"): f},
                             "covariant")
        out = transitive_closure(hocolim(d))
        assert iso(out, transitive_closure(mc(f)))


def test_iterated_mc_of_closed_maps_is_poset():
    rng = random.Random(18)
    done = 0
    for _ in range(60):
        p2 = random_poset(rng, 3)
        p1 = random_poset(rng, 3)
        p0 = random_poset(rng, 3)
        f2 = random_monotone_map(rng, p2, p1)
        f1 = random_monotone_map(rng, p1, p0)
        if f2 is None or f1 is None:
            continue
        if not (f2.is_closed() and f1.is_closed()):
            continue
        done += 1
        assert iterated_mc([f2, f1]).is_partial_order()
    assert done > 5


def test_homma_factorization():
    f = SIMPLICIAL_SURJ
    factors = homma_factorization(f)
    assert len(factors) == f.target.n
    comp = factors[0]
    for g in factors[1:]:
        comp = g.compose(comp)
    assert comp.table == f.table
    big_fibers_total = 0
    for g in factors:
        assert g.is_full()
        big = [y for y in g.target.labels if g.fiber_mask(y).bit_count() > 1]
        assert len(big) <= 1
        big_fibers_total += len(big)
    assert big_fibers_total >= 1


def test_homma_on_injective_map():
    p = simplex("ab")
    q = simplex("abc")
    f = MonotoneMap(p, q, {"a": "a", "b": "b", "ab": "ab"})
    factors = homma_factorization(f)
    comp = factors[0]
    for g in factors[1:]:
        comp = g.compose(comp)
    assert comp.table == f.table
    for g in factors:
        for y in g.target.labels:
            assert g.fiber_mask(y).bit_count() <= 1
