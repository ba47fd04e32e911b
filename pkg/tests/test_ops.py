import random

import pytest

from posetcalc.core import MonotoneMap, Poset
from posetcalc.isomorph import find_isomorphism
from posetcalc.ops import (FacetComplex, barycentric, barycentric_handles,
                           cone, cojoin, cube, canonical, dual_cone, empty,
                           handles, handle_cocore_map, handle_core_map, join,
                           link, mirror, mirror_vertices, point, powerset,
                           prejoin, product, simplex, star)


def iso(p, q):
    return find_isomorphism(p, q) is not None


def boundary_complex(p):
    sub, _ = p.induced(p.boundary())
    return sub


def random_poset(rng, max_n=5):
    n = rng.randrange(1, max_n + 1)
    labels = [chr(97 + i) for i in range(n)]
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(n)
             if i < j and rng.random() < 0.4]
    return Poset.from_relation(labels, pairs)


S0 = Poset.from_covers(["u", "v"], [])


def test_cone_and_dual_cone():
    assert len(cone(empty())) == 1
    assert iso(cone(boundary_complex(simplex("abc"))), simplex("abc"))
    rng = random.Random(1)
    for _ in range(20):
        p = random_poset(rng)
        assert iso(dual_cone(p), cone(p.dual()).dual())


def test_prejoin():
    rng = random.Random(2)
    for _ in range(20):
        p = random_poset(rng)
        assert iso(prejoin(p, point()), cone(p))
        assert iso(prejoin(point(), p), dual_cone(p))
    pj = prejoin(S0, S0)
    assert len(pj) == 4
    assert len(pj.maximal_mask().bit_count() * [0]) == 2
    assert pj.maximal_mask().bit_count() == 2
    assert pj.minimal_mask().bit_count() == 2


def test_prejoin_associative():
    rng = random.Random(3)
    for _ in range(10):
        p, q, r = (random_poset(rng, 4) for _ in range(3))
        assert iso(prejoin(prejoin(p, q), r), prejoin(p, prejoin(q, r)))


def test_product():
    two = powerset("x")
    assert iso(product(two, two), powerset("xy"))
    rng = random.Random(4)
    for _ in range(10):
        q = random_poset(rng)
        assert iso(product(point(), q), q)
    assert len(product(cube("0"), cube("0"))) == 9
    assert iso(product(cube("0"), cube("0")), cube("01"))


def test_join():
    assert iso(join(simplex("ab"), simplex("cd")), simplex("abcd"))
    rng = random.Random(5)
    for _ in range(10):
        p, q = random_poset(rng, 4), random_poset(rng, 4)
        assert iso(join(p, q), join(q, p))
        # van Kampen duality
        assert iso(product(cone(p), cone(q)), cone(cojoin(p, q)))
        # C*(P*Q) = C*P x C*Q
        assert iso(dual_cone(join(p, q)), product(dual_cone(p), dual_cone(q)))
    j = join(S0, S0)
    assert len(j) == 8
    assert iso(j, boundary_complex(cube("01")).dual())


def test_join_preserves_conditional_completeness():
    rng = random.Random(6)
    found = 0
    for _ in range(40):
        p, q = random_poset(rng, 4), random_poset(rng, 4)
        if p.is_conditionally_complete() and q.is_conditionally_complete():
            found += 1
            assert join(p, q).is_conditionally_complete()
    assert found > 5


def test_star_link():
    d2 = simplex("abc")
    lk = link(d2, "a")
    sub, _ = d2.induced(lk)
    assert iso(sub, simplex("bc"))
    st = star(boundary_complex(d2), "a")
    assert sorted(st.labels()) == ["a", "ab", "ac", "b", "c"]
    # star closed, link open
    assert st.is_closed()
    assert lk.is_open()


def test_link_of_product_point():
    p = simplex("ab")
    q = simplex("cd")
    pq = product(p, q)
    lk = link(pq, "(a,c)")
    sub, _ = pq.induced(lk)
    lp, _ = p.induced(link(p, "a"))
    lq, _ = q.induced(link(q, "c"))
    assert iso(sub, join(lp, lq))


def test_barycentric():
    b = barycentric(simplex("ab"))
    assert len(b) == 5
    assert iso(barycentric(point()), point())
    rng = random.Random(7)
    for _ in range(10):
        p, q = random_poset(rng, 3), random_poset(rng, 3)
        assert iso(barycentric(prejoin(p, q)),
                   join(barycentric(p), barycentric(q)))


def test_canonical():
    assert iso(canonical(powerset("x")), simplex("ab"))
    rng = random.Random(8)
    for _ in range(10):
        p = random_poset(rng, 4)
        assert iso(canonical(p.dual()), canonical(p))
    for _ in range(6):
        p, q = random_poset(rng, 3), random_poset(rng, 3)
        assert iso(canonical(product(p, q)),
                   product(canonical(p), canonical(q)))


def test_standard_models():
    assert len(simplex("012")) == 7
    assert len(cube("01")) == 9
    assert iso(powerset("0"), Poset.from_covers("ab", [("a", "b")]))
    assert iso(cube("012"), product(cube("0"), cube("01")))


def test_facet_complex():
    k = FacetComplex([["a", "b", "c"]])
    assert iso(k.face_poset(), simplex("abc"))
    with pytest.raises(ValueError):
        FacetComplex([["a", "b"], ["a"]])
    with pytest.raises(ValueError):
        FacetComplex([[]])


def test_mirror_two_points():
    k = FacetComplex([["0"], ["1"]])
    q = mirror(k)
    assert iso(q, boundary_complex(cube("01")))


def test_mirror_point():
    k = FacetComplex([["0"]])
    q = mirror(k)
    assert iso(q, cube("0"))


def test_mirror_links():
    k = FacetComplex([["0", "1"], ["1", "2"]])  # a path
    q = mirror(k)
    kp = k.face_poset()
    verts = mirror_vertices(q)
    assert len(verts) == 2 ** 3
    for v in verts:
        sub, _ = q.induced(link(q, v))
        assert iso(sub, kp)


def test_handles_point():
    p = point()
    assert iso(handles(p), p)
    r = handle_core_map(p)
    assert r.table == (0,)


def test_handle_maps_monotone_and_projections():
    d1 = simplex("ab")
    r = handle_core_map(d1)
    rb = handle_cocore_map(d1)
    h = r.source
    # maximal cones of h(X) are the handles h_sigma = [s,s]*
    for s in d1.labels:
        m = h.down_set("[%s,%s]" % (s, s))
        sub, keep = h.induced(m)
        dn, _ = d1.induced(d1.dn[d1._ix(s)])
        up, _ = d1.induced(d1.up[d1._ix(s)])
        assert iso(sub, product(dn, up.dual()))
    assert rb.target == d1.dual()


def test_barycentric_handles():
    p = simplex("ab")
    h = barycentric_handles(p)
    assert len(h) == 5
    assert iso(h, barycentric(p).dual())
