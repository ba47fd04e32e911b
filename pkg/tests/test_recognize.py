import random

from conftest import random_monotone_map, random_poset

from posetcalc.core import MonotoneMap, Poset, SubposetMask
from posetcalc.fixtures import boundary_simplex, cube_poset, dunce_hat
from posetcalc.ops import (FacetComplex, barycentric, canonical, cone, cube,
                           dual_cone, link, product, simplex)
from posetcalc.recognize import (canonical_interval_test, is_ball,
                                 is_cell_complex, is_codim_one,
                                 is_cubosimplicial, is_cubical,
                                 is_filtration_map, is_flag, is_manifold,
                                 is_nonsingular, is_pseudo_manifold, is_pure,
                                 is_pure_codim_one, is_pure_filtration_map,
                                 is_simple, is_simplicial, is_sphere)

DIGON = Poset.from_covers(["x", "y", "e1", "e2"],
                          [("x", "e1"), ("x", "e2"),
                           ("y", "e1"), ("y", "e2")])


def test_is_simplicial():
    assert is_simplicial(simplex("abcd")).is_yes
    assert is_simplicial(boundary_simplex(2)).is_yes
    rng = random.Random(31)
    for _ in range(10):
        assert is_simplicial(barycentric(random_poset(rng, 4))).is_yes
    assert is_simplicial(cube("01")).is_no  # the top cone is a square
    assert is_simplicial(DIGON).is_no  # not conditionally complete


def test_is_cubical():
    assert is_cubical(cube_poset(1)).is_yes
    assert is_cubical(cube_poset(2)).is_yes
    assert is_cubical(cube_poset(3)).is_yes
    assert is_cubical(simplex("abc")).is_no


def test_is_cubosimplicial_fibers():
    f = MonotoneMap(simplex("abc"), simplex("ad"),
                    {"a": "a", "b": "d", "c": "d", "ab": "ad", "ac": "ad",
                     "bc": "d", "abc": "ad"})
    for y in f.target.labels:
        sub, _ = f.source.induced(f.fiber_mask(y))
        assert is_cubosimplicial(sub).is_yes
    assert is_cubosimplicial(product(simplex("ab"), simplex("cd"))).is_yes


def test_is_simple():
    assert is_simple(simplex("abc")).is_yes
    assert is_simple(cube_poset(2)).is_yes
    assert is_simple(dual_cone(boundary_simplex(2))).is_yes
    # simple iff the canonical subdivision is cubical, on random posets
    rng = random.Random(32)
    done = 0
    for _ in range(40):
        p = random_poset(rng, 5)
        if not p.is_conditionally_complete():
            continue
        done += 1
        assert is_simple(p).is_yes == is_cubical(canonical(p)).is_yes
    assert done > 10


def test_is_flag():
    assert is_flag(barycentric(simplex("abc"))).is_yes
    assert is_flag(boundary_simplex(2)).is_no  # empty triangle
    assert is_flag(simplex("abc")).is_yes


def test_is_nonsingular():
    assert is_nonsingular(simplex("abcd")).is_yes
    tri = Poset.from_covers(["a", "m", "t"], [("a", "m"), ("m", "t")])
    assert is_nonsingular(tri).is_no


def test_is_pure():
    assert is_pure(boundary_simplex(2)).is_yes
    mixed = FacetComplex([["a", "b", "c"], ["c", "d"]]).face_poset()
    assert is_pure(mixed).is_no


def test_codim_one():
    d2 = simplex("abc")
    bd = d2.boundary()
    assert is_codim_one(bd).is_yes
    assert is_pure_codim_one(bd).is_yes
    vertex = SubposetMask(d2, ["a"])
    assert is_codim_one(vertex).is_no
    # everything is codimension one in the cone over it
    rng = random.Random(33)
    for _ in range(10):
        p = random_poset(rng, 5)
        c = cone(p)
        m = SubposetMask(c, p.labels)
        assert is_codim_one(m).is_yes


def test_filtration_maps():
    ident = MonotoneMap.identity(simplex("abc"))
    assert is_filtration_map(ident).is_yes
    # the paper's four-element example: collapse b onto d
    p = Poset.from_covers(["a", "b", "c", "d"],
                          [("a", "b"), ("a", "c"), ("c", "d")])
    q_sub, _ = p.induced(p._mask_of(["a", "c", "d"]))
    f = MonotoneMap(p, q_sub, {"a": "a", "b": "d", "c": "c", "d": "d"})
    assert is_filtration_map(f).is_yes
    # constant map: the empty preimage is vacuously of codimension one
    const = MonotoneMap(simplex("ab"), Poset(("pt",), set()),
                        {"a": "pt", "b": "pt", "ab": "pt"})
    assert is_filtration_map(const).is_yes


def test_filtration_maps_are_open():
    rng = random.Random(34)
    done = 0
    for _ in range(150):
        p = random_poset(rng, 5)
        q = random_poset(rng, 4)
        f = random_monotone_map(rng, p, q)
        if f is None:
            continue
        if is_filtration_map(f).is_yes:
            done += 1
            assert f.is_open()
    assert done > 10


def test_filtration_composition():
    rng = random.Random(35)
    done = 0
    for _ in range(300):
        p = random_poset(rng, 4)
        q = random_poset(rng, 4)
        r = random_poset(rng, 4)
        f = random_monotone_map(rng, p, q)
        g = random_monotone_map(rng, q, r)
        if f is None or g is None:
            continue
        if is_filtration_map(f).is_yes and is_filtration_map(g).is_yes:
            done += 1
            assert is_filtration_map(g.compose(f)).is_yes
    assert done > 10


def test_spheres_low_dim():
    assert is_sphere(Poset((), set())).is_yes  # the (-1)-sphere
    assert is_sphere(Poset.from_covers(["x", "y"], [])).is_yes
    assert is_sphere(boundary_simplex(2)).is_yes
    assert is_sphere(boundary_simplex(3)).is_yes
    assert is_sphere(DIGON).is_yes  # the digon circle
    assert is_sphere(simplex("ab")).is_no
    bd = cube_poset(2).boundary()
    sub, _ = cube_poset(2).induced(bd.mask)
    assert is_sphere(sub).is_yes


def test_sphere_high_dim_certificate():
    v = is_sphere(boundary_simplex(4))
    assert v.is_yes and v.witness["dim"] == 3


def test_dunce_hat_not_a_sphere():
    p = dunce_hat().face_poset()
    assert is_sphere(p).is_no


def test_balls():
    assert is_ball(simplex("abc")).is_yes
    assert is_ball(simplex("a")).is_yes
    assert is_ball(boundary_simplex(2)).is_no
    path = FacetComplex([["a", "b"], ["b", "c"]]).face_poset()
    assert is_ball(path).is_yes
    assert is_ball(simplex("abcd")).is_yes  # 3-ball via the cone route


def test_cell_complex():
    assert is_cell_complex(simplex("abc")).is_yes
    assert is_cell_complex(cube_poset(2)).is_yes
    assert is_cell_complex(boundary_simplex(3)).is_yes
    assert is_cell_complex(DIGON).is_yes
    tri = Poset.from_covers(["a", "m", "t"], [("a", "m"), ("m", "t")])
    assert is_cell_complex(tri).is_no  # edge with a single endpoint
    assert is_cell_complex(simplex("abcde")).is_yes  # needs the 3-sphere


def test_manifolds():
    d2 = simplex("abc")
    assert is_manifold(d2, SubposetMask(d2, d2.boundary().mask)).is_yes
    b3 = boundary_simplex(3)
    assert is_manifold(b3, SubposetMask(b3, 0)).is_yes
    assert is_manifold(b3, SubposetMask(b3, ["0"])).is_no
    dh = dunce_hat().face_poset()
    assert is_manifold(dh, SubposetMask(dh, 0)).is_no


def test_pseudo_manifold():
    assert is_pseudo_manifold(boundary_simplex(3)).is_yes
    assert is_pseudo_manifold(dual_cone(boundary_simplex(2))).is_yes
    dh = dunce_hat().face_poset()
    assert is_pseudo_manifold(dh).is_no  # boundary word wraps three facets


def test_cubical_links_are_simplicial():
    for n in (2, 3):
        q = cube_poset(n)
        for x in q.labels:
            sub, _ = q.induced(link(q, x))
            if sub.n:
                assert is_simplicial(sub).is_yes


def test_canonical_interval_test():
    assert canonical_interval_test(boundary_simplex(2)).is_yes
    assert canonical_interval_test(simplex("abc")).is_yes
