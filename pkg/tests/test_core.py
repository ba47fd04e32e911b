import pytest

from posetcalc.core import (CycleError, MonotoneMap, Poset, Preposet,
                            SubposetMask, transitive_closure)
from posetcalc.isomorph import find_isomorphism
from posetcalc.ops import product, simplex


def chain(labels):
    return Poset.from_covers(labels, list(zip(labels, labels[1:])))


def antichain(labels):
    return Poset.from_covers(labels, [])


DELTA1 = simplex("ab")
DELTA2 = simplex("abc")


def boundary_complex(p):
    sub, _ = p.induced(p.boundary())
    return sub


def test_transitive_closure_chain():
    pre = Preposet("abc", [("a", "b"), ("b", "c")])
    p = transitive_closure(pre)
    assert p.le("a", "c")
    assert p.cover_labels() == [("a", "b"), ("b", "c")]


def test_transitive_closure_discrete():
    pre = Preposet("ab", [])
    p = transitive_closure(pre)
    assert p.cover_labels() == []


def test_closure_collapses_redundant_arrow():
    pre = Preposet("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    p = transitive_closure(pre)
    assert p.cover_labels() == [("a", "b"), ("b", "c")]


def test_preposet_rejects_cycle_with_witness():
    with pytest.raises(CycleError) as e:
        Preposet("ab", [("a", "b"), ("b", "a")])
    assert set(e.value.cycle) == {"a", "b"}


def test_from_covers_rejects_redundant_pair():
    with pytest.raises(ValueError):
        Poset.from_covers("abc", [("a", "b"), ("b", "c"), ("a", "c")])


def test_dual_involution():
    p = DELTA2
    q = p.dual().dual()
    assert q == p
    d = DELTA1.dual()
    assert d.greatest() is None
    assert d.least() == d._ix("ab")


def test_boundary_of_own_dual_selfdual():
    b = boundary_complex(DELTA2)
    assert find_isomorphism(b, b.dual()) is not None


def test_down_up_closure_hull():
    p = DELTA2
    assert len(p.down_set("abc")) == 7
    assert sorted(p.up_set("a").labels()) == ["a", "ab", "abc", "ac"]
    b = boundary_complex(DELTA2)
    cl = b.closure_of(["ab", "bc"])
    assert sorted(cl.labels()) == ["a", "ab", "b", "bc", "c"]


def test_boundary_examples():
    # boundary of a cone is everything below the apex
    assert sorted(DELTA2.boundary().labels()) == ["a", "ab", "ac", "b", "bc", "c"]
    b = boundary_complex(DELTA2)
    assert b.boundary().mask == 0
    assert sorted(DELTA1.boundary().labels()) == ["a", "b"]


def test_closed_open_predicates():
    p = DELTA2
    bd = p.boundary()
    assert bd.is_closed()
    top = SubposetMask(p, ["abc"])
    assert top.is_open() and not top.is_closed()
    m = SubposetMask(p, ["a", "ab"])
    assert not m.is_closed() and not m.is_open()


def test_fullness():
    p = DELTA2
    assert not p.boundary().is_full()
    assert SubposetMask(p, ["a"]).is_full()
    assert SubposetMask(p, ["abc"]).is_full()  # open subposets are full


def test_conditional_completeness():
    assert DELTA2.is_conditionally_complete()
    assert chain("abc").is_conditionally_complete()
    digon = Poset.from_covers(["x", "y", "e1", "e2"],
                              [("x", "e1"), ("x", "e2"),
                               ("y", "e1"), ("y", "e2")])
    assert not digon.is_conditionally_complete()
    assert (digon.is_conditionally_complete(method="exhaustive")
            == digon.is_conditionally_complete())


def test_pairwise_matches_exhaustive_on_small_posets():
    import random
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randrange(1, 7)
        labels = [chr(97 + i) for i in range(n)]
        pairs = [(labels[i], labels[j]) for i in range(n) for j in range(n)
                 if i < j and rng.random() < 0.4]
        p = Poset.from_relation(labels, pairs)
        assert (p.is_conditionally_complete()
                == p.is_conditionally_complete(method="exhaustive"))


def test_atoms_and_atomic():
    assert sorted(DELTA2.atoms().labels()) == ["a", "b", "c"]
    assert not chain("abc").is_atomic()
    assert DELTA2.is_atomic()


def test_atom_embedding_boundary_simplex():
    b = boundary_complex(DELTA2)
    m = b.atom_embedding()
    assert m.is_embedding()
    # lands in the simplex on {a,b,c}, hitting everything except the top
    assert m.target.n == 7
    assert len(set(m.table)) == 6


def test_linear_extension():
    assert DELTA1.linear_extension() == ["a", "b", "ab"]
    assert antichain(["b", "a"]).linear_extension() == ["a", "b"]
    ext = DELTA2.linear_extension()
    assert ext == ["a", "b", "c", "ab", "ac", "bc", "abc"]


def test_isomorphism_basic():
    from posetcalc.ops import cube
    i1 = cube("x")
    assert find_isomorphism(DELTA1, i1) is not None
    assert find_isomorphism(DELTA1, chain("abc")) is None
    w = find_isomorphism(DELTA2, DELTA2.dual().dual())
    assert w is not None and w.is_isomorphism()


def test_map_predicates():
    p = DELTA1
    pp = product(p, p)
    diag = MonotoneMap(p, pp, {l: "(%s,%s)" % (l, l) for l in p.labels})
    assert not diag.is_closed()
    ident = MonotoneMap.identity(DELTA2)
    assert ident.is_closed() and ident.is_open() and ident.is_embedding()
    # a simplicial map is full
    f = MonotoneMap(DELTA2, DELTA1,
                    {"a": "a", "b": "b", "c": "b", "ab": "ab", "ac": "ab",
                     "bc": "b", "abc": "ab"})
    assert f.is_full()


def test_monotone_map_rejects_nonmonotone():
    with pytest.raises(ValueError):
        MonotoneMap(chain("ab"), chain("ab"), {"a": "b", "b": "a"})


def test_chain_count_euler():
    # order complex of a 3-chain is a 2-simplex: chi = 1
    assert chain("abc").chain_count_euler() == 1
    b = boundary_complex(DELTA2)
    assert b.chain_count_euler() == 0  # circle
