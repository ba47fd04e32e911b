"""Shared corpus builders and generators for the test suite."""

import random
from itertools import combinations, permutations

import pytest

from posetcalc.core import MonotoneMap, Poset
from posetcalc.ops import FacetComplex


def random_poset(rng, max_n=6, lo=1, density=0.4):
    n = rng.randrange(lo, max_n + 1)
    labels = [chr(97 + i) for i in range(n)]
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(n)
             if i < j and rng.random() < density]
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


def random_simplicial_map(rng, max_vertices=5, max_target_vertices=4):
    """A random complex with a random vertex map; returns the induced
    simplicial map between face posets."""
    k = random_complex(rng, max_vertices)
    vs = sorted(k.vertices)
    tgt_vs = [chr(112 + i) for i in range(max_target_vertices)]
    phi = {v: rng.choice(tgt_vs) for v in vs}
    image_facets = {frozenset(phi[v] for v in f) for f in k.facets}
    maximal = [f for f in image_facets
               if not any(f < g for g in image_facets)]
    image = FacetComplex(maximal)
    from posetcalc.ops import face_label
    table = {}
    src = k.face_poset()
    tgt = image.face_poset()
    for f in k.faces():
        table[face_label(f)] = face_label(frozenset(phi[v] for v in f))
    return MonotoneMap(src, tgt, table)


def random_complex(rng, max_vertices=5):
    n = rng.randrange(1, max_vertices + 1)
    vs = [chr(97 + i) for i in range(n)]
    pool = []
    for size in range(1, n + 1):
        pool.extend(frozenset(c) for c in combinations(vs, size))
    chosen = {f for f in pool if rng.random() < 0.3}
    chosen.add(frozenset(rng.sample(vs, rng.randrange(1, n + 1))))
    maximal = [f for f in chosen if not any(f < g for g in chosen)]
    return FacetComplex(maximal)


def _canonical_facets(facets, n):
    """Canonical form of a facet family under vertex permutations."""
    best = None
    verts = list(range(n))
    for perm in permutations(verts):
        image = tuple(sorted(tuple(sorted(perm[v] for v in f))
                             for f in facets))
        if best is None or image < best:
            best = image
    return best


def _antichains(universe):
    """All nonempty antichains (facet families) over the given face pool."""
    out = []

    def grow(start, current):
        if current:
            out.append(tuple(current))
        for k in range(start, len(universe)):
            f = universe[k]
            if any(f <= g or g <= f for g in current):
                continue
            current.append(f)
            grow(k + 1, current)
            current.pop()

    grow(0, [])
    return out


def complexes_up_to_5_vertices():
    """All simplicial complexes on at most five vertices, up to isomorphism,
    as facet tuples over integer vertices."""
    universe = []
    for size in range(1, 6):
        universe.extend(frozenset(c) for c in combinations(range(5), size))
    seen = set()
    out = []
    for facets in _antichains(universe):
        verts = sorted(set().union(*facets))
        relabel = {v: i for i, v in enumerate(verts)}
        norm = [frozenset(relabel[v] for v in f) for f in facets]
        key = _canonical_facets(norm, len(verts))
        if key not in seen:
            seen.add(key)
            out.append(key)
    return sorted(out, key=lambda fs: (sum(len(f) for f in fs), fs))


@pytest.fixture(scope="session")
def small_complex_corpus():
    return complexes_up_to_5_vertices()


def complex_from_key(key):
    return FacetComplex([[str(v) for v in f] for f in key])
