"""Named fixture generators for the command line and the test corpora."""

from __future__ import annotations

from .core import Poset
from .ops import FacetComplex, cube, product, simplex

# An 8-vertex dunce hat: a triangulated disk (nonagon boundary around an
# inner pentagon) with its boundary identified along the word a·a·a^{-1}.
# Its required properties (integrally acyclic, not collapsible, dual not
# constructible) are asserted in the test suite rather than trusted.
DUNCE_HAT_FACETS = (
    ("1", "2", "4"), ("2", "3", "4"), ("3", "4", "5"), ("1", "3", "5"),
    ("1", "2", "5"), ("2", "5", "6"), ("2", "3", "6"), ("1", "3", "6"),
    ("1", "6", "7"), ("1", "3", "7"), ("2", "3", "7"), ("2", "7", "8"),
    ("1", "2", "8"), ("1", "4", "8"), ("4", "5", "6"), ("4", "6", "7"),
    ("4", "7", "8"),
)

# The octahedron: antipodal pairs (0,3), (1,4), (2,5); facets are the
# triangles avoiding antipodal pairs.
OCTAHEDRON_FACETS = (
    ("0", "1", "2"), ("0", "1", "5"), ("0", "4", "2"), ("0", "4", "5"),
    ("3", "1", "2"), ("3", "1", "5"), ("3", "4", "2"), ("3", "4", "5"),
)


def dunce_hat() -> FacetComplex:
    return FacetComplex(DUNCE_HAT_FACETS)


def octahedron() -> FacetComplex:
    return FacetComplex(OCTAHEDRON_FACETS)


def boundary_simplex(n) -> Poset:
    """Face poset of the boundary of the n-simplex."""
    s = simplex([str(i) for i in range(n + 1)])
    sub, _ = s.induced(s.full_mask() & ~(1 << s.greatest()))
    return sub


def simplex_poset(n) -> Poset:
    return simplex([str(i) for i in range(n + 1)])


def cube_poset(n) -> Poset:
    return cube([str(i) for i in range(n)])


def prism() -> Poset:
    """The cell poset of a triangular prism (triangle times segment)."""
    return product(simplex("abc"), cube("0"))


def make_fixture(name, arg=None):
    """Fixture dispatch for the command line; returns a Poset or complex."""
    if name == "simplex":
        return simplex_poset(int(arg))
    if name == "boundary-simplex":
        return boundary_simplex(int(arg))
    if name == "cube":
        return cube_poset(int(arg))
    if name == "prism":
        return prism()
    if name == "octahedron":
        return octahedron()
    if name == "dunce-hat":
        return dunce_hat()
    raise ValueError("unknown fixture %r" % (name,))
