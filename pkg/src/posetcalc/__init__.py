"""Finite poset calculus and certificate-search engine."""

from .core import (CycleError, MonotoneMap, Poset, Preposet, SubposetMask,
                   transitive_closure)
from .isomorph import are_isomorphic, find_isomorphism
from .ops import (FacetComplex, barycentric, barycentric_handles, cone,
                  cojoin, cube, canonical, dual_cone, empty, handles,
                  handle_cocore_map, handle_core_map, join, link, mirror,
                  point, powerset, prejoin, product, simplex, star)

__version__ = "0.1.0"

__all__ = [
    "CycleError", "MonotoneMap", "Poset", "Preposet", "SubposetMask",
    "transitive_closure", "are_isomorphic", "find_isomorphism",
    "FacetComplex", "barycentric", "barycentric_handles", "cone", "cojoin",
    "cube", "canonical", "dual_cone", "empty", "handles",
    "handle_cocore_map", "handle_core_map", "join", "link", "mirror",
    "point", "powerset", "prejoin", "product", "simplex", "star",
]
