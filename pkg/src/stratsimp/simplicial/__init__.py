"""Finite simplicial sets in normal form and the constructions built on them."""

from .category import FiniteCategory, nerve, nerve_simplex
from .constructions import (
    colimit,
    disjoint_union,
    fiber_product,
    make_generator,
    normalize_pair,
    poset_nerve,
    product,
    product_map,
    product_nf,
    projections,
    pushout,
    simplex,
    simplex_subcomplex,
)
from .core import SimplicialMap, SimplicialSet, empty_set, identity_map, inclusion
from .hom import HomSet, ex, mapping_space, sd_simplex, simplex_map
from .ops import chain_nf
from .search import enumerate_maps, first_map, has_lift, iso_check

__all__ = [
    "FiniteCategory",
    "HomSet",
    "SimplicialMap",
    "SimplicialSet",
    "chain_nf",
    "colimit",
    "disjoint_union",
    "empty_set",
    "enumerate_maps",
    "ex",
    "fiber_product",
    "first_map",
    "has_lift",
    "identity_map",
    "inclusion",
    "iso_check",
    "make_generator",
    "mapping_space",
    "nerve",
    "nerve_simplex",
    "normalize_pair",
    "poset_nerve",
    "product",
    "product_map",
    "product_nf",
    "projections",
    "pushout",
    "sd_simplex",
    "simplex",
    "simplex_map",
    "simplex_subcomplex",
]
