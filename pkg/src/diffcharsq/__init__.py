"""Exact simplicial models of differential characters, cup-i products and Steenrod squares."""

from __future__ import annotations

from .circle_u1 import CircleMap, cs_product_quadrature, discrete_product_value, discretize_circle_map, q0_circle
from .cohomology import cohomology_group, homology_group, pair, uct_iota, uct_pi
from .complex_core import (
    Chain,
    Cochain,
    Ring,
    SimplicialComplex,
    VertexMap,
    build_space_with_projections,
    build_standard_space,
    coboundary,
    boundary,
    fundamental_cycle,
    load_complex,
    product_complex,
)
from .diagonal import cup, cup_i, cup_i_defect
from .diffchar import (
    CSCochain,
    CharacterClass,
    canonical_lift,
    classes_equal,
    cs_action,
    cs_differential,
    cup_character,
    evaluate_character,
    q_map,
    sl2z_defect,
    verify_main_theorem,
)
from .steenrod import is_spin, steenrod_square, stiefel_whitney_classes, verify_axioms, wu_classes

__version__ = "0.1.0"
