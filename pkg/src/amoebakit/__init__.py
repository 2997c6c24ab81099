"""Amoebas, Ronkin functions and tropical degenerations of Laurent polynomials."""

from .amoeba import Box2D, assign_orders, complement_components, default_box, is_solid, raster_2d
from .degeneration import (
    convergence_sweep,
    hausdorff,
    rescaled_amoeba,
    sample_complex,
    solidness_sweep,
    subdivision_stability_sweep,
)
from .laurent import LaurentPolynomial, TorusPoint, format_laurent, parse_laurent, substitute_t
from .polytope import NewtonPolytope, classify_regime, convex_hull, is_maximally_sparse, newton_polytope
from .ronkin import QuadratureSpec, ronkin_estimate, ronkin_gradient, spine_constants
from .tropical import Lifting, corner_locus_2d, regular_subdivision, trop_eval

__version__ = "0.1.0"
