"""Exact jet computations for Weingarten line congruences and their umbilics."""

__version__ = "0.1.0"

from .series import Series2, s2_diff, s2_div, s2_invert_map, s2_mul, s2_subst
from .congruence import (
    CongruenceGerm,
    GraphGerm,
    discriminant,
    germ_from_derivatives,
    h_series,
    hw_identity_residual,
    normal_congruence_from_graph,
    ridge_invariants,
    shape_coefficients,
    subparabolic_invariants,
    w_series,
)
from .jets import (
    UmbilicNormalForm,
    check_wm0,
    example_class_checks,
    monomial_family,
    normalize_umbilic,
    solve_jet,
)
from .classify import classify_discriminant, nondegeneracy, ridge_limit_witness
from .bde import blow_up_analysis, integrate_configuration, principal_bde, slope_pair

__all__ = [
    "Series2",
    "s2_mul",
    "s2_diff",
    "s2_div",
    "s2_subst",
    "s2_invert_map",
    "CongruenceGerm",
    "GraphGerm",
    "germ_from_derivatives",
    "shape_coefficients",
    "discriminant",
    "w_series",
    "ridge_invariants",
    "subparabolic_invariants",
    "hw_identity_residual",
    "h_series",
    "normal_congruence_from_graph",
    "UmbilicNormalForm",
    "normalize_umbilic",
    "solve_jet",
    "check_wm0",
    "monomial_family",
    "example_class_checks",
    "nondegeneracy",
    "classify_discriminant",
    "ridge_limit_witness",
    "principal_bde",
    "slope_pair",
    "integrate_configuration",
    "blow_up_analysis",
]
