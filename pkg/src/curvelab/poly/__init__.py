"""Exact and approximate polynomial arithmetic."""

from .approx import (
    ApproxPoly,
    InsufficientPrecision,
    div_rem_approx,
    kronecker_mul,
    mul_approx,
    newton_inverse,
    remainder_norm_bound,
)
from .exact import (
    IntPoly1,
    IntPoly2,
    cauchy_root_bound,
    gcd_1,
    lcf_at_shear,
    mul_exact,
    reverse,
    shear,
    sqf_list_1,
    squarefree_part_1,
)
from .multipoint import (
    CoeffOracle,
    ExactOracle,
    FunctionOracle,
    SubproductTree,
    build_subproduct_tree,
    eval_coeff_views,
    multipoint_eval,
)
from .parse import PolySyntaxError, format_poly, parse_poly

__all__ = [
    "ApproxPoly",
    "InsufficientPrecision",
    "div_rem_approx",
    "kronecker_mul",
    "mul_approx",
    "newton_inverse",
    "remainder_norm_bound",
    "IntPoly1",
    "IntPoly2",
    "cauchy_root_bound",
    "gcd_1",
    "lcf_at_shear",
    "mul_exact",
    "reverse",
    "shear",
    "sqf_list_1",
    "squarefree_part_1",
    "CoeffOracle",
    "ExactOracle",
    "FunctionOracle",
    "SubproductTree",
    "build_subproduct_tree",
    "eval_coeff_views",
    "multipoint_eval",
    "PolySyntaxError",
    "format_poly",
    "parse_poly",
]
