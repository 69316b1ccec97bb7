"""Certified solving of bivariate polynomial systems and topology of real plane curves."""

from .arith import Disk, Dyadic, DyadicComplex, Polydisk
from .bisolve import CommonFactorError, SolveResult, refine_solutions, solve
from .elim import resultant_modular
from .poly import IntPoly1, IntPoly2, parse_poly
from .postsolve import separating_form, sign_at_real_solutions, sign_at_solutions
from .topology import CurveGraph, curve_topology
from .uroots import isolate_int, isolate_oracle, refine, well_isolate

__version__ = "0.1.0"

__all__ = [
    "Disk",
    "Dyadic",
    "DyadicComplex",
    "Polydisk",
    "CommonFactorError",
    "SolveResult",
    "refine_solutions",
    "solve",
    "resultant_modular",
    "IntPoly1",
    "IntPoly2",
    "parse_poly",
    "separating_form",
    "sign_at_real_solutions",
    "sign_at_solutions",
    "CurveGraph",
    "curve_topology",
    "isolate_int",
    "isolate_oracle",
    "refine",
    "well_isolate",
]
