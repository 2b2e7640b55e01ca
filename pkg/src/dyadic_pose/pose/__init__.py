"""Relative pose solvers over truncated 2-adic integers."""

from .epipolar import (
    Correspondence,
    EssentialCandidate,
    build_epipolar_matrix,
    candidate_residuals,
    epipolar_row,
    equal_up_to_unit,
    rank2_witness,
)
from .fivepoint import HiddenVarSystem, build_hidden_var_system, solve_5pt
from .linear import (
    CubicCoeffs,
    PencilBasis,
    cubic_root_conditions,
    lift_pencil,
    pencil_cubic,
    solve_7pt,
    solve_8pt,
)
from .matrix3 import skew, trace_condition
from .polymat import det_poly

SOLVERS = {"8pt": solve_8pt, "7pt": solve_7pt, "5pt": solve_5pt}
POINTS = {"8pt": 8, "7pt": 7, "5pt": 5}

__all__ = [
    "Correspondence", "CubicCoeffs", "EssentialCandidate", "HiddenVarSystem", "PencilBasis",
    "POINTS", "SOLVERS", "build_epipolar_matrix", "build_hidden_var_system", "candidate_residuals",
    "cubic_root_conditions", "det_poly", "epipolar_row", "equal_up_to_unit", "lift_pencil",
    "pencil_cubic", "rank2_witness", "skew", "solve_5pt", "solve_7pt", "solve_8pt",
    "trace_condition",
]
