"""Space-time Galerkin boundary elements for the one-dimensional wave equation.

Two formulations of the direct boundary integral equation ``V w = (I/2 + K) g``
are provided on the lateral boundary of ``(0, L) x (0, T)``: the energetic
one and a coercive one built on the modified Hilbert transformation
``H_T``.  The :mod:`wavebem.spectral` module evaluates the constant that
governs the coercivity of the latter.
"""

from .assembly import (
    Formulation,
    GalerkinSystem,
    HTMethod,
    NumericalError,
    assemble_energetic,
    assemble_ht,
    assemble_rhs,
    build_system,
    dual_norm_gram,
    eoc,
    l2_error,
    project_Qh,
    solve,
)
from .cases import ManufacturedCase, case_singular, case_smooth, case_traveling, get_case
from .kernels import BACKEND
from .mesh import LateralMesh, Pair, PiecewiseConstant, PiecewiseLinear, ProblemGeometry, Side, uniform_mesh
from .operators import apply_dtV, apply_V, direct_rhs, interior_solution
from .piecewise import PiecewisePoly
from .spectral import CouplingMatrixSpec, b_coeff, conjectured_constant, figure1_sweep, lambda_max_Cm

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CouplingMatrixSpec",
    "Formulation",
    "GalerkinSystem",
    "HTMethod",
    "LateralMesh",
    "ManufacturedCase",
    "NumericalError",
    "Pair",
    "PiecewiseConstant",
    "PiecewiseLinear",
    "PiecewisePoly",
    "ProblemGeometry",
    "Side",
    "apply_V",
    "apply_dtV",
    "assemble_energetic",
    "assemble_ht",
    "assemble_rhs",
    "b_coeff",
    "build_system",
    "case_singular",
    "case_smooth",
    "case_traveling",
    "conjectured_constant",
    "direct_rhs",
    "dual_norm_gram",
    "eoc",
    "figure1_sweep",
    "get_case",
    "interior_solution",
    "l2_error",
    "lambda_max_Cm",
    "project_Qh",
    "solve",
    "uniform_mesh",
]
