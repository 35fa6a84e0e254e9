"""Galerkin assembly, solution and error evaluation.

Unknowns are piecewise constant densities, ordered side ``x = 0`` first.
Matrix entries follow ``A[i, j] = a(trial_j, test_i)``.

Two bilinear forms are available:

* energetic, ``a(w, v) = <v, d/dt V w>``; its entries are element overlaps
  (same side) and overlaps with elements delayed by ``L`` (other side);
* modified Hilbert, ``a(w, v) = <v, H_T V w>``.  With ``V phi_j`` on a side
  equal to half the antiderivative of an indicator ``1_J``, every entry is
  ``-1/(2 pi)`` times the integral of the log-tan kernel over the rectangle
  ``tau_i x J``.  The same entries are also available from truncated
  quarter-wave Fourier series, which serves as an independent check.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .cases import ManufacturedCase
from .fourier import default_truncation, frequencies, sine_table
from .linalg import lu_solve, tridiag_solve
from .mesh import LateralMesh, Pair, PiecewiseConstant, PiecewiseLinear, Side, density_from_vector
from .operators import direct_rhs
from .piecewise import union_breaks

logger = logging.getLogger(__name__)

__all__ = [
    "Formulation",
    "HTMethod",
    "GalerkinSystem",
    "NumericalError",
    "assemble_energetic",
    "assemble_ht",
    "assemble_matrix",
    "project_Qh",
    "assemble_rhs",
    "build_system",
    "solve",
    "l2_error",
    "eoc",
    "dual_norm_gram",
]

PROJECTION_ORDER = 10
ERROR_ORDER = 8
FOURIER_RTOL = 1e-10
FOURIER_K_MAX = 1 << 22
_ENTRY_CHUNK = 1 << 18
_K_CHUNK = 1 << 14


class NumericalError(ArithmeticError):
    pass


class Formulation(str, enum.Enum):
    ENERGETIC = "energetic"
    HT = "ht"


class HTMethod(str, enum.Enum):
    KERNEL = "kernel"
    FOURIER = "fourier"


@dataclass(frozen=True)
class GalerkinSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    mesh: LateralMesh
    formulation: Formulation

    def __post_init__(self):
        n = self.mesh.ndof
        if self.matrix.shape != (n, n) or self.rhs.shape != (n,):
            raise ValueError(f"system of size {self.matrix.shape}/{self.rhs.shape} for {n} unknowns")
        if not (np.all(np.isfinite(self.matrix)) and np.all(np.isfinite(self.rhs))):
            raise NumericalError("non-finite entries in Galerkin system")


# ----------------------------------------------------------------------
# geometry of trial supports
# ----------------------------------------------------------------------
def _trial_windows(mesh: LateralMesh):
    """Support of ``d/dt (V phi_j)`` seen from each test element.

    Returns test ends ``a, b`` (shape ``(n,)``) and trial windows ``c, d``
    (shape ``(n, n)``).  Windows on the other side are delayed by ``L`` and
    clipped to ``[0, T]``; empty windows have ``c == d == T``.
    """
    L, T = mesh.geometry.L, mesh.geometry.T
    a, b, on_ell = mesh.elements()
    cross = on_ell[:, None] != on_ell[None, :]
    shift = np.where(cross, L, 0.0)
    c = np.minimum(a[None, :] + shift, T)
    d = np.minimum(b[None, :] + shift, T)
    return a, b, c, d


def _overlap(a, b, c, d):
    return np.maximum(np.minimum(b, d) - np.maximum(a, c), 0.0)


def assemble_energetic(mesh: LateralMesh) -> np.ndarray:
    """Exact matrix of ``<v, d/dt V w>``: half the overlap of test and delayed trial."""
    a, b, c, d = _trial_windows(mesh)
    return 0.5 * _overlap(a[:, None], b[:, None], c, d)


# ----------------------------------------------------------------------
# modified Hilbert formulation
# ----------------------------------------------------------------------
def _kernel_rectangles(a, b, c, d, T) -> np.ndarray:
    """Vectorised log-tan rectangle integrals, chunked."""
    a, b, c, d = np.broadcast_arrays(a, b, c, d)
    shape = a.shape
    a, b, c, d = (np.ascontiguousarray(v).ravel() for v in (a, b, c, d))
    out = np.empty(a.size)
    for lo in range(0, a.size, _ENTRY_CHUNK):
        sl = slice(lo, lo + _ENTRY_CHUNK)
        out[sl] = kernels.rect_log_tan(a[sl], b[sl], c[sl], d[sl], T)
    if not np.all(np.isfinite(out)):
        raise NumericalError("kernel quadrature produced non-finite values")
    return out.reshape(shape)


def _fourier_block(test_nodes, trial_nodes, weights, T, k_lo, k_hi):
    """Partial sum over ``k_lo <= k < k_hi`` of ``weights(omega_k) S_test S_trial^T``.

    ``S`` are element sine differences; the sum is formed on nodal sine
    tables and differenced once at the end.  Identical test and trial nodes
    use a symmetric product.
    """
    same = test_nodes is trial_nodes
    acc = np.zeros((test_nodes.size, trial_nodes.size))
    for lo in range(k_lo, k_hi, _K_CHUNK):
        n = min(_K_CHUNK, k_hi - lo)
        wk = weights(frequencies(n, lo))
        St = sine_table(test_nodes, lo, n, T)
        if same:
            X = St * np.sqrt(wk)
            acc += X @ X.T
        else:
            acc += (St * wk) @ sine_table(trial_nodes, lo, n, T).T
    return np.diff(np.diff(acc, axis=0), axis=1)


def _fourier_bilinear(test_nodes, trial_nodes, weights, T, K0, rtol=FOURIER_RTOL, K_max=FOURIER_K_MAX):
    """Series ``sum_k weights(omega_k) S_test S_trial^T`` with doubling truncation.

    Frequencies are added in doubling blocks; summation stops when a block
    changes the result by less than ``rtol`` relative to its max norm.
    Returns ``(matrix, K)``.
    """
    K = int(K0)
    total = _fourier_block(test_nodes, trial_nodes, weights, T, 0, K)
    while True:
        if K >= K_max:
            raise NumericalError(f"Fourier truncation did not converge below K={K_max}")
        inc = _fourier_block(test_nodes, trial_nodes, weights, T, K, 2 * K)
        total += inc
        K *= 2
        scale = max(float(np.max(np.abs(total))), 1e-300)
        if float(np.max(np.abs(inc))) <= rtol * scale:
            return total, K


def _fourier_series(test_nodes, trial_nodes, weights, T, K, K0):
    """Fixed truncation ``K`` if given, else the doubling rule from ``K0``."""
    if K is not None:
        return _fourier_block(test_nodes, trial_nodes, weights, T, 0, int(K))
    return _fourier_bilinear(test_nodes, trial_nodes, weights, T, K0)[0]


def _ht_weight(T):
    return lambda om: T**2 / om**3


def assemble_ht(
    mesh: LateralMesh,
    method: HTMethod | str = HTMethod.KERNEL,
    K: int | None = None,
    rtol: float = FOURIER_RTOL,
) -> np.ndarray:
    """Matrix of ``<v_h, H_T V w_h>``.

    ``method="kernel"`` integrates the log-tan kernel over rectangles;
    ``method="fourier"`` sums the series ``T^2 / omega_k^3 S_ik S_jk``.  For
    the Fourier path a fixed ``K`` may be given, otherwise ``K`` doubles
    from :func:`default_truncation` until the change is below ``rtol``.
    """
    method = HTMethod(method)
    T = mesh.geometry.T
    a, b, c, d = _trial_windows(mesh)
    if method is HTMethod.KERNEL:
        return -_kernel_rectangles(a[:, None], b[:, None], c, d, T) / (2.0 * math.pi)

    L = mesh.geometry.L
    n = mesh.ndof
    A = np.zeros((n, n))
    K0 = default_truncation(n)
    weights = _ht_weight(T)
    sides = ((mesh.nodes0, slice(0, mesh.N0)), (mesh.nodesL, slice(mesh.N0, n)))
    for test_nodes, rows in sides:
        for trial_nodes, cols in sides:
            window = test_nodes if test_nodes is trial_nodes else np.minimum(trial_nodes + L, T)
            A[rows, cols] = _fourier_series(test_nodes, window, weights, T, K, K0)
    return A


def dual_norm_gram(mesh: LateralMesh, K: int | None = None, rtol: float = FOURIER_RTOL) -> np.ndarray:
    """Gram matrix of the ``[H^{1/2}_{,0}]'`` norm on piecewise constants.

    ``||w_h||^2 = x^T G x`` with ``G`` block diagonal; each block is
    ``(T^2/2) sum_k wbar_k^2 / omega_k`` written in element coefficients.
    """
    T = mesh.geometry.T
    G = np.zeros((mesh.ndof, mesh.ndof))
    weights = lambda om: 2.0 * T**2 / om**3  # noqa: E731
    K0 = default_truncation(mesh.ndof)
    blk0 = _fourier_series(mesh.nodes0, mesh.nodes0, weights, T, K, K0)
    G[: mesh.N0, : mesh.N0] = blk0
    if np.array_equal(mesh.nodes0, mesh.nodesL):
        G[mesh.N0 :, mesh.N0 :] = blk0
    else:
        G[mesh.N0 :, mesh.N0 :] = _fourier_series(mesh.nodesL, mesh.nodesL, weights, T, K, K0)
    return G


def assemble_matrix(mesh: LateralMesh, formulation: Formulation | str, method: HTMethod | str = HTMethod.KERNEL) -> np.ndarray:
    formulation = Formulation(formulation)
    if formulation is Formulation.ENERGETIC:
        return assemble_energetic(mesh)
    return assemble_ht(mesh, method)


# ----------------------------------------------------------------------
# right-hand side
# ----------------------------------------------------------------------
def _gauss_pieces(nodes: np.ndarray, kinks, order: int):
    """Gauss points on the mesh refined at ``kinks``.

    Returns points, weights and the element index of every point.
    """
    kinks = np.asarray(kinks if kinks is not None else [], dtype=float)
    kinks = kinks[(kinks > nodes[0]) & (kinks < nodes[-1])]
    brk = union_breaks(nodes, kinks, lo=float(nodes[0]), hi=float(nodes[-1]))
    lo, hi = brk[:-1], brk[1:]
    elem = np.clip(np.searchsorted(nodes, 0.5 * (lo + hi), side="right") - 1, 0, nodes.size - 2)
    xi, wi = np.polynomial.legendre.leggauss(order)
    pts = lo[:, None] + 0.5 * (hi - lo)[:, None] * (1.0 + xi)
    wts = 0.5 * (hi - lo)[:, None] * wi
    return pts, wts, np.broadcast_to(elem[:, None], pts.shape)


def _project_side(g: Callable, nodes: np.ndarray, kinks, side: Side, order: int) -> PiecewiseLinear:
    h = np.diff(nodes)
    n = h.size
    pts, wts, elem = _gauss_pieces(nodes, kinks, order)
    lam = (pts - nodes[elem]) / h[elem]
    gv = np.asarray(g(pts), dtype=float) * wts
    # dof k <-> node k (k = 1..n); node 0 is fixed to zero
    load = np.bincount(elem.ravel(), weights=(gv * lam).ravel(), minlength=n)  # right hat of element e -> node e+1
    load_left = np.bincount(elem.ravel(), weights=(gv * (1.0 - lam)).ravel(), minlength=n)  # node e
    F = load.copy()
    F[:-1] += load_left[1:]
    diag = h / 3.0
    diag[:-1] += h[1:] / 3.0
    off = h[1:] / 6.0
    coef = tridiag_solve(off, diag, off, F)
    return PiecewiseLinear(nodes, np.concatenate([[0.0], coef]), side, zero_at_start=True)


def project_Qh(g: Pair, mesh: LateralMesh, kinks: Pair | None = None, order: int = PROJECTION_ORDER) -> Pair:
    """L2 projection onto continuous piecewise linears vanishing at ``t = 0``.

    Moments are integrated with Gauss-Legendre of the given order on every
    element, split at the given kink times.
    """
    for comp in g:
        if abs(float(np.asarray(comp(np.array([0.0])))[0])) > 1e-12:
            raise ValueError("datum must vanish at t = 0")
    k0 = kinks.comp0 if kinks is not None else None
    kL = kinks.compL if kinks is not None else None
    return Pair(
        _project_side(g.comp0, mesh.nodes0, k0, Side.ZERO, order),
        _project_side(g.compL, mesh.nodesL, kL, Side.ELL, order),
    )


def assemble_rhs(
    mesh: LateralMesh,
    g_h: Pair,
    formulation: Formulation | str,
    method: HTMethod | str = HTMethod.KERNEL,
    K: int | None = None,
) -> np.ndarray:
    """Load vector ``<phi_i, H_T (I/2 + K) g_h>`` or ``<phi_i, d/dt (I/2 + K) g_h>``."""
    formulation = Formulation(formulation)
    method = HTMethod(method)
    geometry = mesh.geometry
    T = geometry.T
    r = direct_rhs(g_h, geometry)
    out = []
    for side, comp in ((Side.ZERO, r.comp0), (Side.ELL, r.compL)):
        nodes = mesh.nodes(side)
        a, b = nodes[:-1], nodes[1:]
        if formulation is Formulation.ENERGETIC:
            out.append(comp(b) - comp(a))
            continue
        slopes = comp.derivative().coeffs[:, 0]
        if method is HTMethod.FOURIER:
            weights = lambda om: 2.0 * T**2 / om**3  # noqa: E731
            M = _fourier_series(nodes, comp.breaks, weights, T, K, default_truncation(mesh.ndof))
            out.append(M @ slopes)
            continue
        keep = slopes != 0.0
        pa, pb = comp.breaks[:-1][keep], comp.breaks[1:][keep]
        R = _kernel_rectangles(a[:, None], b[:, None], pa[None, :], pb[None, :], T)
        out.append(-(R @ slopes[keep]) / math.pi)
    return np.concatenate(out)


def build_system(
    mesh: LateralMesh,
    case: ManufacturedCase,
    formulation: Formulation | str,
    method: HTMethod | str = HTMethod.KERNEL,
) -> GalerkinSystem:
    """Project the case's Dirichlet data and assemble matrix and load."""
    formulation = Formulation(formulation)
    g_h = project_Qh(case.g, mesh, case.kinks)
    A = assemble_matrix(mesh, formulation, method)
    rhs = assemble_rhs(mesh, g_h, formulation, method)
    return GalerkinSystem(A, rhs, mesh, formulation)


def solve(system: GalerkinSystem, residual_tol: float = 1e-10, return_residual: bool = False):
    """Direct solve; returns the density pair (and optionally the relative residual)."""
    x = lu_solve(system.matrix, system.rhs)
    nb = float(np.linalg.norm(system.rhs))
    res = float(np.linalg.norm(system.matrix @ x - system.rhs)) / nb if nb > 0.0 else float(np.linalg.norm(system.matrix @ x))
    logger.info("solve: n=%d relative residual %.2e", x.size, res)
    if res > residual_tol:
        raise NumericalError(f"relative residual {res:.3e} exceeds {residual_tol:.1e}")
    w = density_from_vector(system.mesh, x)
    return (w, res) if return_residual else w


# ----------------------------------------------------------------------
# errors
# ----------------------------------------------------------------------
def l2_error(w_h: Pair, case: ManufacturedCase, order: int = ERROR_ORDER) -> float:
    """``||w - w_h||_{L2(Sigma)}`` with Gauss quadrature split at the case's kinks."""
    total = 0.0
    for comp, exact, kinks in zip(w_h, case.w, case.kinks):
        nodes = comp.breaks
        pts, wts, elem = _gauss_pieces(nodes, kinks, order)
        diff = np.asarray(exact(pts), dtype=float) - comp.coeffs[elem, 0]
        total += float(np.sum(wts * diff * diff))
    return math.sqrt(total)


def eoc(errors) -> np.ndarray:
    """Experimental orders ``log2(e_{l-1} / e_l)`` for successive halvings of ``h``."""
    e = np.asarray(errors, dtype=float)
    if np.any(e <= 0.0) or not np.all(np.isfinite(e)):
        raise ValueError("errors must be positive and finite")
    return np.log2(e[:-1] / e[1:])


def sample_density(mesh: LateralMesh, w: Pair) -> Pair:
    """Element-midpoint interpolation of a density pair given as callables."""
    return Pair(
        PiecewiseConstant.from_function(mesh.nodes0, w.comp0, Side.ZERO),
        PiecewiseConstant.from_function(mesh.nodesL, w.compL, Side.ELL),
    )


__all__.append("sample_density")
