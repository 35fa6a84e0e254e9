"""Small dense linear algebra toolkit.

LU with partial pivoting for the Galerkin systems, Jacobi rotations for
extreme eigenvalues of symmetric matrices, and power iteration for the
largest eigenvalue of a Gram matrix ``B^T B`` given only products with
``B`` and ``B^T``.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from . import kernels

logger = logging.getLogger(__name__)

__all__ = [
    "SingularMatrixError",
    "ConvergenceError",
    "lu_factor",
    "lu_solve",
    "tridiag_solve",
    "sym_eig_extremes",
    "power_max_gram",
]


class SingularMatrixError(ArithmeticError):
    pass


class ConvergenceError(ArithmeticError):
    pass


def lu_factor(A: np.ndarray, pivot_tol: float = 1e-14):
    """In-place style LU factorisation ``P A = L U`` with partial pivoting.

    Returns ``(LU, piv)`` where ``LU`` stores the unit lower factor below the
    diagonal and ``U`` on and above it, and ``piv[k]`` is the row swapped
    into position ``k``.
    """
    LU = np.array(A, dtype=float, copy=True)
    n, m = LU.shape
    if n != m:
        raise ValueError(f"matrix must be square, got {LU.shape}")
    if not np.all(np.isfinite(LU)):
        raise ValueError("matrix has non-finite entries")
    threshold = pivot_tol * max(float(np.max(np.abs(LU))), 1e-300) if n else 0.0
    piv = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(LU[k:, k])))
        if abs(LU[p, k]) <= threshold:
            raise SingularMatrixError(f"zero pivot in column {k} (|pivot| <= {threshold:.3e})")
        if p != k:
            LU[[k, p]] = LU[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        LU[k + 1 :, k] /= LU[k, k]
        LU[k + 1 :, k + 1 :] -= np.outer(LU[k + 1 :, k], LU[k, k + 1 :])
    return LU, piv


def _lu_substitute(LU: np.ndarray, piv: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = LU.shape[0]
    x = np.array(b, dtype=float)[piv]
    for k in range(1, n):
        x[k] -= LU[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - LU[k, k + 1 :] @ x[k + 1 :]) / LU[k, k]
    return x


def lu_solve(A: np.ndarray, b: np.ndarray, pivot_tol: float = 1e-14) -> np.ndarray:
    """Solve ``A x = b`` by LU with partial pivoting.

    >>> lu_solve(np.array([[2.0, 0.0], [0.0, 4.0]]), np.array([2.0, 4.0]))
    array([1., 1.])
    """
    b = np.asarray(b, dtype=float)
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch: A {A.shape}, b {b.shape}")
    LU, piv = lu_factor(A, pivot_tol)
    return _lu_substitute(LU, piv, b)


def tridiag_solve(lower: np.ndarray, diag: np.ndarray, upper: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Thomas algorithm; ``lower[i]`` couples rows ``i + 1`` and ``i``."""
    n = diag.size
    c = np.zeros(n)
    d = np.zeros(n)
    beta = diag[0]
    if beta == 0.0:
        raise SingularMatrixError("zero pivot in tridiagonal solve")
    c[0] = upper[0] / beta if n > 1 else 0.0
    d[0] = rhs[0] / beta
    for i in range(1, n):
        beta = diag[i] - lower[i - 1] * c[i - 1]
        if beta == 0.0:
            raise SingularMatrixError("zero pivot in tridiagonal solve")
        if i < n - 1:
            c[i] = upper[i] / beta
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / beta
    x = np.empty(n)
    x[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def _check_symmetric(A: np.ndarray, rtol: float) -> None:
    scale = max(float(np.max(np.abs(A))), 1e-300)
    if float(np.max(np.abs(A - A.T))) > rtol * scale:
        raise ValueError("matrix is not symmetric within tolerance")


def sym_eig_extremes(A: np.ndarray, tol: float = 1e-12, jacobi_max: int = 512) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a symmetric matrix.

    Cyclic Jacobi up to dimension ``jacobi_max``; above that, power
    iteration for the largest eigenvalue and shifted power iteration for
    the smallest.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got {A.shape}")
    _check_symmetric(A, 1e-12)
    A = 0.5 * (A + A.T)
    if A.shape[0] <= jacobi_max:
        eig, _ = kernels.jacobi_eigenvalues(A, tol)
        return float(eig.min()), float(eig.max())
    shift = abs(_power_symmetric(A, tol))
    eye = np.eye(A.shape[0])
    # both shifted matrices are positive semidefinite
    lam_max = _power_symmetric(A + shift * eye, tol) - shift
    lam_min = shift - _power_symmetric(shift * eye - A, tol)
    return float(lam_min), float(lam_max)


def _power_symmetric(A: np.ndarray, tol: float, max_iter: int = 100_000) -> float:
    """Dominant eigenvalue of a symmetric matrix by Rayleigh-quotient power iteration."""
    rng = np.random.default_rng(12345)
    x = rng.standard_normal(A.shape[0])
    x /= np.linalg.norm(x)
    lam_prev = None
    for _ in range(max_iter):
        y = A @ x
        lam = float(x @ y)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
        if lam_prev is not None and abs(lam - lam_prev) <= tol * max(abs(lam), 1e-300):
            return lam
        lam_prev = lam
    raise ConvergenceError("power iteration did not converge")


def power_max_gram(
    B,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    x0: np.ndarray | None = None,
    patience: int = 3,
    return_vector: bool = False,
):
    """Largest eigenvalue of ``B^T B`` by power iteration on ``x -> B^T (B x)``.

    ``B`` is an array or anything accepted by
    :func:`scipy.sparse.linalg.aslinearoperator`; the Gram matrix is never
    formed.  Iteration stops once the Rayleigh quotient changes by less
    than ``tol`` (relative) for ``patience`` consecutive steps.  With
    ``return_vector`` the final unit iterate is returned as well, which is
    useful to warm-start a related problem.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    op: LinearOperator = aslinearoperator(B)
    n = op.shape[1]
    if x0 is None:
        x = np.random.default_rng(2021).standard_normal(n)
    else:
        x = np.array(x0, dtype=float)
    nx = np.linalg.norm(x)
    if nx == 0.0:
        raise ValueError("start vector must be nonzero")
    x /= nx
    lam_prev = None
    quiet = 0
    for it in range(1, max_iter + 1):
        y = op.matvec(x)
        lam = float(y @ y)
        z = op.rmatvec(y)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            if it == 1 and lam == 0.0:
                raise ValueError("B annihilates the start vector; is B zero?")
            return (lam, x) if return_vector else lam
        x = z / nz
        if lam_prev is not None and abs(lam - lam_prev) <= tol * max(lam, 1e-300):
            quiet += 1
            if quiet >= patience:
                logger.debug("power iteration converged after %d steps", it)
                return (lam, x) if return_vector else lam
        else:
            quiet = 0
        lam_prev = lam
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")
