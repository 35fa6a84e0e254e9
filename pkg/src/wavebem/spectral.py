"""Coupling coefficients between the two boundary sides and their Gram spectrum.

For ``T > L`` the modified Hilbert bilinear form couples the sine modes of
side ``0`` and side ``L`` through coefficients ``b_{kl}``; the ellipticity
constant is controlled by ``sup_m sqrt(lambda_max(C_m))`` with
``C_m = B^T B`` and ``B`` the ``(k_max + 1) x (m + 1)`` coefficient block.
``b_{kl}`` vanishes when ``k - l`` is odd, so ``C_m`` splits into an even and
an odd block, each handled matrix-free.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, aslinearoperator, eigsh

from . import kernels
from .linalg import ConvergenceError, power_max_gram
from .mesh import time_slice_count

logger = logging.getLogger(__name__)

__all__ = [
    "CouplingMatrixSpec",
    "b_coeff",
    "coupling_operator",
    "lambda_max_Cm",
    "sqrt_lambda_max",
    "conjectured_constant",
    "figure1_sweep",
    "SweepRow",
]

KMAX_RTOL = 1e-4
EIG_TOL = 1e-8
LANCZOS_NCV = 64
# factor blocks up to this many entries are stored densely (256 MB)
DENSE_ENTRIES = 1 << 25


def _check_geometry(L: float, T: float) -> None:
    if not (L > 0.0 and T > 0.0):
        raise ValueError(f"L and T must be positive, got L={L}, T={T}")
    if T <= L:
        raise ValueError(f"coupling coefficients are defined only for T > L (L={L}, T={T})")


def b_coeff(k: int, l: int, L: float, T: float) -> float:
    """Coupling coefficient ``b_{kl}``.

    >>> round(b_coeff(0, 0, 1.0, 2.0), 5)
    0.70711
    >>> b_coeff(1, 0, 1.0, 2.0)
    0.0
    """
    if k < 0 or l < 0:
        raise ValueError("indices must be non-negative")
    _check_geometry(L, T)
    r = L / T
    if k == l:
        return 2.0 * (1.0 - r) * math.cos((0.5 + k) * math.pi * r)
    if (k - l) % 2:
        return 0.0
    return (
        4.0
        / math.pi
        * math.sqrt(2 * k + 1)
        * math.sqrt(2 * l + 1)
        / ((k + l + 1) * (k - l))
        * math.cos((k + l + 1) * 0.5 * math.pi * r)
        * math.sin((l - k) * 0.5 * math.pi * r)
    )


@dataclass(frozen=True)
class CouplingMatrixSpec:
    """Cutoffs of ``C_m``: columns ``0..m``, rows ``0..k_max`` of the factor ``B``."""

    L: float
    T: float
    m: int
    k_max: int | None = None

    def __post_init__(self):
        if not (self.L > 0.0 and self.T > 0.0):
            raise ValueError("L and T must be positive")
        if self.m < 0:
            raise ValueError("m must be non-negative")
        if self.k_max is not None and self.k_max < self.m:
            raise ValueError("k_max must be at least m")

    @property
    def trivial(self) -> bool:
        """No coupling when ``T <= L``."""
        return self.T <= self.L


def coupling_operator(L: float, T: float, m: int, k_max: int, parity: int) -> LinearOperator:
    """``B`` restricted to rows and columns of one parity, as a LinearOperator.

    Small enough blocks are stored densely; larger ones are applied
    matrix-free by the compiled kernels.
    """
    _check_geometry(L, T)
    p = 2.0 * np.arange(parity, k_max + 1, 2) + 1.0
    q = 2.0 * np.arange(parity, m + 1, 2) + 1.0
    theta = 0.5 * math.pi * L / T
    diag = 2.0 * (1.0 - L / T)
    if p.size * q.size <= DENSE_ENTRIES:
        return aslinearoperator(kernels.coupling_block(p, q, theta, diag))
    return LinearOperator(
        (p.size, q.size),
        matvec=lambda x: kernels.coupling_matvec(p, q, theta, diag, np.ascontiguousarray(x, dtype=float).ravel()),
        rmatvec=lambda y: kernels.coupling_rmatvec(p, q, theta, diag, np.ascontiguousarray(y, dtype=float).ravel()),
        dtype=float,
    )


def _lambda_fixed(L, T, m, k_max, tol, method, starts=None):
    lam = 0.0
    vecs = {}
    for parity in (0, 1):
        if parity > m:
            continue
        op = coupling_operator(L, T, m, k_max, parity)
        x0 = None if starts is None else starts.get(parity)
        val, vec = _top_eigenpair(op, tol, x0, method)
        vecs[parity] = vec
        lam = max(lam, val)
    return lam, vecs


def _top_eigenpair(op, tol, x0, method):
    """Largest eigenvalue of ``op^T op`` and its vector."""
    n = op.shape[1]
    if x0 is None:
        x0 = np.random.default_rng(7).standard_normal(n)
    if method == "power" or n <= 2:
        return power_max_gram(op, tol=tol, x0=x0, return_vector=True)
    gram = LinearOperator((n, n), matvec=lambda x: op.rmatvec(op.matvec(x)), dtype=float)
    try:
        vals, vecs = eigsh(gram, k=1, which="LA", tol=tol, v0=x0, ncv=min(LANCZOS_NCV, n), maxiter=50 * n)
    except ArpackNoConvergence as exc:
        raise ConvergenceError(f"Lanczos did not converge for a {n}-column block") from exc
    return float(vals[0]), vecs[:, 0]


def lambda_max_Cm(
    spec: CouplingMatrixSpec,
    tol: float = EIG_TOL,
    kmax_rtol: float = KMAX_RTOL,
    kmax_factor: int = 8,
    kmax_limit: int = 1 << 22,
    method: str = "lanczos",
) -> float:
    """Largest eigenvalue of ``C_m`` without forming it.

    Both methods only apply ``B`` and ``B^T``.  ``method="lanczos"`` runs
    implicitly restarted Lanczos on the Gram operator; ``method="power"``
    uses :func:`power_max_gram`, which is robust but slow when the top of
    the spectrum is clustered.  With ``spec.k_max`` given the truncation is
    fixed.  Otherwise ``k_max`` starts at ``kmax_factor * (m + 1)`` and
    doubles until ``lambda_max`` changes by less than ``kmax_rtol``
    (relative).
    """
    if method not in ("lanczos", "power"):
        raise ValueError(f"unknown method {method!r}")
    if spec.trivial:
        return 0.0
    L, T, m = spec.L, spec.T, spec.m
    if spec.k_max is not None:
        return _lambda_fixed(L, T, m, spec.k_max, tol, method)[0]
    k_max = max(kmax_factor * (m + 1), m)
    lam, vecs = _lambda_fixed(L, T, m, k_max, tol, method)
    while True:
        if 2 * k_max > kmax_limit:
            raise ArithmeticError(f"k_max doubling did not settle below {kmax_limit}")
        k_max *= 2
        new, vecs = _lambda_fixed(L, T, m, k_max, tol, method, vecs)
        logger.debug("m=%d k_max=%d lambda=%.12g", m, k_max, new)
        if abs(new - lam) <= kmax_rtol * max(new, 1e-300):
            return new
        lam = new


def sqrt_lambda_max(L: float, T: float, m: int, **kw) -> float:
    return math.sqrt(lambda_max_Cm(CouplingMatrixSpec(L, T, m), **kw))


def conjectured_constant(L: float, T: float) -> float:
    """``2 - 4 sin^2(pi / (2 (n + 1)))`` with ``n`` the number of time slices.

    >>> round(conjectured_constant(1.0, 2.0), 12)
    1.0
    """
    if not (L > 0.0 and T > 0.0):
        raise ValueError("L and T must be positive")
    n = time_slice_count(L, T)
    value = 2.0 - 4.0 * math.sin(math.pi / (2 * (n + 1))) ** 2
    return 0.0 if abs(value) < 1e-14 else value


@dataclass(frozen=True)
class SweepRow:
    T: float
    sqrt_lambda_max: float
    conjectured: float

    @property
    def abs_diff(self) -> float:
        return abs(self.sqrt_lambda_max - self.conjectured)


def figure1_sweep(L: float, T_values, m: int, **kw) -> list[SweepRow]:
    """``sqrt(lambda_max(C_m))`` next to the conjectured constant for every ``T``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rows = []
    for T in T_values:
        T = float(T)
        value = 0.0 if T <= L else sqrt_lambda_max(L, T, m, **kw)
        rows.append(SweepRow(T, value, conjectured_constant(L, T)))
    return rows
