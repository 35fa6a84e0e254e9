"""Pure numpy implementations of the hot kernels.

These mirror ``_core.pyx`` one to one and are used when the compiled
extension is unavailable or ``WAVEBEM_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import math

import numpy as np

GAUSS_ORDER = 10
_XI, _WI = np.polynomial.legendre.leggauss(GAUSS_ORDER)
_CHUNK = 1 << 16


# ----------------------------------------------------------------------
# log-tan kernel rectangle integrals
# ----------------------------------------------------------------------
def _lntan_linear(p, q, wp, wq, kappa):
    """int_p^q ln(tan(kappa x)) * w(x) dx with w linear from wp to wq.

    Requires 0 <= p <= q and kappa * q <= pi / 4.  The log singularity at
    x = 0 is subtracted and integrated analytically when the interval is
    within one length of the origin.
    """
    length = q - p
    safe = np.where(length > 0.0, length, 1.0)
    x = p[:, None] + 0.5 * length[:, None] * (1.0 + _XI)
    wx = wp[:, None] + (wq - wp)[:, None] * (x - p[:, None]) / safe[:, None]
    y = kappa * x
    with np.errstate(divide="ignore", invalid="ignore"):
        lntan = np.log(np.tan(y))
        smooth = lntan - np.log(y)
    near = p < length
    f = np.where(near[:, None], smooth, lntan)
    f = np.where(length[:, None] > 0.0, f, 0.0)
    gauss = 0.5 * length * np.sum(_WI * f * wx, axis=1)

    # analytic part: int (alpha + beta x) ln(kappa x) dx on near intervals
    beta = (wq - wp) / safe
    alpha = wp - beta * p

    def prim(z):
        with np.errstate(divide="ignore", invalid="ignore"):
            lz = np.where(z > 0.0, np.log(kappa * np.where(z > 0.0, z, 1.0)), 0.0)
        return alpha * (z * lz - z) + beta * (0.5 * z * z * lz - 0.25 * z * z)

    analytic = np.where(near & (length > 0.0), prim(q) - prim(p), 0.0)
    return gauss + analytic


def _split(p, q, wp, wq, s):
    """Split the linear piece [p, q] at s; returns (lower, upper) pieces."""
    length = q - p
    sc = np.clip(s, p, q)
    safe = np.where(length > 0.0, length, 1.0)
    ws = np.where(length > 0.0, wp + (wq - wp) * (sc - p) / safe, wp)
    return (p, sc, wp, ws), (sc, q, ws, wq)


def rect_log_tan(a, b, c, d, T):
    """Integrals of ln[tan(pi(s+t)/4T) tan(pi|t-s|/4T)] over rectangles.

    The rectangle is ``t in [a, b]``, ``s in [c, d]`` with all four
    arguments in ``[0, T]``.  Empty rectangles (``d <= c``) give 0.
    """
    a, b, c, d = (np.ascontiguousarray(v, dtype=float).ravel() for v in (a, b, c, d))
    out = np.empty(a.size)
    for lo in range(0, a.size, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        out[sl] = _rect_chunk(a[sl], b[sl], c[sl], d[sl], float(T))
    return out


def _rect_chunk(a, b, c, d, T):
    kappa = math.pi / (4.0 * T)
    lenI = b - a
    lenJ = np.maximum(d - c, 0.0)
    m = np.minimum(lenI, lenJ)
    zero = np.zeros_like(a)
    total = np.zeros_like(a)

    # overlap weight of t - s: trapezoid on [a-d, b-c]
    x1 = a - d
    x2 = np.minimum(a - c, b - d)
    x3 = np.maximum(a - c, b - d)
    x4 = b - c
    for p, q, wp, wq in ((x1, x2, zero, m), (x2, x3, m, m), (x3, x4, m, zero)):
        neg, pos = _split(p, q, wp, wq, 0.0)
        pn, qn, wpn, wqn = neg
        total += _lntan_linear(np.maximum(-qn, 0.0), np.maximum(-pn, 0.0), wqn, wpn, kappa)
        pp, qp, wpp, wqp = pos
        total += _lntan_linear(np.maximum(pp, 0.0), np.maximum(qp, 0.0), wpp, wqp, kappa)

    # overlap weight of s + t: trapezoid on [a+c, b+d]; reflect beyond T
    y1 = a + c
    y2 = np.minimum(a + d, b + c)
    y3 = np.maximum(a + d, b + c)
    y4 = b + d
    for p, q, wp, wq in ((y1, y2, zero, m), (y2, y3, m, m), (y3, y4, m, zero)):
        low, high = _split(p, q, wp, wq, T)
        pl, ql, wpl, wql = low
        total += _lntan_linear(pl, ql, wpl, wql, kappa)
        ph, qh, wph, wqh = high
        total -= _lntan_linear(np.maximum(2.0 * T - qh, 0.0), np.maximum(2.0 * T - ph, 0.0), wqh, wph, kappa)

    return np.where(lenJ > 0.0, total, 0.0)


# ----------------------------------------------------------------------
# coupling coefficients b_{k,l} of the Gram factor
# ----------------------------------------------------------------------
def coupling_block(p, q, theta, diag_coef):
    """Dense block ``b(p_k, q_l)`` for odd integers ``p = 2k+1``, ``q = 2l+1``."""
    P = np.asarray(p, dtype=float)[:, None]
    Q = np.asarray(q, dtype=float)[None, :]
    same = P == Q
    denom = np.where(same, 1.0, P * P - Q * Q)
    off = (8.0 / math.pi) * (np.sqrt(P) * np.sqrt(Q)) * (np.sin(Q * theta) - np.sin(P * theta)) / denom
    return np.where(same, diag_coef * np.cos(P * theta), off)


def coupling_matvec(p, q, theta, diag_coef, x):
    """y_k = sum_l b(p_k, q_l) x_l for odd integers p = 2k+1, q = 2l+1."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    y = np.empty(p.size)
    rows = max(1, (1 << 22) // max(q.size, 1))
    for lo in range(0, p.size, rows):
        blk = coupling_block(p[lo : lo + rows], q, theta, diag_coef)
        y[lo : lo + rows] = blk @ x
    return y


def coupling_rmatvec(p, q, theta, diag_coef, y):
    """x_l = sum_k b(p_k, q_l) y_k (transpose of :func:`coupling_matvec`)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    x = np.zeros(q.size)
    rows = max(1, (1 << 22) // max(q.size, 1))
    for lo in range(0, p.size, rows):
        blk = coupling_block(p[lo : lo + rows], q, theta, diag_coef)
        x += y[lo : lo + rows] @ blk
    return x


# ----------------------------------------------------------------------
# cyclic Jacobi eigenvalues
# ----------------------------------------------------------------------
def jacobi_eigenvalues(A, tol=1e-12, max_sweeps=60):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, sweeps)``.  Raises ``RuntimeError`` when the
    off-diagonal mass does not fall below ``tol * ||A||_F``.
    """
    A = np.array(A, dtype=float, copy=True)
    n = A.shape[0]
    scale = np.linalg.norm(A)
    if n == 1 or scale == 0.0:
        return np.diag(A).copy(), 0
    for sweep in range(1, max_sweeps + 1):
        off = math.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
        if off <= tol * scale:
            return np.diag(A).copy(), sweep - 1
        for i in range(n - 1):
            for j in range(i + 1, n):
                aij = A[i, j]
                if abs(aij) <= 1e-300:
                    continue
                tau = (A[j, j] - A[i, i]) / (2.0 * aij)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                cs = 1.0 / math.sqrt(1.0 + t * t)
                sn = t * cs
                ri = A[i, :].copy()
                rj = A[j, :].copy()
                A[i, :] = cs * ri - sn * rj
                A[j, :] = sn * ri + cs * rj
                ci = A[:, i].copy()
                cj = A[:, j].copy()
                A[:, i] = cs * ci - sn * cj
                A[:, j] = sn * ci + cs * cj
    off = math.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
    if off <= tol * scale:
        return np.diag(A).copy(), max_sweeps
    raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")
