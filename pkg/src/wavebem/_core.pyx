# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Same contracts as ``wavebem._fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, tan, sin, cos, sqrt, fabs, M_PI

cnp.import_array()

cdef enum:
    NG = 10

cdef double XI[NG]
cdef double WI[NG]

_xi, _wi = np.polynomial.legendre.leggauss(NG)
for _k in range(NG):
    XI[_k] = _xi[_k]
    WI[_k] = _wi[_k]


cdef inline double _lntan_linear(double p, double q, double wp, double wq, double kappa) nogil:
    cdef double length = q - p
    cdef double beta, alpha, x, wx, y, f, acc = 0.0
    cdef bint near
    cdef int k
    if length <= 0.0:
        return 0.0
    if p < 0.0:
        p = 0.0
    near = p < length
    beta = (wq - wp) / length
    for k in range(NG):
        x = p + 0.5 * length * (1.0 + XI[k])
        wx = wp + beta * (x - p)
        y = kappa * x
        f = log(tan(y))
        if near:
            f -= log(y)
        acc += WI[k] * f * wx
    acc *= 0.5 * length
    if near:
        alpha = wp - beta * p
        acc += _prim(q, alpha, beta, kappa) - _prim(p, alpha, beta, kappa)
    return acc


cdef inline double _prim(double z, double alpha, double beta, double kappa) nogil:
    cdef double lz
    if z <= 0.0:
        return 0.0
    lz = log(kappa * z)
    return alpha * (z * lz - z) + beta * (0.5 * z * z * lz - 0.25 * z * z)


cdef inline double _piece_diff(double p, double q, double wp, double wq, double kappa) nogil:
    # split at 0 and reflect the negative half
    cdef double ws, length = q - p
    if length <= 0.0:
        return 0.0
    if q <= 0.0:
        return _lntan_linear(-q, -p, wq, wp, kappa)
    if p >= 0.0:
        return _lntan_linear(p, q, wp, wq, kappa)
    ws = wp + (wq - wp) * (-p) / length
    return _lntan_linear(0.0, -p, ws, wp, kappa) + _lntan_linear(0.0, q, ws, wq, kappa)


cdef inline double _piece_sum(double p, double q, double wp, double wq, double kappa, double T) nogil:
    # split at T; beyond T use ln tan(pi/2 - y) = -ln tan(y)
    cdef double ws, length = q - p
    if length <= 0.0:
        return 0.0
    if q <= T:
        return _lntan_linear(p, q, wp, wq, kappa)
    if p >= T:
        return -_lntan_linear(2.0 * T - q, 2.0 * T - p, wq, wp, kappa)
    ws = wp + (wq - wp) * (T - p) / length
    return _lntan_linear(p, T, wp, ws, kappa) - _lntan_linear(2.0 * T - q, T, wq, ws, kappa)


cdef double _rect(double a, double b, double c, double d, double T) nogil:
    cdef double kappa = M_PI / (4.0 * T)
    cdef double m, x1, x2, x3, x4, total = 0.0
    if d <= c or b <= a:
        return 0.0
    m = b - a if (b - a) < (d - c) else d - c
    x1 = a - d
    x2 = a - c if (a - c) < (b - d) else b - d
    x3 = b - d if (a - c) < (b - d) else a - c
    x4 = b - c
    total += _piece_diff(x1, x2, 0.0, m, kappa)
    total += _piece_diff(x2, x3, m, m, kappa)
    total += _piece_diff(x3, x4, m, 0.0, kappa)
    x1 = a + c
    x2 = a + d if (a + d) < (b + c) else b + c
    x3 = b + c if (a + d) < (b + c) else a + d
    x4 = b + d
    total += _piece_sum(x1, x2, 0.0, m, kappa, T)
    total += _piece_sum(x2, x3, m, m, kappa, T)
    total += _piece_sum(x3, x4, m, 0.0, kappa, T)
    return total


def rect_log_tan(a, b, c, d, double T):
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64).ravel()
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64).ravel()
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64).ravel()
    cdef double[::1] dv = np.ascontiguousarray(d, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = av.shape[0]
    out = np.empty(n)
    cdef double[::1] ov = out
    with nogil:
        for i in range(n):
            ov[i] = _rect(av[i], bv[i], cv[i], dv[i], T)
    return out


def coupling_matvec(p, q, double theta, double diag_coef, x):
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t i, j, nr = pv.shape[0], nc = qv.shape[0]
    cdef double acc, P, sp, diag
    cdef double s8 = 8.0 / M_PI
    sq_np = np.sin(np.asarray(qv) * theta)
    rq_np = np.sqrt(np.asarray(qv)) * np.asarray(xv)
    cdef double[::1] sq = sq_np
    cdef double[::1] rq = rq_np
    y = np.empty(nr)
    cdef double[::1] yv = y
    with nogil:
        for i in range(nr):
            P = pv[i]
            sp = sin(P * theta)
            acc = 0.0
            diag = 0.0
            for j in range(nc):
                if qv[j] == P:
                    diag = diag_coef * cos(P * theta) * xv[j]
                else:
                    acc = acc + rq[j] * (sq[j] - sp) / (P * P - qv[j] * qv[j])
            yv[i] = s8 * sqrt(P) * acc + diag
    return y


def coupling_block(p, q, double theta, double diag_coef):
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef Py_ssize_t i, j, nr = pv.shape[0], nc = qv.shape[0]
    cdef double P, sp, rp
    cdef double s8 = 8.0 / M_PI
    sq_np = np.sin(np.asarray(qv) * theta)
    rq_np = np.sqrt(np.asarray(qv))
    cdef double[::1] sq = sq_np
    cdef double[::1] rq = rq_np
    B = np.empty((nr, nc))
    cdef double[:, ::1] bv = B
    with nogil:
        for i in range(nr):
            P = pv[i]
            sp = sin(P * theta)
            rp = s8 * sqrt(P)
            for j in range(nc):
                if qv[j] == P:
                    bv[i, j] = diag_coef * cos(P * theta)
                else:
                    bv[i, j] = rp * rq[j] * (sq[j] - sp) / (P * P - qv[j] * qv[j])
    return B


def coupling_rmatvec(p, q, double theta, double diag_coef, y):
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t i, j, nr = pv.shape[0], nc = qv.shape[0]
    cdef double acc, Q, sq, diag
    cdef double s8 = 8.0 / M_PI
    sp_np = np.sin(np.asarray(pv) * theta)
    rp_np = np.sqrt(np.asarray(pv)) * np.asarray(yv)
    cdef double[::1] sp = sp_np
    cdef double[::1] rp = rp_np
    x = np.empty(nc)
    cdef double[::1] xv = x
    with nogil:
        for j in range(nc):
            Q = qv[j]
            sq = sin(Q * theta)
            acc = 0.0
            diag = 0.0
            for i in range(nr):
                if pv[i] == Q:
                    diag = diag_coef * cos(Q * theta) * yv[i]
                else:
                    acc = acc + rp[i] * (sq - sp[i]) / (pv[i] * pv[i] - Q * Q)
            xv[j] = s8 * sqrt(Q) * acc + diag
    return x


def jacobi_eigenvalues(A, double tol=1e-12, int max_sweeps=60):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] M = np.array(A, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] a = M
    cdef Py_ssize_t n = a.shape[0], i, j, k
    cdef double scale, off, aij, tau, t, cs, sn, x, y
    cdef int sweep
    scale = np.linalg.norm(M)
    if n == 1 or scale == 0.0:
        return np.diag(M).copy(), 0
    for sweep in range(1, max_sweeps + 2):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        if sqrt(off) <= tol * scale:
            return np.diag(M).copy(), sweep - 1
        if sweep == max_sweeps + 1:
            break
        with nogil:
            for i in range(n - 1):
                for j in range(i + 1, n):
                    aij = a[i, j]
                    if fabs(aij) <= 1e-300:
                        continue
                    tau = (a[j, j] - a[i, i]) / (2.0 * aij)
                    if tau >= 0.0:
                        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                    cs = 1.0 / sqrt(1.0 + t * t)
                    sn = t * cs
                    for k in range(n):
                        x = a[i, k]
                        y = a[j, k]
                        a[i, k] = cs * x - sn * y
                        a[j, k] = sn * x + cs * y
                    for k in range(n):
                        x = a[k, i]
                        y = a[k, j]
                        a[k, i] = cs * x - sn * y
                        a[k, j] = sn * x + cs * y
    raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps (off={sqrt(off):.3e})")
