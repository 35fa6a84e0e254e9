"""Quarter-wave Fourier series on (0, T) and the modified Hilbert transform.

Sine series use the basis ``sin(omega_k t / T)`` and cosine series the basis
``cos(omega_k t / T)`` with ``omega_k = pi/2 + k pi``.  The transform maps
one to the other by keeping the coefficient vector.

Coefficients of piecewise linear and piecewise constant functions are
computed in closed form from the element endpoints.  Differences of sines
are evaluated as ``2 cos(.) sin(.)`` products to avoid cancellation on
small elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .piecewise import PiecewisePoly

__all__ = [
    "SineSeries",
    "CosineSeries",
    "frequencies",
    "sine_differences",
    "sine_table",
    "sine_coeffs_piecewise_linear",
    "cosine_coeffs_piecewise_constant",
    "apply_ht",
    "half_norm_zero_start",
    "dual_half_norm",
    "dual_h1_norm",
    "pairing_dt_ht",
    "log_tan_kernel",
    "kernel_pairing",
    "graded_rule",
    "default_truncation",
    "converge_truncation",
]

_K_CHUNK = 1 << 15


def frequencies(K: int, start: int = 0) -> np.ndarray:
    """``omega_k = pi/2 + k pi`` for ``k = start .. start + K - 1``."""
    return math.pi * (0.5 + np.arange(start, start + K, dtype=float))


def sine_differences(a: np.ndarray, b: np.ndarray, omega: np.ndarray, T: float) -> np.ndarray:
    """``sin(omega b / T) - sin(omega a / T)`` for every interval and frequency.

    Returns an array of shape ``(len(a), len(omega))``.
    """
    a = np.asarray(a, dtype=float)[:, None]
    b = np.asarray(b, dtype=float)[:, None]
    w = omega[None, :] / T
    return 2.0 * np.cos(0.5 * w * (a + b)) * np.sin(0.5 * w * (b - a))


def sine_table(x: np.ndarray, start: int, K: int, T: float, block: int = 64) -> np.ndarray:
    """``sin(omega_k x / T)`` for ``k = start .. start + K - 1``, shape ``(len(x), K)``.

    Uses ``exp(i omega_k x / T)`` written as an exact exponential at every
    ``block``-th frequency times exact powers inside the block, which costs
    one complex product per entry instead of a sine.
    """
    x = np.asarray(x, dtype=float)
    theta = math.pi * x / T
    nb = -(-K // block)
    q = start + block * np.arange(nb) + 0.5
    base = np.exp(1j * theta[:, None] * q)
    step = np.exp(1j * theta[:, None] * np.arange(block))
    return np.ascontiguousarray((base[:, :, None] * step[:, None, :]).reshape(x.size, -1)[:, :K].imag)


@dataclass(frozen=True)
class SineSeries:
    T: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be a finite vector")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def K(self) -> int:
        return self.coeffs.size

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        w = frequencies(self.K)
        return np.sin(np.multiply.outer(t, w) / self.T) @ self.coeffs

    def derivative(self) -> "CosineSeries":
        """``d/dt`` of the series, expressed in the cosine basis."""
        return CosineSeries(self.T, self.coeffs * frequencies(self.K) / self.T)

    def norm_l2(self) -> float:
        return math.sqrt(0.5 * self.T * float(np.dot(self.coeffs, self.coeffs)))


@dataclass(frozen=True)
class CosineSeries:
    T: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be a finite vector")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def K(self) -> int:
        return self.coeffs.size

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        w = frequencies(self.K)
        return np.cos(np.multiply.outer(t, w) / self.T) @ self.coeffs

    def antiderivative(self) -> SineSeries:
        """``t -> int_0^t`` of the series, in the sine basis."""
        return SineSeries(self.T, self.coeffs * self.T / frequencies(self.K))

    def norm_l2(self) -> float:
        return math.sqrt(0.5 * self.T * float(np.dot(self.coeffs, self.coeffs)))


def _check_K(K: int) -> int:
    K = int(K)
    if K <= 0:
        raise ValueError(f"truncation K must be positive, got {K}")
    return K


def sine_coeffs_piecewise_linear(u: PiecewisePoly, K: int, T: float | None = None) -> SineSeries:
    """Exact sine coefficients of a continuous piecewise linear ``u`` with ``u(0) = 0``.

    Integration by parts moves the derivative onto ``u``; the boundary
    terms vanish because ``u(0) = 0`` and ``cos(omega_k) = 0``.
    """
    K = _check_K(K)
    if u.degree > 1 and np.any(u.coeffs[:, 2:]):
        raise ValueError("u must be piecewise linear")
    T = float(u.breaks[-1]) if T is None else float(T)
    if abs(float(u(0.0))) > 1e-12 * max(1.0, float(np.max(np.abs(u.coeffs[:, 0])))):
        raise ValueError("u must vanish at t = 0")
    slopes = u.coeffs[:, 1] if u.degree >= 1 else np.zeros(u.npieces)
    a, b = u.breaks[:-1], u.breaks[1:]
    out = np.empty(K)
    for lo in range(0, K, _K_CHUNK):
        w = frequencies(min(_K_CHUNK, K - lo), lo)
        S = sine_differences(a, b, w, T)
        out[lo : lo + w.size] = (2.0 * T / w**2) * (slopes @ S)
    return SineSeries(T, out)


def cosine_coeffs_piecewise_constant(w: PiecewisePoly, K: int, T: float | None = None) -> CosineSeries:
    """Exact cosine coefficients of a piecewise constant function."""
    K = _check_K(K)
    if w.degree > 0 and np.any(w.coeffs[:, 1:]):
        raise ValueError("w must be piecewise constant")
    T = float(w.breaks[-1]) if T is None else float(T)
    values = w.coeffs[:, 0]
    a, b = w.breaks[:-1], w.breaks[1:]
    out = np.empty(K)
    for lo in range(0, K, _K_CHUNK):
        om = frequencies(min(_K_CHUNK, K - lo), lo)
        S = sine_differences(a, b, om, T)
        out[lo : lo + om.size] = (2.0 / om) * (values @ S)
    return CosineSeries(T, out)


def apply_ht(u: SineSeries) -> CosineSeries:
    """Modified Hilbert transform: same coefficients, cosine basis."""
    return CosineSeries(u.T, u.coeffs)


def half_norm_zero_start(u: SineSeries) -> float:
    w = frequencies(u.K)
    return math.sqrt(0.5 * float(np.dot(w, u.coeffs**2)))


def dual_half_norm(w: CosineSeries) -> float:
    om = frequencies(w.K)
    return math.sqrt(0.5 * w.T**2 * float(np.sum(w.coeffs**2 / om)))


def dual_h1_norm(w: CosineSeries) -> float:
    """Norm in the dual of ``H^1`` functions vanishing at ``t = T``.

    The cosine basis satisfies the end condition, so the supremum is
    attained coefficientwise and equals the L2 norm of the antiderivative.
    """
    om = frequencies(w.K)
    return math.sqrt(0.5 * w.T**3 * float(np.sum((w.coeffs / om) ** 2)))


def pairing_dt_ht(u: SineSeries, z: SineSeries) -> float:
    """``<d/dt u, H_T z>`` on (0, T) from the coefficients."""
    if u.T != z.T:
        raise ValueError(f"series live on different intervals: T={u.T} vs T={z.T}")
    K = min(u.K, z.K)
    return 0.5 * float(np.dot(frequencies(K), u.coeffs[:K] * z.coeffs[:K]))


def log_tan_kernel(s, t, T: float):
    """``ln tan(pi (s+t) / 4T) + ln tan(pi |t-s| / 4T)``.

    Raises ``ZeroDivisionError`` on the singular set ``s = t`` or
    ``s + t in {0, 2T}``; integrals across it need split quadrature.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    plus = s + t
    minus = np.abs(t - s)
    if np.any(minus == 0.0) or np.any(plus <= 0.0) or np.any(plus >= 2.0 * T):
        raise ZeroDivisionError("log-tan kernel evaluated on its singular set")
    kappa = math.pi / (4.0 * T)
    out = np.log(np.tan(kappa * plus)) + np.log(np.tan(kappa * minus))
    return out if out.ndim else float(out)


def graded_rule(length: float, order: int = 12, levels: int = 24, ratio: float = 0.25, panels: int = 8):
    """Quadrature on ``[0, length]`` graded geometrically towards 0.

    ``panels`` uniform panels; the first one is subdivided geometrically
    ``levels`` times with the given ratio.  Every sub-interval carries a
    Gauss-Legendre rule of the given order.
    """
    xi, wi = np.polynomial.legendre.leggauss(order)
    width = length / panels
    edges = [0.0] + [width * ratio**j for j in range(levels, -1, -1)]
    edges += [width * (j + 1) for j in range(1, panels)]
    edges = np.array(edges)
    lo, hi = edges[:-1], edges[1:]
    nodes = (lo[:, None] + 0.5 * (hi - lo)[:, None] * (1.0 + xi)).ravel()
    weights = (0.5 * (hi - lo)[:, None] * wi).ravel()
    return nodes, weights


def kernel_pairing(
    dt_u: Callable[[np.ndarray], np.ndarray],
    ds_z: Callable[[np.ndarray], np.ndarray],
    T: float,
    order: int = 12,
    levels: int = 24,
    inner_order: int = 64,
) -> float:
    """``-(1/pi) int int dt_u(t) K(s, t) ds_z(s) ds dt`` by singularity splitting.

    The two kernel terms depend on ``t - s`` and ``s + t`` only.  In those
    variables the integrand is a log-singular function times a smooth line
    integral of ``dt_u * ds_z``; the outer integrals use :func:`graded_rule`
    towards the singular points 0 and 2T.
    """
    kappa = math.pi / (4.0 * T)
    xi, wi = np.polynomial.legendre.leggauss(inner_order)

    def line_integral(lo, hi, fn):
        t = lo[:, None] + 0.5 * (hi - lo)[:, None] * (1.0 + xi)
        return 0.5 * (hi - lo) * np.sum(wi * fn(t), axis=1)

    x, wx = graded_rule(T, order, levels)
    # t - s = +x and t - s = -x
    pos = line_integral(x, np.full_like(x, T), lambda t: dt_u(t) * ds_z(t - x[:, None]))
    neg = line_integral(np.zeros_like(x), T - x, lambda t: dt_u(t) * ds_z(t + x[:, None]))
    diff_part = np.sum(wx * np.log(np.tan(kappa * x)) * (pos + neg))

    y, wy = graded_rule(T, order, levels)
    # s + t = y in (0, T] and s + t = 2T - y in [T, 2T)
    low = line_integral(np.zeros_like(y), y, lambda t: dt_u(t) * ds_z(y[:, None] - t))
    high = line_integral(T - y, np.full_like(y, T), lambda t: dt_u(t) * ds_z(2.0 * T - y[:, None] - t))
    sum_part = np.sum(wy * np.log(np.tan(kappa * y)) * (low - high))

    return -(diff_part + sum_part) / math.pi


def default_truncation(nelem: int) -> int:
    """Starting truncation for Fourier evaluations on ``nelem`` elements."""
    return max(512, 16 * int(nelem))


def converge_truncation(evaluate: Callable[[int], np.ndarray], K0: int, rtol: float = 1e-10, K_max: int = 1 << 22):
    """Double ``K`` until ``evaluate(K)`` changes by less than ``rtol`` (max norm).

    Returns ``(value, K)``.  If ``K_max`` is reached the last value is
    returned together with ``K_max``; callers decide whether that is fatal.
    """
    K = int(K0)
    prev = np.asarray(evaluate(K), dtype=float)
    while K < K_max:
        K *= 2
        cur = np.asarray(evaluate(K), dtype=float)
        scale = max(float(np.max(np.abs(cur))), 1e-300)
        if float(np.max(np.abs(cur - prev))) <= rtol * scale:
            return cur, K
        prev = cur
    return prev, K
