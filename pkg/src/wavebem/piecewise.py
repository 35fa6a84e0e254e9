"""Exact piecewise polynomials on a time interval.

Every function on one side of the lateral boundary (densities, traces,
operator outputs) is stored as a :class:`PiecewisePoly`.  Coefficients are
local monomials in ``t - breaks[i]``, lowest degree first, so that
``coeffs[i, j]`` multiplies ``(t - breaks[i]) ** j`` on piece ``i``.

Functions vanish outside ``[breaks[0], breaks[-1]]``.  This is the zero
extension used throughout: a density or trace is zero before ``t = 0`` and
after ``t = T``.
"""

from __future__ import annotations

import numpy as np
from scipy.special import comb

__all__ = ["PiecewisePoly", "union_breaks"]

_MERGE_TOL = 1e-13


def union_breaks(*arrays: np.ndarray, lo: float | None = None, hi: float | None = None) -> np.ndarray:
    """Sorted union of breakpoint arrays, clipped to ``[lo, hi]``.

    Points closer than a relative ``1e-13`` are merged so that shifted
    meshes that coincide with the original nodes up to rounding do not
    create sliver intervals.
    """
    pts = np.concatenate([np.asarray(a, dtype=float).ravel() for a in arrays])
    if lo is not None:
        pts = np.append(pts[pts > lo], lo)
    if hi is not None:
        pts = np.append(pts[pts < hi], hi)
    pts = np.sort(pts)
    if pts.size == 0:
        return pts
    scale = max(1.0, float(np.max(np.abs(pts))))
    keep = np.ones(pts.size, dtype=bool)
    keep[1:] = np.diff(pts) > _MERGE_TOL * scale
    out = pts[keep]
    # keep the exact endpoints if they were requested
    if lo is not None:
        out[0] = lo
    if hi is not None:
        out[-1] = hi
    return out


def _taylor_shift(coeffs: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Re-center local monomial coefficients by ``delta`` per piece.

    Given p(tau) = sum_j c_j tau^j, returns c' with p(tau + delta) = sum_k c'_k tau^k.
    """
    deg = coeffs.shape[1] - 1
    out = np.zeros_like(coeffs)
    for k in range(deg + 1):
        for j in range(k, deg + 1):
            out[:, k] += coeffs[:, j] * comb(j, k, exact=True) * delta ** (j - k)
    return out


class PiecewisePoly:
    """Piecewise polynomial with local monomial coefficients.

    Parameters
    ----------
    breaks : array_like, shape (n + 1,)
        Strictly increasing breakpoints.
    coeffs : array_like, shape (n, d + 1)
        Local coefficients, lowest degree first.
    """

    __slots__ = ("breaks", "coeffs")

    def __init__(self, breaks, coeffs):
        breaks = np.array(breaks, dtype=float)
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.ndim == 1:
            coeffs = coeffs[:, None]
        if breaks.ndim != 1 or breaks.size < 2:
            raise ValueError("need at least two breakpoints")
        if coeffs.shape[0] != breaks.size - 1:
            raise ValueError(
                f"{breaks.size - 1} pieces but {coeffs.shape[0]} coefficient rows"
            )
        if np.any(np.diff(breaks) <= 0.0):
            raise ValueError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        breaks.flags.writeable = False
        coeffs.flags.writeable = False
        self.breaks = breaks
        self.coeffs = coeffs

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, lo: float, hi: float) -> "PiecewisePoly":
        return cls([lo, hi], [[0.0]])

    @classmethod
    def from_callable(cls, breaks, pieces) -> "PiecewisePoly":
        """Build from a list of numpy ``Polynomial`` objects in absolute time."""
        breaks = np.asarray(breaks, dtype=float)
        rows = []
        for left, poly in zip(breaks[:-1], pieces):
            local = poly.convert() if hasattr(poly, "convert") else np.polynomial.Polynomial(poly)
            # p(t) with t = left + tau
            shifted = local(np.polynomial.Polynomial([left, 1.0]))
            rows.append(shifted.coef)
        deg = max(len(r) for r in rows)
        coeffs = np.zeros((len(rows), deg))
        for i, r in enumerate(rows):
            coeffs[i, : len(r)] = r
        return cls(breaks, coeffs)

    # ------------------------------------------------------------------
    # basic properties
    # ------------------------------------------------------------------
    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def npieces(self) -> int:
        return self.coeffs.shape[0]

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breaks)

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breaks[0]), float(self.breaks[-1])

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(pieces={self.npieces}, degree={self.degree}, "
            f"support=[{self.breaks[0]:g}, {self.breaks[-1]:g}])"
        )

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------
    def piece_index(self, t: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.breaks, t, side="right") - 1
        return np.clip(idx, 0, self.npieces - 1)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = self.piece_index(t)
        tau = t - self.breaks[idx]
        c = self.coeffs[idx]
        val = c[..., -1]
        for j in range(self.degree - 1, -1, -1):
            val = val * tau + c[..., j]
        inside = (t >= self.breaks[0]) & (t <= self.breaks[-1])
        return np.where(inside, val, 0.0)

    def left_values(self) -> np.ndarray:
        """Value at the left end of every piece."""
        return self.coeffs[:, 0].copy()

    def right_values(self) -> np.ndarray:
        """Limit from the left at the right end of every piece."""
        h = self.lengths
        powers = h[:, None] ** np.arange(self.degree + 1)
        return np.sum(self.coeffs * powers, axis=1)

    # ------------------------------------------------------------------
    # calculus
    # ------------------------------------------------------------------
    def derivative(self) -> "PiecewisePoly":
        if self.degree == 0:
            return PiecewisePoly(self.breaks, np.zeros((self.npieces, 1)))
        j = np.arange(1, self.degree + 1)
        return PiecewisePoly(self.breaks, self.coeffs[:, 1:] * j)

    def antiderivative(self) -> "PiecewisePoly":
        """Continuous antiderivative that vanishes at ``breaks[0]``."""
        j = np.arange(1, self.degree + 2)
        local = np.zeros((self.npieces, self.degree + 2))
        local[:, 1:] = self.coeffs / j
        h = self.lengths
        increments = np.sum(local * h[:, None] ** np.arange(self.degree + 2), axis=1)
        local[:, 0] = np.concatenate([[0.0], np.cumsum(increments[:-1])])
        return PiecewisePoly(self.breaks, local)

    def antiderivative_rev(self) -> "PiecewisePoly":
        """Antiderivative ``-int_t^end f`` that vanishes at ``breaks[-1]``."""
        F = self.antiderivative()
        total = F.right_values()[-1]
        coeffs = np.array(F.coeffs)
        coeffs[:, 0] -= total
        return PiecewisePoly(self.breaks, coeffs)

    def integral(self) -> float:
        return float(self.antiderivative().right_values()[-1])

    def integrate(self, a: float, b: float) -> float:
        F = self.antiderivative()
        return float(F(min(max(b, self.breaks[0]), self.breaks[-1])) - F(min(max(a, self.breaks[0]), self.breaks[-1])))

    # ------------------------------------------------------------------
    # re-partitioning
    # ------------------------------------------------------------------
    def refine(self, breaks) -> "PiecewisePoly":
        """Express the same function on a finer partition.

        Every old breakpoint inside ``[breaks[0], breaks[-1]]`` must appear
        in ``breaks``; intervals outside the support get zero coefficients.
        """
        breaks = np.asarray(breaks, dtype=float)
        mid = 0.5 * (breaks[:-1] + breaks[1:])
        inside = (mid > self.breaks[0]) & (mid < self.breaks[-1])
        idx = self.piece_index(mid)
        delta = breaks[:-1] - self.breaks[idx]
        coeffs = _taylor_shift(self.coeffs[idx], delta)
        coeffs[~inside] = 0.0
        return PiecewisePoly(breaks, coeffs)

    def shifted(self, delta: float, lo: float, hi: float) -> "PiecewisePoly":
        """``t -> f(t - delta)`` restricted to the window ``[lo, hi]``."""
        moved = self.breaks + delta
        breaks = union_breaks(moved, lo=lo, hi=hi)
        mid = 0.5 * (breaks[:-1] + breaks[1:]) - delta
        inside = (mid > self.breaks[0]) & (mid < self.breaks[-1])
        idx = self.piece_index(mid)
        local_delta = breaks[:-1] - delta - self.breaks[idx]
        coeffs = _taylor_shift(self.coeffs[idx], local_delta)
        coeffs[~inside] = 0.0
        return PiecewisePoly(breaks, coeffs)

    def simplify(self) -> "PiecewisePoly":
        """Drop trailing zero coefficient columns (exact zeros only)."""
        c = self.coeffs
        deg = c.shape[1]
        while deg > 1 and not np.any(c[:, deg - 1]):
            deg -= 1
        return PiecewisePoly(self.breaks, c[:, :deg])

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def _aligned(self, other: "PiecewisePoly"):
        lo = min(self.breaks[0], other.breaks[0])
        hi = max(self.breaks[-1], other.breaks[-1])
        breaks = union_breaks(self.breaks, other.breaks, lo=lo, hi=hi)
        a = self.refine(breaks).coeffs
        b = other.refine(breaks).coeffs
        deg = max(a.shape[1], b.shape[1])
        a = np.pad(a, ((0, 0), (0, deg - a.shape[1])))
        b = np.pad(b, ((0, 0), (0, deg - b.shape[1])))
        return breaks, a, b

    def __add__(self, other):
        if isinstance(other, PiecewisePoly):
            breaks, a, b = self._aligned(other)
            return PiecewisePoly(breaks, a + b)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, PiecewisePoly):
            breaks, a, b = self._aligned(other)
            return PiecewisePoly(breaks, a - b)
        return NotImplemented

    def __mul__(self, scalar):
        if np.isscalar(scalar):
            return PiecewisePoly(self.breaks, self.coeffs * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def product(self, other: "PiecewisePoly") -> "PiecewisePoly":
        breaks, a, b = self._aligned(other)
        coeffs = np.array([np.polynomial.polynomial.polymul(x, y) for x, y in zip(a, b)])
        return PiecewisePoly(breaks, coeffs)

    def inner(self, other: "PiecewisePoly") -> float:
        """Exact L2 inner product over the common support."""
        return self.product(other).integral()

    def norm_l2(self) -> float:
        return float(np.sqrt(max(self.inner(self), 0.0)))
