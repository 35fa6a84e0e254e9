"""Boundary operators of the 1D wave equation, applied exactly.

The fundamental solution in one space dimension is ``H(t - |x|) / 2``, so
the single layer operator reduces to time antiderivatives, one of them
delayed by the travel time ``L`` between the two boundary points.  All
outputs are exact piecewise polynomials on the union of the input
breakpoints and their shifts by ``L``.
"""

from __future__ import annotations

from .mesh import Pair, PiecewiseLinear, ProblemGeometry, Side
from .piecewise import PiecewisePoly

__all__ = [
    "antiderivative",
    "antiderivative_rev",
    "apply_V",
    "apply_dtV",
    "direct_rhs",
    "interior_solution",
]


def antiderivative(f: PiecewisePoly) -> PiecewisePoly:
    """``t -> int_0^t f``."""
    return f.antiderivative()


def antiderivative_rev(f: PiecewisePoly) -> PiecewisePoly:
    """``t -> -int_t^T f``."""
    return f.antiderivative_rev()


def _on_window(f: PiecewisePoly, T: float) -> PiecewisePoly:
    return f.shifted(0.0, 0.0, T)


def _delayed(f: PiecewisePoly, L: float, T: float) -> PiecewisePoly:
    return f.shifted(L, 0.0, T)


def _as_trace(p: PiecewisePoly, side: Side) -> PiecewisePoly:
    p = p.simplify()
    if p.degree <= 1:
        try:
            return PiecewiseLinear.from_poly(p, side)
        except ValueError:
            pass
    return p


def apply_V(w: Pair, geometry: ProblemGeometry) -> Pair:
    """Single layer operator: ``(V w)_0 = (W_0(t) + W_L(t - L)) / 2`` and symmetric.

    ``W`` denotes the antiderivative starting at ``t = 0``; densities are
    zero for negative times.
    """
    L, T = geometry.L, geometry.T
    W0 = _on_window(w.comp0, T).antiderivative()
    WL = _on_window(w.compL, T).antiderivative()
    v0 = 0.5 * (W0 + _delayed(WL, L, T))
    vL = 0.5 * (_delayed(W0, L, T) + WL)
    return Pair(_as_trace(v0, Side.ZERO), _as_trace(vL, Side.ELL))


def apply_dtV(w: Pair, geometry: ProblemGeometry) -> Pair:
    """Time derivative of :func:`apply_V`, again exact."""
    L, T = geometry.L, geometry.T
    w0 = _on_window(w.comp0, T)
    wL = _on_window(w.compL, T)
    return Pair(0.5 * (w0 + _delayed(wL, L, T)), 0.5 * (_delayed(w0, L, T) + wL))


def direct_rhs(g: Pair, geometry: ProblemGeometry) -> Pair:
    """``(I/2 + K) g`` for Dirichlet data ``g`` vanishing at ``t = 0``.

    In one space dimension the double layer potential of ``g`` is
    ``-g_0(t - x)/2 - g_L(t - (L - x))/2``; taking traces gives
    ``(g_0(t) - g_L(t - L)) / 2`` at ``x = 0`` and the mirrored expression
    at ``x = L``.
    """
    L, T = geometry.L, geometry.T
    for comp in g:
        if abs(float(comp(0.0))) > 1e-12:
            raise ValueError("Dirichlet data must vanish at t = 0")
    g0 = _on_window(g.comp0, T)
    gL = _on_window(g.compL, T)
    r0 = 0.5 * (g0 - _delayed(gL, L, T))
    rL = 0.5 * (gL - _delayed(g0, L, T))
    return Pair(_as_trace(r0, Side.ZERO), _as_trace(rL, Side.ELL))


def interior_solution(w: Pair, g: Pair, x: float, t: float, geometry: ProblemGeometry) -> float:
    """Representation formula ``u = V~w - W~g`` at an interior point."""
    L, T = geometry.L, geometry.T
    if not (0.0 < x < L and 0.0 < t < T):
        raise ValueError(f"({x}, {t}) is not inside (0, {L}) x (0, {T})")
    W0 = _on_window(w.comp0, T).antiderivative()
    WL = _on_window(w.compL, T).antiderivative()
    single = 0.5 * W0(t - x) + 0.5 * WL(t - abs(x - L))
    double = 0.5 * g.comp0(t - x) + 0.5 * g.compL(t - L + x)
    return float(single + double)
