"""Manufactured solutions with known Dirichlet data and boundary densities.

All three cases are waves travelling from ``x = 0`` to ``x = L``,
``u(x, t) = f(t - x)`` with ``f`` vanishing for negative arguments.  The
outward normal derivatives are ``-u_x`` at ``x = 0`` and ``+u_x`` at
``x = L``, hence ``w_0(t) = f'(t)`` and ``w_L(t) = -f'(t - L)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial

from .mesh import Pair, ProblemGeometry
from .piecewise import PiecewisePoly

__all__ = ["ManufacturedCase", "case_smooth", "case_singular", "case_traveling", "get_case"]


@dataclass(frozen=True)
class ManufacturedCase:
    """Exact solution bundle.

    ``g`` and ``w`` are pairs of vectorised callables of time.  When the
    profile is polynomial, ``g_pp`` and ``w_pp`` carry the same functions
    as exact piecewise polynomials on ``[0, T]``.
    """

    name: str
    geometry: ProblemGeometry
    exact_u: Callable[[np.ndarray, np.ndarray], np.ndarray]
    g: Pair
    w: Pair
    sobolev_s: float
    kinks: Pair
    g_pp: Pair | None = None
    w_pp: Pair | None = None
    notes: str = field(default="", compare=False)


def _travelling(name, geometry, f, fprime, profile_kinks, sobolev_s, f_pp=None, notes=""):
    L, T = geometry.L, geometry.T

    def exact_u(x, t):
        return f(np.asarray(t, float) - np.asarray(x, float))

    g = Pair(lambda t: f(np.asarray(t, float)), lambda t: f(np.asarray(t, float) - L))
    w = Pair(lambda t: fprime(np.asarray(t, float)), lambda t: -fprime(np.asarray(t, float) - L))
    k = np.asarray(profile_kinks, float)
    kinks = Pair(np.unique(k[(k > 0) & (k < T)]), np.unique((k + L)[(k + L > 0) & (k + L < T)]))
    g_pp = w_pp = None
    if f_pp is not None:
        df = f_pp.derivative()
        g_pp = Pair(f_pp.shifted(0.0, 0.0, T), f_pp.shifted(L, 0.0, T))
        w_pp = Pair(df.shifted(0.0, 0.0, T), (-df).shifted(L, 0.0, T))
    return ManufacturedCase(name, geometry, exact_u, g, w, sobolev_s, kinks, g_pp, w_pp, notes)


def _poly_profile(poly: Polynomial, end: float):
    """Profile equal to ``poly`` on ``[0, end]`` and zero elsewhere."""
    dpoly = poly.deriv()

    def f(t):
        t = np.asarray(t, float)
        return np.where((t >= 0.0) & (t <= end), poly(t), 0.0)

    def fprime(t):
        t = np.asarray(t, float)
        return np.where((t >= 0.0) & (t <= end), dpoly(t), 0.0)

    return f, fprime, PiecewisePoly.from_callable([0.0, end], [poly])


def case_traveling(
    poly: Polynomial | None = None,
    end: float = 1.0,
    geometry: ProblemGeometry | None = None,
) -> ManufacturedCase:
    """Travelling pulse ``u = f(t - x)`` with ``f = poly`` on ``[0, end]``.

    The default pulse is ``t^3 (1 - t)^3`` on ``[0, 1]`` with ``L = 3``,
    ``T = 6``.
    """
    if poly is None:
        t = Polynomial([0.0, 1.0])
        poly = t**3 * (1 - t) ** 3
    geometry = geometry or ProblemGeometry(3.0, 6.0)
    if abs(poly(0.0)) > 1e-14:
        raise ValueError("pulse must vanish at t = 0")
    f, fprime, f_pp = _poly_profile(poly, end)
    return _travelling("traveling", geometry, f, fprime, [0.0, end], 1.0, f_pp)


def case_smooth(geometry: ProblemGeometry | None = None) -> ManufacturedCase:
    """``u_1 = (t-x-2)^3 (x-t)^3 / 2`` on ``x <= t <= 2 + x``; default ``L = 3``, ``T = 6``."""
    tau = Polynomial([0.0, 1.0])
    poly = -0.5 * tau**3 * (tau - 2.0) ** 3
    f, fprime, f_pp = _poly_profile(poly, 2.0)
    geometry = geometry or ProblemGeometry(3.0, 6.0)
    case = _travelling("smooth", geometry, f, fprime, [0.0, 2.0], 1.0, f_pp)

    def u1(x, t):
        x = np.asarray(x, float)
        t = np.asarray(t, float)
        inside = (x <= t) & (t <= 2.0 + x)
        return np.where(inside, 0.5 * (t - x - 2.0) ** 3 * (x - t) ** 3, 0.0)

    return ManufacturedCase(
        case.name, geometry, u1, case.g, case.w, case.sobolev_s, case.kinks, case.g_pp, case.w_pp
    )


def case_singular(geometry: ProblemGeometry | None = None) -> ManufacturedCase:
    """``u_2 = |sin(pi (x - t))| / 2`` for ``x <= t``; default ``L = 3``, ``T = 6``.

    The density jumps at every integer time, so it lies in ``H^s`` only
    for ``s < 1/2``.
    """
    geometry = geometry or ProblemGeometry(3.0, 6.0)

    def f(t):
        t = np.asarray(t, float)
        return np.where(t >= 0.0, 0.5 * np.abs(np.sin(math.pi * t)), 0.0)

    def fprime(t):
        t = np.asarray(t, float)
        return np.where(t >= 0.0, 0.5 * math.pi * np.sign(np.sin(math.pi * t)) * np.cos(math.pi * t), 0.0)

    kinks = np.arange(0.0, math.ceil(geometry.T) + 1.0)
    case = _travelling("singular", geometry, f, fprime, kinks, math.nextafter(0.5, 0.0), notes="s just below 1/2")

    def u2(x, t):
        x = np.asarray(x, float)
        t = np.asarray(t, float)
        return np.where(x <= t, 0.5 * np.abs(np.sin(math.pi * (x - t))), 0.0)

    return ManufacturedCase(
        case.name, geometry, u2, case.g, case.w, case.sobolev_s, case.kinks, notes=case.notes
    )


def get_case(name: str, geometry: ProblemGeometry | None = None) -> ManufacturedCase:
    if name == "smooth":
        return case_smooth(geometry)
    if name == "singular":
        return case_singular(geometry)
    if name == "traveling":
        return case_traveling(geometry=geometry)
    raise ValueError(f"unknown case {name!r}")
