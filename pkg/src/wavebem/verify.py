"""Self-checks run by ``wavebem verify``.

Every group evaluates a few invariants on deterministic inputs (fixed
seeds) and returns named results.  ``fast`` shrinks problem sizes so the
whole suite finishes in seconds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .assembly import assemble_energetic, assemble_ht, build_system, dual_norm_gram, eoc, l2_error, solve
from .cases import case_traveling
from .fourier import (
    SineSeries,
    apply_ht,
    half_norm_zero_start,
    kernel_pairing,
    pairing_dt_ht,
)
from .mesh import ProblemGeometry, uniform_mesh
from .operators import apply_V, direct_rhs, interior_solution
from .spectral import b_coeff, conjectured_constant, sqrt_lambda_max

__all__ = ["CheckResult", "GROUPS", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    ok: bool
    value: float
    bound: float
    relation: str = "<="

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status}  {self.group}/{self.name}: {self.value:.3e} {self.relation} {self.bound:.3e}"


def _le(group, name, value, bound):
    return CheckResult(group, name, bool(value <= bound), float(value), float(bound))


def _ge(group, name, value, bound):
    return CheckResult(group, name, bool(value >= bound), float(value), float(bound), ">=")


def _random_series(rng, K, T):
    return SineSeries(T, rng.standard_normal(K) / (1.0 + np.arange(K)) ** 2)


def check_transforms(fast: bool) -> list[CheckResult]:
    rng = np.random.default_rng(101)
    T = 2.5
    out = []
    xi, wi = np.polynomial.legendre.leggauss(200)
    t = 0.5 * T * (1.0 + xi)
    wt = 0.5 * T * wi
    worst_iso = worst_pair = 0.0
    for _ in range(3 if fast else 10):
        u = _random_series(rng, 12, T)
        hu = apply_ht(u)
        iso = abs(math.sqrt(np.sum(wt * hu(t) ** 2)) - math.sqrt(np.sum(wt * u(t) ** 2)))
        worst_iso = max(worst_iso, iso)
        lhs = float(np.sum(wt * u.derivative()(t) * hu(t)))
        worst_pair = max(worst_pair, abs(lhs - half_norm_zero_start(u) ** 2))
    out.append(_le("transforms", "ht_isometry", worst_iso, 1e-12))
    out.append(_le("transforms", "pairing_identity", worst_pair, 1e-12))
    u = _random_series(rng, 8, T)
    z = _random_series(rng, 8, T)
    direct = kernel_pairing(u.derivative(), z.derivative(), T)
    out.append(_le("transforms", "kernel_pairing", abs(direct - pairing_dt_ht(u, z)), 1e-8))
    return out


def check_operators(fast: bool) -> list[CheckResult]:
    case = case_traveling()
    geom = case.geometry
    Vw = apply_V(case.w_pp, geom)
    rhs = direct_rhs(case.g_pp, geom)
    ts = np.linspace(0.0, geom.T, 200 if fast else 1000)
    err = max(float(np.max(np.abs(Vw.comp0(ts) - rhs.comp0(ts)))), float(np.max(np.abs(Vw.compL(ts) - rhs.compL(ts)))))
    rng = np.random.default_rng(202)
    pts = rng.uniform([0.01, 0.01], [geom.L - 0.01, geom.T - 0.01], size=(20 if fast else 100, 2))
    rep = max(abs(interior_solution(case.w_pp, case.g_pp, x, t, geom) - float(case.exact_u(x, t))) for x, t in pts)
    return [_le("operators", "travelling_wave_identity", err, 1e-12), _le("operators", "interior_representation", rep, 1e-12)]


def check_assembly(fast: bool) -> list[CheckResult]:
    out = []
    sizes = (4,) if fast else (8, 16)
    for L, T in ((3.0, 6.0), (3.0, 2.0)):
        worst = 0.0
        for N in sizes:
            mesh = uniform_mesh(ProblemGeometry(L, T), N, N + 1)
            worst = max(worst, float(np.max(np.abs(assemble_ht(mesh, "kernel") - assemble_ht(mesh, "fourier")))))
        out.append(_le("assembly", f"kernel_vs_fourier_T{T:g}", worst, 1e-8))
    return out


def check_coercivity(fast: bool) -> list[CheckResult]:
    rng = np.random.default_rng(303)
    geom = ProblemGeometry(3.0, 6.0)
    sizes = (8,) if fast else (8, 32)
    ener = ht = np.inf
    cont = 0.0
    for N in sizes:
        mesh = uniform_mesh(geom, N)
        h = np.concatenate([np.diff(mesh.nodes0), np.diff(mesh.nodesL)])
        E = assemble_energetic(mesh)
        A = assemble_ht(mesh)
        G = dual_norm_gram(mesh)
        for _ in range(20):
            x = rng.standard_normal(mesh.ndof)
            y = rng.standard_normal(mesh.ndof)
            ener = min(ener, float(x @ E @ x) / float(np.sum(h * x * x)))
            ht = min(ht, float(x @ A @ x) / float(x @ G @ x))
            cont = max(cont, abs(float(x @ A @ y)) / math.sqrt(float(x @ G @ x) * float(y @ G @ y)))
    return [
        _ge("coercivity", "energetic_rayleigh", ener, 0.25 - 1e-10),
        _ge("coercivity", "ht_rayleigh", ht, 0.24),
        _le("coercivity", "ht_continuity", cont, 1.0 + 1e-6),
    ]


def check_spectral(fast: bool) -> list[CheckResult]:
    rng = np.random.default_rng(404)
    asym = 0.0
    for _ in range(50):
        k, l = (int(v) for v in rng.integers(0, 60, size=2))
        r = float(rng.uniform(0.05, 0.95))
        asym = max(asym, abs(b_coeff(k, l, r, 1.0) - b_coeff(l, k, r, 1.0)))
    m = 100 if fast else 400
    diffs = max(abs(sqrt_lambda_max(1.0, T, m) - conjectured_constant(1.0, T)) for T in (2.0, 4.0))
    return [_le("spectral", "b_symmetry", asym, 1e-14), _le("spectral", "conjectured_constant", diffs, 0.05)]


def check_convergence(fast: bool) -> list[CheckResult]:
    case = case_traveling()
    levels = range(4, 7) if fast else range(4, 8)
    errs = []
    for level in levels:
        mesh = uniform_mesh(case.geometry, 2 ** (level + 1))
        errs.append(l2_error(solve(build_system(mesh, case, "energetic")), case))
    return [_le("convergence", "travelling_energetic_eoc", abs(float(eoc(errs)[-1]) - 1.0), 0.05)]


def check_backends(fast: bool) -> list[CheckResult]:
    if not kernels.compiled_available():
        return []
    rng = np.random.default_rng(505)
    a = rng.uniform(0, 3, 200)
    b = a + rng.uniform(0.01, 1, 200)
    c = rng.uniform(0, 3, 200)
    d = c + rng.uniform(0.01, 1, 200)
    fast_k = kernels.backend("compiled").rect_log_tan(a, b, c, d, 4.0)
    slow_k = kernels.backend("python").rect_log_tan(a, b, c, d, 4.0)
    return [_le("backends", "rect_log_tan_parity", float(np.max(np.abs(fast_k - slow_k))), 1e-13)]


GROUPS: dict[str, Callable[[bool], list[CheckResult]]] = {
    "transforms": check_transforms,
    "operators": check_operators,
    "assembly": check_assembly,
    "coercivity": check_coercivity,
    "spectral": check_spectral,
    "convergence": check_convergence,
    "backends": check_backends,
}


def run_checks(fast: bool = False, groups=None, echo=None) -> list[CheckResult]:
    """Run the selected groups; ``echo`` receives one line per result."""
    results = []
    for name in groups or GROUPS:
        start = time.perf_counter()
        try:
            group_results = GROUPS[name](fast)
        except ArithmeticError as exc:
            group_results = [CheckResult(name, f"raised {type(exc).__name__}: {exc}", False, math.nan, math.nan)]
        for r in group_results:
            results.append(r)
            if echo is not None:
                echo(r.line())
        if echo is not None:
            echo(f"      {name} done in {time.perf_counter() - start:.1f}s")
    return results

