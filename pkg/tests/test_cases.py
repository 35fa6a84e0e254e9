import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from wavebem.cases import case_singular, case_smooth, case_traveling, get_case
from wavebem.mesh import ProblemGeometry


@pytest.mark.parametrize("name", ["smooth", "singular", "traveling"])
def test_boundary_data_are_traces(name):
    case = get_case(name)
    L, T = case.geometry.L, case.geometry.T
    t = np.linspace(0.0, T, 97)
    np.testing.assert_allclose(case.g.comp0(t), case.exact_u(0.0, t), atol=1e-14)
    np.testing.assert_allclose(case.g.compL(t), case.exact_u(L, t), atol=1e-14)


@pytest.mark.parametrize("name", ["smooth", "singular", "traveling"])
def test_densities_are_normal_derivatives(name):
    case = get_case(name)
    L = case.geometry.L
    # avoid the kinks of the singular profile
    t = np.linspace(0.13, case.geometry.T - 0.13, 41) + 0.01
    eps = 1e-6
    dx0 = (case.exact_u(eps, t) - case.exact_u(-eps, t)) / (2 * eps)
    dxL = (case.exact_u(L + eps, t) - case.exact_u(L - eps, t)) / (2 * eps)
    np.testing.assert_allclose(case.w.comp0(t), -dx0, atol=1e-6)
    np.testing.assert_allclose(case.w.compL(t), dxL, atol=1e-6)


def test_smooth_solution_formula():
    case = case_smooth()
    assert float(case.exact_u(0.5, 1.5)) == pytest.approx(0.5 * (-1.0) ** 3 * (-1.0) ** 3)
    assert float(case.exact_u(0.5, 3.0)) == 0.0
    assert case.w_pp is not None
    t = np.linspace(0.0, 6.0, 31)
    np.testing.assert_allclose(case.w_pp.comp0(t), case.w.comp0(t), atol=1e-13)


def test_singular_case_regularity_and_kinks():
    case = case_singular()
    assert case.sobolev_s < 0.5
    np.testing.assert_array_equal(case.kinks.comp0, [1.0, 2.0, 3.0, 4.0, 5.0])
    np.testing.assert_array_equal(case.kinks.compL, [3.0, 4.0, 5.0])
    # the density jumps by pi at every integer time
    jump = case.w.comp0(1.0 + 1e-12) - case.w.comp0(1.0 - 1e-12)
    assert abs(jump) == pytest.approx(math.pi, rel=1e-6)


def test_traveling_custom_pulse_and_validation():
    case = case_traveling(Polynomial([0.0, 0.0, 1.0, -1.0]), end=1.0, geometry=ProblemGeometry(1.0, 3.0))
    assert case.geometry.L == 1.0
    with pytest.raises(ValueError):
        case_traveling(Polynomial([1.0, 1.0]))
    with pytest.raises(ValueError):
        get_case("unknown")
