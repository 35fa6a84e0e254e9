import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import Polynomial

from wavebem.piecewise import PiecewisePoly, union_breaks


def random_pp(rng, n=5, deg=3, lo=0.0, hi=4.0):
    breaks = np.sort(np.concatenate([[lo, hi], rng.uniform(lo, hi, n - 1)]))
    return PiecewisePoly(breaks, rng.standard_normal((n, deg + 1)))


def test_from_callable_matches_polynomials():
    p, q = Polynomial([1.0, -2.0, 0.5]), Polynomial([0.0, 3.0])
    f = PiecewisePoly.from_callable([0.0, 1.0, 2.5], [p, q])
    t = np.array([0.0, 0.3, 0.99, 1.2, 2.4])
    expected = np.where(t < 1.0, p(t), q(t))
    np.testing.assert_allclose(f(t), expected, atol=1e-14)


def test_zero_outside_support():
    f = PiecewisePoly([1.0, 2.0], [[3.0, 1.0]])
    assert f(0.5) == 0.0 and f(2.5) == 0.0
    assert f(1.0) == 3.0


def test_constructor_validation():
    with pytest.raises(ValueError):
        PiecewisePoly([0.0, 1.0, 1.0], [[1.0], [2.0]])
    with pytest.raises(ValueError):
        PiecewisePoly([0.0, 1.0], [[1.0], [2.0]])
    with pytest.raises(ValueError):
        PiecewisePoly([0.0, 1.0], [[np.nan]])


def test_arrays_are_read_only():
    f = PiecewisePoly([0.0, 1.0], [[1.0, 2.0]])
    with pytest.raises(ValueError):
        f.coeffs[0, 0] = 5.0


def test_antiderivative_of_derivative(rng):
    # a continuous function: the antiderivative of a random one
    f = random_pp(rng).antiderivative()
    g = f.derivative().antiderivative()
    t = np.linspace(0.0, 4.0, 37)
    np.testing.assert_allclose(g(t), f(t) - f(0.0), atol=1e-11)


def test_antiderivative_is_continuous_and_matches_integrate(rng):
    f = random_pp(rng, n=7, deg=2)
    F = f.antiderivative()
    np.testing.assert_allclose(F.left_values()[1:], F.right_values()[:-1], atol=1e-12)
    assert F(3.3) == pytest.approx(f.integrate(0.0, 3.3), abs=1e-12)
    R = f.antiderivative_rev()
    assert R(4.0) == pytest.approx(0.0, abs=1e-12)
    assert R(1.7) == pytest.approx(-f.integrate(1.7, 4.0), abs=1e-12)


def test_integral_against_quadrature(rng):
    f = random_pp(rng, n=4, deg=4)
    total = 0.0
    xi, wi = np.polynomial.legendre.leggauss(10)
    for a, b in zip(f.breaks[:-1], f.breaks[1:]):
        x = 0.5 * (a + b) + 0.5 * (b - a) * xi
        # evaluate strictly inside the piece
        total += 0.5 * (b - a) * np.sum(wi * f(x))
    assert f.integral() == pytest.approx(total, rel=1e-12)


def test_shifted_window():
    f = PiecewisePoly([0.0, 1.0, 2.0], [[0.0, 1.0], [1.0, -1.0]])
    g = f.shifted(3.0, 0.0, 6.0)
    assert g.support == (0.0, 6.0)
    t = np.array([0.5, 2.9, 3.5, 4.0, 4.5, 5.5])
    np.testing.assert_allclose(g(t), [0.0, 0.0, 0.5, 1.0, 0.5, 0.0], atol=1e-15)
    # clipping at the window end
    h = f.shifted(5.5, 0.0, 6.0)
    assert h.support == (0.0, 6.0)
    assert h(6.0) == pytest.approx(0.5)


def test_arithmetic_and_inner(rng):
    f = random_pp(rng, n=3, deg=2)
    g = random_pp(rng, n=4, deg=1)
    t = np.linspace(0.05, 3.95, 50)
    np.testing.assert_allclose((f + g)(t), f(t) + g(t), atol=1e-12)
    np.testing.assert_allclose((f - g)(t), f(t) - g(t), atol=1e-12)
    np.testing.assert_allclose((2.0 * f)(t), 2.0 * f(t), atol=1e-12)
    np.testing.assert_allclose((-f)(t), -f(t), atol=1e-12)
    np.testing.assert_allclose(f.product(g)(t), f(t) * g(t), atol=1e-11)
    assert f.norm_l2() ** 2 == pytest.approx(f.inner(f), rel=1e-12)


def test_union_breaks_merges_close_points():
    out = union_breaks(np.array([0.0, 1.0, 2.0]), np.array([1.0 + 1e-15, 3.0]), lo=0.0, hi=2.5)
    np.testing.assert_array_equal(out, [0.0, 1.0, 2.0, 2.5])


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(-3, 3), min_size=1, max_size=4),
    st.floats(0.1, 2.0),
    st.floats(0.01, 0.99),
)
def test_refine_preserves_values(coef, width, cut):
    f = PiecewisePoly([0.0, width], [coef])
    g = f.refine([0.0, cut * width, width])
    t = np.linspace(0.0, width, 11)
    np.testing.assert_allclose(g(t), f(t), atol=1e-11)
