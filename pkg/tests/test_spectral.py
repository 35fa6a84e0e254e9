import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavebem.fourier import frequencies
from wavebem.spectral import (
    CouplingMatrixSpec,
    b_coeff,
    conjectured_constant,
    coupling_operator,
    figure1_sweep,
    lambda_max_Cm,
    sqrt_lambda_max,
)


def explicit_B(L, T, k_max, m):
    return np.array([[b_coeff(k, l, L, T) for l in range(m + 1)] for k in range(k_max + 1)])


def test_b_examples():
    assert b_coeff(0, 0, 1.0, 2.0) == pytest.approx(math.sqrt(0.5))
    assert b_coeff(1, 0, 1.0, 2.0) == 0.0
    # diagonal: 2 (1 - r) cos((k + 1/2) pi r)
    assert b_coeff(3, 3, 1.0, 4.0) == pytest.approx(1.5 * math.cos(3.5 * math.pi / 4))
    with pytest.raises(ValueError):
        b_coeff(0, 0, 2.0, 2.0)
    with pytest.raises(ValueError):
        b_coeff(-1, 0, 1.0, 2.0)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 400), st.integers(0, 400), st.floats(0.01, 0.99))
def test_b_symmetric_and_parity(k, l, r):
    b = b_coeff(k, l, r, 1.0)
    assert abs(b - b_coeff(l, k, r, 1.0)) <= 1e-14 * max(1.0, abs(b))
    if (k - l) % 2:
        assert b == 0.0


@pytest.mark.parametrize("parity", [0, 1])
def test_operator_matches_explicit_block(parity):
    L, T, m, k_max = 1.0, 3.3, 9, 30
    op = coupling_operator(L, T, m, k_max, parity)
    B = explicit_B(L, T, k_max, m)[parity::2, parity::2]
    x = np.random.default_rng(parity).standard_normal(op.shape[1])
    np.testing.assert_allclose(op.matvec(x), B @ x, atol=1e-12)
    y = np.random.default_rng(9).standard_normal(op.shape[0])
    np.testing.assert_allclose(op.rmatvec(y), B.T @ y, atol=1e-12)


@pytest.mark.parametrize("T", [1.5, 2.5, 4.0, 7.3])
def test_lambda_max_against_dense_eigensolver(T):
    m, k_max = 20, 200
    B = explicit_B(1.0, T, k_max, m)
    ref = np.linalg.eigvalsh(B.T @ B)[-1]
    spec = CouplingMatrixSpec(1.0, T, m, k_max)
    assert lambda_max_Cm(spec, tol=1e-12) == pytest.approx(ref, rel=1e-9)
    assert lambda_max_Cm(spec, tol=1e-13, method="power") == pytest.approx(ref, rel=1e-7)


def test_trivial_and_validation():
    assert lambda_max_Cm(CouplingMatrixSpec(1.0, 1.0, 10)) == 0.0
    with pytest.raises(ValueError):
        CouplingMatrixSpec(1.0, 2.0, -1)
    with pytest.raises(ValueError):
        CouplingMatrixSpec(1.0, 2.0, 10, k_max=5)
    with pytest.raises(ValueError):
        lambda_max_Cm(CouplingMatrixSpec(1.0, 2.0, 3), method="qr")


@pytest.mark.parametrize("T", [1.3, 2.0, 3.7])
def test_parseval_invariant(T):
    """``<H_T V w, w>`` from the coupling coefficients equals direct quadrature."""
    L, m = 1.0, 12
    rng = np.random.default_rng(int(10 * T))
    a0, aL = rng.standard_normal((2, m + 1))
    om = frequencies(m + 1)

    def W(a, t):
        t = np.asarray(t, float)
        s = np.sin(np.outer(np.maximum(t, 0.0), om) / T) @ (a * T / om)
        return np.where(t > 0.0, s, 0.0)

    xi, wi = np.polynomial.legendre.leggauss(80)

    def integral(f):
        total = 0.0
        for lo, hi in ((0.0, L), (L, T)):
            x = lo + 0.5 * (hi - lo) * (1.0 + xi)
            total += 0.5 * (hi - lo) * np.sum(wi * f(x))
        return total

    def pairing(v, a):
        # <H_T v, w> = (T/2) sum v_k a_k for the cosine series w
        z = np.array([2.0 / T * integral(lambda t: v(t) * np.sin(o * t / T)) for o in om])
        return 0.5 * T * float(z @ a)

    v0 = lambda t: 0.5 * (W(a0, t) + W(aL, t - L))
    vL = lambda t: 0.5 * (W(a0, t - L) + W(aL, t))
    direct = pairing(v0, a0) + pairing(vL, aL)

    scale = np.sqrt((2 * np.arange(m + 1) + 1) * math.pi)
    h0, hL = a0 / scale, aL / scale
    B = explicit_B(L, T, m, m) if T > L else np.zeros((m + 1, m + 1))
    formula = 0.5 * T**2 * (h0 @ h0 + hL @ hL + hL @ B @ h0)
    assert direct == pytest.approx(formula, rel=1e-8, abs=1e-10)


def test_conjectured_constant_values():
    assert conjectured_constant(1.0, 1.0) == 0.0
    assert conjectured_constant(1.0, 2.0) == pytest.approx(1.0)
    assert conjectured_constant(1.0, 3.0) == pytest.approx(2.0 - 4.0 * math.sin(math.pi / 8) ** 2)
    with pytest.raises(ValueError):
        conjectured_constant(0.0, 1.0)


@pytest.mark.parametrize("T", [2.0, 3.0, 5.0])
def test_sqrt_lambda_close_to_conjecture_and_below_two(T):
    value = sqrt_lambda_max(1.0, T, 100)
    assert value < 2.0
    assert abs(value - conjectured_constant(1.0, T)) <= 0.05


def test_sweep_rows():
    rows = figure1_sweep(1.0, [0.5, 1.0, 2.0], 40)
    assert [r.T for r in rows] == [0.5, 1.0, 2.0]
    assert rows[0].sqrt_lambda_max == 0.0 and rows[1].abs_diff == 0.0
    assert rows[2].abs_diff < 0.05
    with pytest.raises(ValueError):
        figure1_sweep(1.0, [2.0], 0)
