import math
import os
import subprocess
import sys

import numpy as np
import pytest

from wavebem import kernels

compiled = pytest.mark.skipif(not kernels.compiled_available(), reason="compiled kernels not built")


def rectangles(rng, n, T):
    a = rng.uniform(0.0, T, n)
    b = np.minimum(a + rng.uniform(0.0, 1.0, n), T)
    c = rng.uniform(0.0, T, n)
    d = np.minimum(c + rng.uniform(-0.2, 1.0, n), T)
    # include coincident and touching rectangles
    c[:10], d[:10] = a[:10], b[:10]
    c[10:20] = b[10:20]
    d[10:20] = np.minimum(c[10:20] + 0.5, T)
    return a, b, c, d


@compiled
def test_rect_log_tan_parity(rng):
    args = rectangles(rng, 500, 4.0)
    fast = kernels.backend("compiled").rect_log_tan(*args, 4.0)
    slow = kernels.backend("python").rect_log_tan(*args, 4.0)
    np.testing.assert_allclose(fast, slow, atol=1e-13)


def test_rect_log_tan_against_quadrature():
    # smooth rectangle away from the singular set
    T = 4.0
    py = kernels.backend("python")
    val = float(py.rect_log_tan(np.array([0.5]), np.array([1.0]), np.array([2.0]), np.array([2.5]), T)[0])
    xi, wi = np.polynomial.legendre.leggauss(30)
    t = 0.75 + 0.25 * xi
    s = 2.25 + 0.25 * xi
    kappa = math.pi / (4 * T)
    K = np.log(np.tan(kappa * (s[None, :] + t[:, None]))) + np.log(np.tan(kappa * np.abs(t[:, None] - s[None, :])))
    ref = 0.0625 * float(wi @ K @ wi)
    assert val == pytest.approx(ref, rel=1e-12)


@compiled
def test_coupling_kernels_parity(rng):
    p = 2.0 * np.arange(0, 300, 2) + 1.0
    q = 2.0 * np.arange(0, 80, 2) + 1.0
    args = (p, q, 0.4, 1.2)
    fast, slow = kernels.backend("compiled"), kernels.backend("python")
    np.testing.assert_allclose(fast.coupling_block(*args), slow.coupling_block(*args), atol=1e-13)
    x = rng.standard_normal(q.size)
    y = rng.standard_normal(p.size)
    np.testing.assert_allclose(fast.coupling_matvec(*args, x), slow.coupling_matvec(*args, x), atol=1e-11)
    np.testing.assert_allclose(fast.coupling_rmatvec(*args, y), slow.coupling_rmatvec(*args, y), atol=1e-11)


@pytest.mark.parametrize("name", ["python", pytest.param("compiled", marks=compiled)])
def test_jacobi_eigenvalues(rng, name):
    X = rng.standard_normal((25, 25))
    A = X + X.T
    eig, sweeps = kernels.backend(name).jacobi_eigenvalues(A, 1e-13)
    np.testing.assert_allclose(np.sort(eig), np.linalg.eigvalsh(A), atol=1e-10)
    assert sweeps > 0


def test_backend_lookup():
    assert kernels.BACKEND in ("compiled", "python")
    with pytest.raises(ValueError):
        kernels.backend("fortran")


def test_pure_python_switch():
    env = dict(os.environ, WAVEBEM_PURE_PYTHON="1")
    code = "from wavebem import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
