import numpy as np
import pytest

# filled by test_acceptance.py; printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def gauss_integral(f, a, b, order=60, pieces=64):
    """Composite Gauss-Legendre rule, used as an independent quadrature oracle."""
    xi, wi = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, pieces + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    x = lo + 0.5 * (hi - lo) * (1.0 + xi)
    w = 0.5 * (hi - lo) * wi
    return float(np.sum(w * f(x)))
