"""Compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Reports the best wall time of each backend on workloads shaped like the
real ones: a full H_T matrix for 1024 unknowns, Gram products for the
spectral sweep, and Jacobi on a 200 x 200 symmetric matrix.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from wavebem import kernels
from wavebem.assembly import _trial_windows
from wavebem.mesh import ProblemGeometry, uniform_mesh


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def workloads():
    mesh = uniform_mesh(ProblemGeometry(3.0, 6.0), 512)
    a, b, c, d = _trial_windows(mesh)
    A = np.broadcast_to(a[:, None], c.shape).ravel().copy()
    B = np.broadcast_to(b[:, None], c.shape).ravel().copy()
    C, D = c.ravel().copy(), d.ravel().copy()

    p = 2.0 * np.arange(0, 16000, 2) + 1.0
    q = 2.0 * np.arange(0, 2000, 2) + 1.0
    x = np.random.default_rng(1).standard_normal(q.size)
    theta = 0.5 * math.pi / 4.0

    M = np.random.default_rng(2).standard_normal((200, 200))
    M = M + M.T

    return {
        "rect_log_tan (1024^2 entries)": lambda k: k.rect_log_tan(A, B, C, D, 6.0),
        "coupling matvec+rmatvec (8000x1000)": lambda k: k.coupling_rmatvec(p, q, theta, 1.5, k.coupling_matvec(p, q, theta, 1.5, x)),
        "coupling_block (8000x1000)": lambda k: k.coupling_block(p, q, theta, 1.5),
        "jacobi_eigenvalues (200x200)": lambda k: np.sort(k.jacobi_eigenvalues(M)[0]),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if not kernels.compiled_available():
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    fast, slow = kernels.backend("compiled"), kernels.backend("python")
    print(f"{'workload':40s} {'compiled':>10s} {'python':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, fn in workloads().items():
        t_fast, out_fast = _best(lambda: fn(fast), args.repeat)
        t_slow, out_slow = _best(lambda: fn(slow), args.repeat)
        diff = float(np.max(np.abs(np.ravel(out_fast) - np.ravel(out_slow))))
        print(f"{name:40s} {t_fast:10.3f} {t_slow:10.3f} {t_slow / t_fast:8.1f} {diff:10.1e}")


if __name__ == "__main__":
    main()
