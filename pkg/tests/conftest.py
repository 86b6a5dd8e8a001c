"""Shared high-precision oracles and hypothesis profile."""

import mpmath as mp
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def mp_kernel(m, x):
    """Periodic Bernoulli kernel evaluated with mpmath (current precision)."""
    x = mp.mpf(x)
    x -= mp.floor(x)
    return -mp.bernpoly(2 * m, x) / mp.factorial(2 * m)


def mp_dense_solution(m, nodes, z, dps=50):
    """Coefficients and multiplier of the bordered system in high precision."""
    with mp.workdps(dps):
        x = [mp.mpf(float(v)) for v in nodes]
        n = len(x)
        A = mp.matrix(n + 1, n + 1)
        for i in range(n):
            for k in range(n):
                A[i, k] = mp_kernel(m, x[i] - x[k])
            A[i, n] = 1
            A[n, i] = 1
        rhs = mp.matrix([mp_kernel(m, mp.mpf(float(z)) - xi) for xi in x] + [1])
        sol = mp.lu_solve(A, rhs)
        return np.array([float(sol[i]) for i in range(n)]), float(sol[n])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
