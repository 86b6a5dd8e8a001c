import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import polygamma

from conftest import mp_kernel
from periodic_interp.errors import ConvergenceError, DomainError
from periodic_interp.kernel import (
    MAX_ORDER,
    SeriesControl,
    bernoulli_kernel,
    big_lambda,
    check_order,
    discrete_operator,
    euler_frobenius,
    frobenius_data,
    lattice_sum,
    lattice_sum_with_bound,
    operator_radius,
    operator_tail_bound,
    reduce_point,
    residue_class_sum,
    residue_class_sums,
    stable_roots,
)

orders = st.integers(1, MAX_ORDER)
reals = st.floats(-50, 50, allow_nan=False)


# -- points and controls ------------------------------------------------------

def test_reduce_point_range():
    assert reduce_point(1.0) == 0.0
    assert reduce_point(-1e-20) == 0.0
    assert reduce_point(2.25) == 0.25
    assert np.array_equal(reduce_point(np.array([-0.75, 3.5])), [0.25, 0.5])


@given(reals, st.integers(-20, 20))
def test_reduce_point_integer_shift(x, k):
    r = reduce_point(x)
    assert 0.0 <= r < 1.0
    assert abs(reduce_point(x + k) - r) <= 1e-12 or abs(abs(reduce_point(x + k) - r) - 1) <= 1e-12


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_reduce_point_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        reduce_point(bad)


@pytest.mark.parametrize("m", [0, -1, 13, 2.0, True])
def test_check_order_rejects(m):
    with pytest.raises(DomainError):
        check_order(m)


def test_check_order_configurable_ceiling():
    assert check_order(15, max_order=20) == 15


@pytest.mark.parametrize(
    "kwargs", [{"max_terms": 0}, {"abs_tol": 0.0}, {"abs_tol": -1.0}, {"em_order": -1}, {"max_terms": 2.5}]
)
def test_series_control_validation(kwargs):
    with pytest.raises(DomainError):
        SeriesControl(**kwargs)


# -- Bernoulli kernel -----------------------------------------------------------

def test_kernel_reference_values():
    assert bernoulli_kernel(1, 0.0) == pytest.approx(-1 / 12, abs=1e-16)
    assert bernoulli_kernel(1, 0.5) == pytest.approx(1 / 24, abs=1e-16)
    # frozen from exact rational arithmetic
    assert bernoulli_kernel(2, 0.3) == pytest.approx(-0.000448611111111111111, rel=1e-14)
    assert bernoulli_kernel(3, 0.71) == pytest.approx(8.49579523538359788e-06, rel=1e-13)


@given(orders, reals)
def test_kernel_even_and_periodic(m, x):
    v = bernoulli_kernel(m, x)
    scale = abs(bernoulli_kernel(m, 0.0))
    assert abs(bernoulli_kernel(m, -x) - v) <= 1e-13 * scale
    assert abs(bernoulli_kernel(m, x + 1.0) - v) <= 1e-13 * scale


@pytest.mark.parametrize("m", [1, 2, 3])
def test_kernel_matches_fourier_series(m):
    x = np.random.default_rng(m).random(100)
    k = np.arange(1, 100_001, dtype=float)
    series = np.zeros_like(x)
    # small terms first
    for kk in np.array_split(k[::-1], 20):
        series += (2 * np.cos(2 * np.pi * np.outer(x, kk)) / (2 * np.pi * kk) ** (2 * m)).sum(axis=1)
    series *= (-1) ** m
    assert np.abs(bernoulli_kernel(m, x) - series).max() <= 1e-8


@pytest.mark.parametrize("m", range(1, MAX_ORDER + 1))
def test_kernel_matches_mpmath(m):
    xs = np.linspace(0, 1, 23)[:-1] + 0.0123
    with mp.workdps(40):
        ref = np.array([float(mp_kernel(m, x)) for x in xs])
    got = bernoulli_kernel(m, xs)
    assert np.abs(got - ref).max() <= 1e-14 * np.abs(ref).max()


def test_kernel_shape_preserved():
    assert isinstance(bernoulli_kernel(2, 0.1), float)
    assert bernoulli_kernel(2, np.zeros((3, 4))).shape == (3, 4)


# -- Euler-Frobenius polynomials ----------------------------------------------

@pytest.mark.parametrize(
    "degree, coeffs",
    [(0, [1]), (1, [1, 1]), (2, [1, 4, 1]), (3, [1, 11, 11, 1]), (4, [1, 26, 66, 26, 1])],
)
def test_euler_frobenius_small(degree, coeffs):
    assert list(euler_frobenius(degree).coefficients) == coeffs


@pytest.mark.parametrize("degree", range(0, 23))
def test_euler_frobenius_structure(degree):
    c = list(euler_frobenius(degree).coefficients)
    assert c == c[::-1]
    assert all(isinstance(v, int) and v > 0 for v in c)
    assert c[0] == c[-1] == 1


@pytest.mark.parametrize("n", [0, 1, 2, 4, 6, 9])
def test_euler_frobenius_generating_identity(n):
    # sum_{k>=1} k^(n+1) t^k = t E_n(t) / (1 - t)^(n+2), checked exactly at t = 1/5
    t = Fraction(1, 5)
    c = euler_frobenius(n).coefficients
    rhs = t * sum(Fraction(a) * t**i for i, a in enumerate(c)) / (1 - t) ** (n + 2)
    partial = sum(Fraction(k ** (n + 1)) * t**k for k in range(1, 400))
    assert abs(float(rhs - partial)) < 1e-200 + float(rhs) * 1e-15


def test_euler_frobenius_degree_limit():
    with pytest.raises(DomainError):
        euler_frobenius(24)
    with pytest.raises(DomainError):
        euler_frobenius(-1)


def test_stable_roots_known():
    assert stable_roots(euler_frobenius(0)) == ()
    (q,) = stable_roots(euler_frobenius(2))
    assert q == pytest.approx(math.sqrt(3) - 2, abs=1e-15)
    q4 = stable_roots(euler_frobenius(4))
    assert q4 == pytest.approx([-0.430575347099973791851, -0.0430962882032646538227], rel=1e-14)


@pytest.mark.parametrize("m", range(1, MAX_ORDER + 1))
def test_stable_roots_structure(m):
    data = frobenius_data(m)
    roots = data.stable_roots
    assert len(roots) == m - 1
    assert list(roots) == sorted(roots)
    for q in roots:
        assert -1 < q < 0
        assert abs(data(q)) <= 1e-12 * data.magnitude(q)
        # the reciprocal is a root too; compare on the reversed polynomial scale
        r = 1.0 / q
        assert abs(data(r)) <= 1e-10 * data.magnitude(r)


def test_stable_roots_rejects_odd_degree():
    with pytest.raises(DomainError):
        stable_roots(euler_frobenius(3))


# -- discrete operator --------------------------------------------------------------

@pytest.mark.parametrize("h", [1.0, 0.25, 0.1])
def test_operator_second_difference(h):
    assert discrete_operator(1, h, 0) == pytest.approx(-2 / h**2, rel=1e-15)
    assert discrete_operator(1, h, 1) == pytest.approx(1 / h**2, rel=1e-15)
    assert discrete_operator(1, h, -1) == pytest.approx(1 / h**2, rel=1e-15)
    assert discrete_operator(1, h, 5) == 0.0


def test_operator_golden_m2():
    # 25-digit values, confirmed by Fourier inversion of the operator symbol
    assert discrete_operator(2, 1.0, 0) == pytest.approx(14.35382907247958256698807, rel=1e-14)
    assert discrete_operator(2, 1.0, 1) == pytest.approx(-10.70765814495916513397614, rel=1e-14)
    assert discrete_operator(2, 1.0, 3) == pytest.approx(-1.199555884469146741689776, rel=1e-14)


@given(st.integers(1, 6), st.integers(-60, 60), st.sampled_from([1.0, 0.5, 0.125]))
def test_operator_even(m, beta, h):
    assert discrete_operator(m, h, beta) == discrete_operator(m, h, -beta)


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_operator_geometric_decay(m):
    b = np.arange(2, 60)
    d = np.abs(discrete_operator(m, 1.0, b))
    assert np.all(np.diff(d) <= 0)
    q = np.array(frobenius_data(m).stable_roots)
    w = (1 - q) ** (2 * m + 1) / (q * euler_frobenius(2 * m - 1)(q))
    K = math.factorial(2 * m - 1) * np.abs(w).sum()
    rho = np.abs(q).max()
    assert np.all(d <= K * rho**b * (1 + 1e-12))


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_operator_tail_bound_is_rigorous(m):
    h = 0.125
    for T in (2, 10, 20):
        actual = 2 * np.abs(discrete_operator(m, h, np.arange(T + 1, T + 400))).sum()
        assert actual <= operator_tail_bound(m, h, T) * (1 + 1e-12)
    T = operator_radius(m, h, 1e-9)
    assert operator_tail_bound(m, h, T) <= 1e-9


def _convolve_kernel(m, N, T):
    h = 1.0 / N
    g = np.arange(-T, T + 1)
    D = discrete_operator(m, h, g)
    return np.array([h * np.dot(D, bernoulli_kernel(m, h * (b - g))) for b in range(N)])


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("N", [4, 8])
def test_operator_inverts_kernel(m, N):
    T = operator_radius(m, 1.0 / N, 1e-9)
    got = _convolve_kernel(m, N, T)
    expected = (np.arange(N) % N == 0) - 1.0 / N
    assert np.abs(got - expected).max() <= 1e-10


def symbol_sum(m, h, sigma):
    """``sum_g h^2m / (g - sigma h)^2m`` through the trigamma family."""
    a = reduce_point(sigma * h)
    return (polygamma(2 * m - 1, 1 - a) + polygamma(2 * m - 1, a)) / math.factorial(2 * m - 1) * h ** (2 * m)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("N", [4, 8])
def test_operator_on_exponentials(m, N):
    h = 1.0 / N
    T = operator_radius(m, h, 1e-9)
    g = np.arange(-T, T + 1)
    D = discrete_operator(m, h, g)
    for sigma in [0.3, 1, 2, 2.5, N - 1, N, 2 * N, -3.25]:
        conv = np.dot(D, np.exp(-2j * np.pi * sigma * h * g))
        if float(sigma * h).is_integer():
            expected = 0.0
        else:
            expected = (-1) ** m * (2 * np.pi) ** (2 * m) / symbol_sum(m, h, sigma)
        # truncation tail plus rounding of terms as large as |D[0]|
        budget = operator_tail_bound(m, h, T) + 1e-14 * np.abs(D).sum()
        assert abs(conv - expected) <= budget


def test_operator_identity_in_high_precision():
    # the same identity with exact-ish arithmetic leaves no residue
    m, N = 3, 8
    with mp.workdps(40):
        h = mp.mpf(1) / N
        q = [mp.re(r) for r in mp.polyroots([1, 26, 66, 26, 1], extraprec=100) if abs(r) < 1]
        e5 = euler_frobenius(5).coefficients

        def D(b):
            b = abs(b)
            w = [(1 - r) ** 7 / (r * sum(c * r**i for i, c in enumerate(e5))) for r in q]
            geo = sum(wi * r**b for wi, r in zip(w, q))
            base = geo if b >= 2 else (1 + geo if b == 1 else -32 + geo)
            return 120 / h**6 * base

        for b in (0, 1, 4, 9):
            assert float(D(b)) == pytest.approx(discrete_operator(m, 1 / N, b), rel=1e-14)
        conv = mp.fsum(D(g) * mp.expjpi(-2 * 2 * h * g) for g in range(-120, 121))
        S = mp.nsum(lambda g: h**6 / (g - 2 * h) ** 6, [-mp.inf, mp.inf])
        assert abs(conv - (-1) * (2 * mp.pi) ** 6 / S) < mp.mpf(10) ** -25


# -- lattice sums ----------------------------------------------------------------

def test_lattice_sum_reference():
    assert lattice_sum(1, 2, 1) == pytest.approx(math.pi**2 / 4, rel=1e-15)
    assert big_lambda(1, 2, 1) == pytest.approx(4 / math.pi**2, rel=1e-15)


@pytest.mark.parametrize("m, N, j", [(1, 3, 1), (2, 5, 2), (3, 8, 4), (5, 7, 3), (12, 32, 16), (2, 16, 1)])
def test_lattice_sum_matches_mpmath(m, N, j):
    with mp.workdps(30):
        ref = mp.nsum(lambda g: 1 / (N * g + j) ** (2 * m), [-mp.inf, mp.inf])
    value, bound = lattice_sum_with_bound(m, N, j)
    assert value == pytest.approx(float(ref), rel=2e-15)
    assert bound <= 1e-12


@given(st.integers(1, 8), st.integers(2, 40), st.integers(-200, 200))
def test_lattice_sum_symmetries(m, N, j):
    if j % N == 0:
        return
    s = lattice_sum(m, N, j)
    assert s > 0
    assert lattice_sum(m, N, -j) == s
    assert lattice_sum(m, N, j + N) == s
    assert big_lambda(m, N, j) == 1.0 / s


def test_lattice_sum_singular():
    with pytest.raises(DomainError, match="singular lattice sum"):
        lattice_sum(2, 4, 8)


def test_lattice_sum_plain_truncation():
    plain = SeriesControl(em_order=0)
    assert lattice_sum(3, 5, 2, plain) == pytest.approx(lattice_sum(3, 5, 2), rel=1e-12)
    # without tail corrections m = 1 cannot reach 1e-12 within 1e5 terms
    with pytest.raises(ConvergenceError):
        lattice_sum(1, 5, 2, plain)


def test_lattice_sum_reports_unreachable_tolerance():
    with pytest.raises(ConvergenceError):
        lattice_sum(1, 5, 1, SeriesControl(max_terms=3, abs_tol=1e-30))


# -- residue class sums ---------------------------------------------------------

@pytest.mark.parametrize("m, N", [(1, 4), (2, 5), (3, 8)])
def test_class_sums_against_direct(m, N):
    u = np.array([0.0, 0.137, 0.5, 0.9])
    R = residue_class_sums(m, N, u)
    t = np.arange(-20000, 20001)
    for j in range(1, N):
        k = (N * t + j).astype(float)
        direct = (np.exp(2j * np.pi * np.outer(u, k)) / k ** (2 * m)).sum(axis=1)
        # integral bound on the terms the direct sum leaves out
        tail = 2.0 / (N ** (2 * m) * (2 * m - 1) * (20000 - 1) ** (2 * m - 1))
        assert np.abs(R[:, j] - direct).max() <= tail + 1e-13


@given(st.integers(1, 6), st.integers(2, 24), st.floats(-3, 3))
def test_class_sums_structure(m, N, u):
    R = residue_class_sums(m, N, u)
    total = (-1) ** m * (2 * np.pi) ** (2 * m) * bernoulli_kernel(m, u)
    assert abs(R.sum() - total) <= 1e-12 * (2 * np.pi) ** (2 * m) * abs(bernoulli_kernel(m, 0.0))
    for j in range(1, N):
        assert abs(R[N - j] - np.conj(R[j])) <= 1e-13 * (1 + abs(R[j]))
    assert residue_class_sum(m, N, 1, u) == R[1]
