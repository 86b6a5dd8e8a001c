"""Primitive kernels and sums shared by the rest of the package.

Everything downstream is built from four primitives:

* the 1-periodic kernel ``K_m(x) = sum_{k != 0} exp(-2 pi i k x) / (2 pi i k)^(2m)``,
  evaluated in closed form as ``-B_2m({x}) / (2m)!``;
* the Euler-Frobenius polynomials ``E_n`` and the roots of ``E_{2m-2}`` inside
  the unit disc;
* the discrete analogue ``D_h^(m)[beta]`` of ``d^2m/dx^2m``;
* the lattice sums ``S_j = sum_{g in Z} (N g + j)^(-2m)`` and their
  oscillating relatives over a residue class modulo ``N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, NumericError

__all__ = [
    "MAX_ORDER",
    "SeriesControl",
    "EulerFrobeniusData",
    "check_order",
    "reduce_point",
    "bernoulli_kernel",
    "bernoulli_numbers",
    "euler_frobenius",
    "stable_roots",
    "frobenius_data",
    "discrete_operator",
    "operator_tail_bound",
    "operator_radius",
    "lattice_sum",
    "lattice_sum_with_bound",
    "big_lambda",
    "residue_class_sums",
    "residue_class_sum",
]

# Above this the closed-form coefficients and the Euler-Frobenius roots lose
# too many digits in double precision.
MAX_ORDER = 12


def check_order(m, max_order=None):
    """Validate a smoothness order and return it as ``int``."""
    limit = MAX_ORDER if max_order is None else max_order
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise DomainError(f"smoothness order must be an integer, got {m!r}")
    m = int(m)
    if m < 1:
        raise DomainError(f"smoothness order must be >= 1, got {m}")
    if m > limit:
        raise DomainError(f"smoothness order {m} exceeds supported maximum {limit}")
    return m


def reduce_point(x):
    """Representative of ``x`` modulo 1 in ``[0, 1)``.

    Works elementwise on arrays. A value that rounds up to 1.0 (tiny negative
    input) is mapped to 0.0.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("evaluation point must be finite")
    r = arr - np.floor(arr)
    r = np.where(r >= 1.0, 0.0, r)
    if np.ndim(x) == 0:
        return float(r)
    return r


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the bi-infinite lattice sums.

    Parameters
    ----------
    max_terms : int
        Largest truncation radius ``T`` (terms ``|g| <= T`` are summed).
    abs_tol : float
        Certified bound required on the neglected part of each sum.
    em_order : int
        Number of Euler-Maclaurin correction terms added for the tail. With
        ``em_order=0`` the tail is simply dropped and bounded by its integral.
    """

    max_terms: int = 100_000
    abs_tol: float = 1e-12
    em_order: int = 8

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if int(self.em_order) != self.em_order or not 0 <= self.em_order <= 30:
            raise DomainError(f"em_order must be an integer in [0, 30], got {self.em_order!r}")


DEFAULT_CONTROL = SeriesControl()


# --------------------------------------------------------------------------
# Bernoulli kernel
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_numbers(n):
    """Exact Bernoulli numbers ``B_0 .. B_n`` (convention ``B_1 = -1/2``)."""
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for k in range(1, n + 1):
        B[k] = -sum(math.comb(k + 1, i) * B[i] for i in range(k)) / (k + 1)
    return tuple(B)


@lru_cache(maxsize=None)
def _kernel_coefficients(m):
    # -B_2m(1/2 + y) / (2m)! is even in y; expanding about the midpoint keeps
    # the float coefficients well conditioned up to m = 12.
    n = 2 * m
    B = bernoulli_numbers(n)
    powers = [Fraction(0)] * (m + 1)  # coefficient of y^(2i)
    for k in range(0, n + 1, 2):
        mid_value = (Fraction(2) ** (1 - k) - 1) * B[k]  # B_k(1/2)
        powers[(n - k) // 2] += math.comb(n, k) * mid_value
    scale = Fraction(-1, math.factorial(n))
    return np.array([float(c * scale) for c in reversed(powers)])


def bernoulli_kernel(m, x):
    """Periodic kernel ``sum_{k != 0} exp(-2 pi i k x) / (2 pi i k)^(2m)``.

    Even and 1-periodic in ``x``; equals ``-B_2m({x}) / (2m)!``.

    Parameters
    ----------
    m : int
        Smoothness order.
    x : float or array_like
        Evaluation point(s), any real value.

    Returns
    -------
    float or ndarray
    """
    m = check_order(m)
    y = reduce_point(x) - 0.5
    out = np.polyval(_kernel_coefficients(m), np.square(y))
    if np.ndim(out) == 0:
        return float(out)
    return out


# --------------------------------------------------------------------------
# Euler-Frobenius polynomials
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EulerFrobeniusData:
    """Coefficients (ascending powers) of ``E_degree`` and its stable roots."""

    degree: int
    coefficients: Tuple[int, ...]
    stable_roots: Tuple[float, ...] = field(default=())

    def __call__(self, x):
        return np.polyval(np.array(self.coefficients[::-1], dtype=float), x)

    def derivative(self, x):
        c = np.array(self.coefficients, dtype=float)
        d = c[1:] * np.arange(1, len(c))
        if d.size == 0:
            return np.zeros_like(np.asarray(x, dtype=float))
        return np.polyval(d[::-1], x)

    def magnitude(self, x):
        """``sum |a_k| |x|^k``, the scale for residual checks."""
        c = np.abs(np.array(self.coefficients[::-1], dtype=float))
        return np.polyval(c, np.abs(x))


def euler_frobenius(degree):
    """Euler-Frobenius polynomial ``E_degree`` (roots not yet computed).

    Coefficients are the Eulerian numbers ``A(degree + 1, k)``, built with the
    recurrence ``A(n, k) = (k + 1) A(n-1, k) + (n - k) A(n-1, k-1)``.
    """
    if isinstance(degree, bool) or not isinstance(degree, (int, np.integer)) or degree < 0:
        raise DomainError(f"degree must be a non-negative integer, got {degree!r}")
    if degree > 2 * MAX_ORDER - 1:
        raise DomainError(f"degree {degree} exceeds supported maximum {2 * MAX_ORDER - 1}")
    row = [1]
    for n in range(2, int(degree) + 2):
        row = [
            (k + 1) * (row[k] if k < len(row) else 0) + (n - k) * (row[k - 1] if k >= 1 else 0)
            for k in range(n)
        ]
    return EulerFrobeniusData(degree=int(degree), coefficients=tuple(row))


def stable_roots(data):
    """Roots of ``E_degree`` in ``(-1, 0)``, ascending.

    The roots of an Euler-Frobenius polynomial are real, negative, simple and
    come in reciprocal pairs, so exactly ``degree // 2`` lie inside the unit
    disc. They are bracketed by sign changes on a logarithmic grid, isolated
    with Brent's method and polished with Newton steps.
    """
    n = data.degree
    if n % 2:
        raise DomainError("stable roots are defined here for even degree only")
    expected = n // 2
    if expected == 0:
        return ()

    brackets = None
    for points in (2_000, 8_000, 32_000):
        # x = -exp(-t); t = 0 is x = -1, large t approaches 0 from below
        t = np.linspace(0.0, 90.0, points)
        xs = -np.exp(-t)
        vals = data(xs)
        change = np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
        if len(change) == expected:
            brackets = [(xs[i], xs[i + 1]) for i in change]
            break
    if brackets is None:
        raise NumericError(
            f"could not bracket all {expected} stable roots of E_{n}"
        )

    roots = []
    for a, b in brackets:
        q = brentq(data, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        for _ in range(3):
            d = data.derivative(q)
            if d == 0:
                break
            step = data(q) / d
            q_new = q - step
            if not (a <= q_new <= b) or abs(step) <= 1e-16 * abs(q):
                break
            q = q_new
        if abs(data(q)) > 1e-12 * data.magnitude(q):
            raise NumericError(f"root {q!r} of E_{n} failed the residual check")
        roots.append(float(q))
    return tuple(sorted(roots))


@lru_cache(maxsize=None)
def frobenius_data(m):
    """``E_{2m-2}`` with its stable roots filled in (memoized per ``m``)."""
    m = check_order(m)
    data = euler_frobenius(2 * m - 2)
    return EulerFrobeniusData(data.degree, data.coefficients, stable_roots(data))


# --------------------------------------------------------------------------
# Discrete operator
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _operator_weights(m):
    q = np.array(frobenius_data(m).stable_roots)
    e_odd = euler_frobenius(2 * m - 1)
    # exponent 2m+1 on every branch; with 2m-1 on the |beta| = 1 branch the
    # convolution identity against the kernel fails
    w = (1.0 - q) ** (2 * m + 1) / (q * e_odd(q)) if q.size else q
    return q, w


def discrete_operator(m, h, beta):
    """Discrete analogue ``D_h^(m)[beta]`` of the operator ``d^2m / dx^2m``.

    ``D`` is even in ``beta`` and decays like ``max|q_k| ** |beta|``. For
    ``m = 1`` it is the ordinary second difference ``(1, -2, 1) / h^2``.
    """
    m = check_order(m)
    if not h > 0:
        raise DomainError(f"step h must be positive, got {h!r}")
    q, w = _operator_weights(m)
    b = np.abs(np.asarray(beta))
    if not np.issubdtype(b.dtype, np.integer):
        raise DomainError("beta must be integer")
    scale = math.factorial(2 * m - 1) / h ** (2 * m)
    bf = b[..., None].astype(float)
    geometric = np.sum(w * q ** bf, axis=-1) if q.size else np.zeros(b.shape)
    out = np.where(
        b >= 2,
        geometric,
        np.where(b == 1, 1.0 + geometric, -(2.0 ** (2 * m - 1)) + geometric),
    )
    out = scale * out
    if np.ndim(out) == 0:
        return float(out)
    return out


def operator_tail_bound(m, h, T):
    """Bound on ``sum_{|beta| > T} |D_h^(m)[beta]|`` for ``T >= 1``."""
    m = check_order(m)
    if int(T) != T or T < 1:
        raise DomainError(f"T must be an integer >= 1, got {T!r}")
    q, w = _operator_weights(m)
    if not q.size:
        return 0.0
    a = np.abs(q)
    scale = math.factorial(2 * m - 1) / h ** (2 * m)
    return float(2.0 * scale * np.sum(np.abs(w) * a ** (int(T) + 1) / (1.0 - a)))


def operator_radius(m, h, tol=1e-9, max_terms=100_000):
    """Smallest ``T`` whose :func:`operator_tail_bound` is at most ``tol``."""
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    T = 1
    while operator_tail_bound(m, h, T) > tol:
        T += 1
        if T > max_terms:
            raise ConvergenceError(f"operator tail stays above {tol:g} up to T={max_terms}")
    return T


# --------------------------------------------------------------------------
# Lattice sums
# --------------------------------------------------------------------------

def _rising(s, n):
    out = 1.0
    for i in range(n):
        out *= s + i
    return out


def _one_sided(s, N, c, T, p):
    """Sum of (N x + c)^-s for x >= 0, truncated after x = T, plus tail model.

    Returns (estimate, certified bound on its error).
    """
    x = np.arange(T, -1, -1, dtype=float)
    partial = float(np.sum((N * x + c) ** (-float(s))))
    base = N * T + c
    integral = base ** (1.0 - s) / (N * (s - 1))
    if p == 0:
        return partial, integral

    def deriv(n):
        return (-1) ** n * _rising(s, n) * N ** n * base ** (-s - n)

    B = bernoulli_numbers(2 * p + 2)
    tail = integral - 0.5 * base ** (-float(s))
    for k in range(1, p + 1):
        tail -= float(B[2 * k]) / math.factorial(2 * k) * deriv(2 * k - 1)
    bound = abs(float(B[2 * p + 2]) / math.factorial(2 * p + 2) * deriv(2 * p + 1))
    return partial + tail, bound


def _radius_candidates(limit):
    T = 4
    while T < limit:
        yield T
        T *= 2
    yield limit


def _one_sided_bound(s, N, c, T, p):
    base = N * T + c
    if p == 0:
        return base ** (1.0 - s) / (N * (s - 1))
    B = bernoulli_numbers(2 * p + 2)
    n = 2 * p + 1
    return abs(float(B[2 * p + 2]) / math.factorial(2 * p + 2)
               * _rising(s, n) * N ** n * base ** (-s - n))


# Radius cap used when refining a sum past ``abs_tol`` towards full precision.
REFINE_RADIUS_CAP = 4096


@lru_cache(maxsize=4096)
def _lattice_sum_cached(m, N, r, ctl):
    s = 2 * m
    # |g| <= T: g = 0..T carries offset r, g = -1..-T is N x + (N - r), x < T
    sides = ((r, 0), (N - r, 1))

    def bound_at(T):
        return sum(_one_sided_bound(s, N, c, T - d, ctl.em_order) for c, d in sides)

    # abs_tol is the contract; with the Euler-Maclaurin tail it is cheap to
    # keep going until the bound is negligible relative to the sum itself.
    leading = float(r) ** -s + float(N - r) ** -s
    desired = min(ctl.abs_tol, 0.5 * np.finfo(float).eps * leading)
    chosen = None
    for T in _radius_candidates(int(ctl.max_terms)):
        bound = bound_at(T)
        if bound <= ctl.abs_tol and chosen is None:
            chosen = T
            if ctl.em_order == 0:
                break
        if bound <= desired or (chosen is not None and T >= REFINE_RADIUS_CAP):
            chosen = T
            break
    if chosen is None:
        raise ConvergenceError(
            f"lattice sum (m={m}, N={N}, j={r}) tail bound {bound:.3g} exceeds "
            f"abs_tol={ctl.abs_tol:.3g} at max_terms={ctl.max_terms}"
        )
    value = 0.0
    total_bound = 0.0
    for c, d in sides:
        v, b = _one_sided(s, N, c, chosen - d, ctl.em_order)
        value += v
        total_bound += b
    return value, total_bound


def _check_lattice_args(m, N, j):
    m = check_order(m)
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    if isinstance(j, bool) or not isinstance(j, (int, np.integer)):
        raise DomainError(f"j must be an integer, got {j!r}")
    r = int(j) % int(N)
    if r == 0:
        raise DomainError(f"singular lattice sum: j={j} is divisible by N={N}")
    # S_j is even in j; one canonical class keeps S_j and S_-j bitwise equal
    return m, int(N), min(r, int(N) - r)


def lattice_sum_with_bound(m, N, j, ctl=None):
    """Like :func:`lattice_sum` but also return the certified tail bound."""
    m, N, r = _check_lattice_args(m, N, j)
    return _lattice_sum_cached(m, N, r, ctl or DEFAULT_CONTROL)


def lattice_sum(m, N, j, ctl=None):
    """``S_j = sum_{g in Z} (N g + j)^(-2m)`` with a certified tail.

    Depends on ``j`` only through ``j mod N`` and is even in ``j``.

    Raises
    ------
    DomainError
        If ``j`` is divisible by ``N``.
    ConvergenceError
        If no radius up to ``ctl.max_terms`` certifies ``ctl.abs_tol``.
    """
    return lattice_sum_with_bound(m, N, j, ctl)[0]


def big_lambda(m, N, k, ctl=None):
    """``L(k) = [sum_g h^2m / (g - k h)^2m]^-1 = 1 / S_{k mod N}``."""
    return 1.0 / lattice_sum(m, N, k, ctl)


def _closed_form_class_sums(m, N, u):
    shifts = np.arange(N) / N
    vals = bernoulli_kernel(m, u[..., None] + shifts)
    scale = (-1) ** m * (2 * np.pi) ** (2 * m) / N
    return scale * np.fft.fft(vals, axis=-1)


# Cap on the truncation radius of a directly summed class; beyond it the
# closed form is both cheaper and at least as accurate.
DIRECT_RADIUS_CAP = 4096


@lru_cache(maxsize=4096)
def _direct_radius(m, N, j, ctl):
    """Radius certifying class ``j`` to ``eps * S_j``, or None if too costly."""
    s = 2 * m
    target = np.finfo(float).eps * lattice_sum(m, N, j, ctl)
    limit = min(DIRECT_RADIUS_CAP, int(ctl.max_terms))
    for T in _radius_candidates(limit):
        bound = _one_sided_bound(s, N, j, T, 0) + _one_sided_bound(s, N, N - j, T - 1, 0)
        if bound <= target:
            return T
    return None


def residue_class_sums(m, N, u, ctl=None):
    """Fourier sums over each residue class modulo ``N``.

    Returns ``R[..., j] = sum_{k = j mod N, k != 0} exp(2 pi i k u) / k^(2m)``
    for ``j = 0 .. N-1``. Filtering the kernel's Fourier series by the
    characters of ``Z/N`` gives the exact finite form

        R_j(u) = (-1)^m (2 pi)^(2m) / N * sum_r exp(-2 pi i j r / N) K_m(u + r/N),

    whose absolute rounding error is ``O(eps)``. A class whose size is tiny
    (large ``j``, large ``m``) is instead summed term by term over
    ``k = N t + j``, ``|t| <= T``, whenever the integral tail bound certifies
    it to ``eps * S_j`` within a modest radius.
    """
    m = check_order(m)
    ctl = ctl or DEFAULT_CONTROL
    u = np.asarray(u, dtype=float)
    R = _closed_form_class_sums(m, N, u)
    for j in range(1, N):
        T = _direct_radius(m, N, j, ctl)
        if T is None:
            continue
        k = N * np.arange(-T, T + 1, dtype=float) + j
        order = np.argsort(-np.abs(k))  # small terms first
        k = k[order]
        phase = np.exp(2j * np.pi * np.multiply.outer(u, k))
        R[..., j] = np.sum(phase * k ** (-2.0 * m), axis=-1)
    return R


def residue_class_sum(m, N, j, u, ctl=None):
    """Single class ``j`` of :func:`residue_class_sums`."""
    out = residue_class_sums(m, N, u, ctl)[..., int(j) % N]
    if np.ndim(out) == 0:
        return complex(out)
    return out
