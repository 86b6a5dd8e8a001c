"""Evaluation of the optimal interpolant and of its error-functional norm."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import LatticeGrid, coefficient_matrix, split_point
from .errors import DataError, DomainError, NumericError
from .kernel import (
    DEFAULT_CONTROL,
    bernoulli_kernel,
    check_order,
    lattice_sum,
    residue_class_sums,
)

__all__ = [
    "SampledPeriodicFunction",
    "ErrorNormProfile",
    "interpolate",
    "batch_interpolate",
    "error_norm_squared",
    "error_profile",
    "CLAMP_TOL",
    "IMAG_TOL",
]

# Negative norms above -CLAMP_TOL are rounding noise and are clamped to zero.
CLAMP_TOL = 1e-10
# Largest tolerated imaginary residue of the grouped complex sums.
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class SampledPeriodicFunction:
    """Samples ``phi(h beta)`` for ``beta = 1..N``.

    ``samples[N - 1]`` is the value at ``x = 1``, which equals ``phi(0)``.
    """

    grid: LatticeGrid
    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float).reshape(-1)
        if s.shape[0] != self.grid.N:
            raise DataError(f"expected {self.grid.N} samples, got {s.shape[0]}")
        if not np.all(np.isfinite(s)):
            bad = int(np.flatnonzero(~np.isfinite(s))[0]) + 1
            raise DataError(f"sample for beta={bad} is not finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, grid, func):
        """Sample a vectorized 1-periodic callable on the grid nodes."""
        return cls(grid, np.asarray(func(grid.nodes), dtype=float))


def batch_interpolate(f, m, zs, ctl=None):
    """Interpolant values at many points, in input order.

    Each output depends only on its own point, so results are identical to
    calling :func:`interpolate` point by point.
    """
    zs = np.asarray(zs, dtype=float).reshape(-1)
    if zs.size == 0:
        return np.empty(0)
    if not np.all(np.isfinite(zs)):
        raise DomainError("evaluation points must be finite")
    C = coefficient_matrix(m, f.grid, zs, ctl)
    # row-wise reduction: fixed order per point regardless of batch size
    return np.array([np.dot(row, f.samples) for row in C])


def interpolate(f, m, z, ctl=None):
    """Value of the optimal interpolant ``sum_beta C(beta; z) phi(h beta)``.

    Parameters
    ----------
    f : SampledPeriodicFunction
    m : int
        Smoothness order.
    z : float
        Evaluation point, any real.
    ctl : SeriesControl, optional

    Returns
    -------
    float
    """
    return float(batch_interpolate(f, m, [z], ctl)[0])


def _norm_values(m, grid, zs, ctl):
    N = grid.N
    s = 2 * m
    k0 = bernoulli_kernel(m, 0.0)
    kN = bernoulli_kernel(m, N * zs)
    # full sum minus the aliased k = N t part, both via the kernel itself
    head = (-1) ** m * (k0 - (2.0 * kN - k0) / float(N) ** s)

    R = residue_class_sums(m, N, zs, ctl)
    inv = np.array([1.0 / lattice_sum(m, N, j, ctl) for j in range(1, N)])
    prod = R[:, 1:] * R[:, :0:-1]  # R_j * R_{N-j}
    tail = (prod * inv[None, :]).sum(axis=1) / (2 * np.pi) ** s
    resid = np.abs(tail.imag).max(initial=0.0)
    if resid > IMAG_TOL * max(1.0, np.abs(tail.real).max(initial=0.0)):
        raise NumericError(f"error norm has imaginary residue {resid:.3g}")
    out = head - tail.real

    _, offset = split_point(grid, zs)
    out[offset == 0.0] = 0.0
    return out


def error_norm_squared(m, grid, z, ctl=None):
    """Squared norm of the error functional of the optimal formula at ``z``.

    Splits the Fourier series of the norm into the unrestricted sum, the part
    aliased onto multiples of ``N`` and the grouped remainder

        sum_{j=1}^{N-1} R_j(z) R_{N-j}(z) / (S_j (2 pi)^2m),

    which is real because ``R_{N-j}`` is the conjugate of ``R_j``. The value
    is non-negative up to rounding and zero at the nodes. Negative rounding
    residue is returned as is; see :func:`error_profile` for clamping.

    Raises
    ------
    ConvergenceError
        If a lattice sum cannot be certified under ``ctl``.
    NumericError
        If the grouped sum has an imaginary part above ``IMAG_TOL``.
    """
    m = check_order(m)
    ctl = ctl or DEFAULT_CONTROL
    if not np.isfinite(z):
        raise DomainError(f"evaluation point must be finite, got {z!r}")
    return float(_norm_values(m, grid, np.array([float(z)]), ctl)[0])


@dataclass(frozen=True)
class ErrorNormProfile:
    """Squared error norms over a list of points."""

    m: int
    grid: LatticeGrid
    points: np.ndarray
    norm_sq: np.ndarray
    clamp_count: int = 0


def error_profile(m, grid, points, ctl=None):
    """Pointwise :func:`error_norm_squared` with the negative-residue policy.

    Values in ``[-CLAMP_TOL, 0)`` become 0 and are counted in
    ``clamp_count``; anything more negative raises :class:`NumericError`.
    """
    m = check_order(m)
    ctl = ctl or DEFAULT_CONTROL
    pts = np.asarray(points, dtype=float).reshape(-1)
    if not np.all(np.isfinite(pts)):
        raise DomainError("evaluation points must be finite")
    vals = _norm_values(m, grid, pts, ctl) if pts.size else np.empty(0)
    worst = vals.min(initial=0.0)
    if worst < -CLAMP_TOL:
        i = int(np.argmin(vals))
        raise NumericError(f"negative squared norm {worst:.3g} at z={pts[i]!r}")
    neg = vals < 0.0
    vals = np.where(neg, 0.0, vals)
    for a in (pts, vals):
        a.setflags(write=False)
    return ErrorNormProfile(m, grid, pts, vals, int(neg.sum()))
