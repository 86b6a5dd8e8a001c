"""Optimal lattice interpolation coefficients and the Lagrange multiplier.

For nodes ``x_beta = beta / N`` (``beta = 1..N``) the optimal coefficients are

    C(beta; z) = h [1 + sum_j w_j * I_j(h beta - z) / S_j],

where ``j`` runs over ``1 .. floor(N/2)``, ``w_j = 2`` except ``w_{N/2} = 1``
for even ``N``, ``S_j`` is the lattice sum of :mod:`periodic_interp.kernel`,
and ``I_j(u) = sum_t cos(2 pi (N t + j) u) / (N t + j)^(2m)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .kernel import (
    DEFAULT_CONTROL,
    bernoulli_kernel,
    check_order,
    lattice_sum,
    reduce_point,
    residue_class_sums,
)

__all__ = [
    "LatticeGrid",
    "CoefficientVector",
    "optimal_coefficients",
    "coefficient_matrix",
    "lagrange_multiplier",
    "node_index",
    "split_point",
]

# |N z - round(N z)| below this counts as "z is a node"
NODE_TOL = 1e-13


@dataclass(frozen=True)
class LatticeGrid:
    """Uniform periodic grid with ``N`` nodes ``beta / N``, ``beta = 1..N``."""

    N: int

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, (int, np.integer)):
            raise DomainError(f"N must be an integer, got {self.N!r}")
        if self.N < 2:
            raise DomainError(f"lattice needs N >= 2 nodes, got {self.N}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def h(self):
        return 1.0 / self.N

    @property
    def nodes(self):
        """Node positions ``h * beta`` for ``beta = 1..N`` (last one is 1.0)."""
        return np.arange(1, self.N + 1) / self.N


@dataclass(frozen=True)
class CoefficientVector:
    """Optimal coefficients at one evaluation point.

    ``values[i]`` belongs to node ``beta = i + 1``.
    """

    m: int
    grid: LatticeGrid
    z: float
    values: np.ndarray
    lam: float

    def __post_init__(self):
        self.values.setflags(write=False)


def node_index(grid, z):
    """Index ``i`` (node ``beta = i + 1``) if ``z`` sits on a node, else ``None``."""
    shift, offset = split_point(grid, float(z))
    if offset == 0.0:
        return int(shift - 1) % grid.N
    return None


@lru_cache(maxsize=1024)
def _weighted_inverse_sums(m, N, ctl):
    # w_j / S_j for j = 1 .. floor(N/2); the Nyquist class is its own mirror
    half = N // 2
    out = np.empty(half)
    for j in range(1, half + 1):
        w = 1.0 if 2 * j == N else 2.0
        out[j - 1] = w / lattice_sum(m, N, j, ctl)
    out.setflags(write=False)
    return out


def _check_n_vs_m(m, N):
    if N < m:
        warnings.warn(
            f"N={N} < m={m}: outside the range N >= m for which the explicit "
            "coefficient formulas are usually stated",
            stacklevel=3,
        )


def split_point(grid, z):
    """Write ``z = h (shift + offset)`` with integer ``shift`` and ``offset`` in ``[0, 1)``.

    Offsets within ``NODE_TOL`` of 0 or 1 are snapped to 0 so that points
    numerically on a node are treated as nodes.
    """
    k = grid.N * reduce_point(np.asarray(z, dtype=float))
    shift = np.floor(k)
    offset = k - shift
    snap_up = offset >= 1.0 - NODE_TOL * grid.N
    shift = np.where(snap_up, shift + 1, shift)
    offset = np.where(snap_up | (offset <= NODE_TOL * grid.N), 0.0, offset)
    return shift.astype(int) % grid.N, offset


@lru_cache(maxsize=256)
def _characters(N):
    # chi[j, i] = exp(2 pi i j beta / N) with beta = i + 1, reduced exactly mod N
    j = np.arange(N)[:, None]
    beta = np.arange(1, N + 1)[None, :]
    chi = np.exp(2j * np.pi * ((j * beta) % N) / N)
    chi.setflags(write=False)
    return chi


def coefficient_matrix(m, grid, zs, ctl=None):
    """Optimal coefficients for many evaluation points at once.

    Parameters
    ----------
    m : int
        Smoothness order.
    grid : LatticeGrid
    zs : array_like
        Evaluation points (any reals; reduced modulo 1).
    ctl : SeriesControl, optional

    Returns
    -------
    ndarray, shape ``(len(zs), N)``
        Row ``p`` holds ``C(beta; zs[p])`` for ``beta = 1..N``.

    Notes
    -----
    Coefficients depend on ``(beta, z)`` only through ``h beta - z``, so each
    point is split as ``z = h (shift + offset)`` and the vector for the
    offset is rolled by ``shift``. For ``u = h beta - z'`` the inner sum
    over class ``j`` factors as ``exp(2 pi i j beta / N) * R_j(-z')``.
    """
    m = check_order(m)
    ctl = ctl or DEFAULT_CONTROL
    N = grid.N
    _check_n_vs_m(m, N)
    shift, offset = split_point(grid, np.atleast_1d(np.asarray(zs, dtype=float)))
    inv = _weighted_inverse_sums(m, N, ctl)
    half = N // 2

    R = residue_class_sums(m, N, -grid.h * offset, ctl)[:, 1 : half + 1]
    chi = _characters(N)[1 : half + 1]
    inner = (R[:, :, None] * chi[None, :, :]).real  # (P, class, beta)
    base = grid.h * (1.0 + np.sum(inner * inv[None, :, None], axis=1))

    on_node = offset == 0.0
    base[on_node] = 0.0
    base[on_node, N - 1] = 1.0

    cols = (np.arange(N)[None, :] - shift[:, None]) % N
    return np.take_along_axis(base, cols, axis=1)


def lagrange_multiplier(m, grid, z):
    """Multiplier enforcing ``sum C = 1``.

    The lattice form ``sum_{k != 0, k h in Z} (exp(-2 pi i k z) - 1) / (2 pi i k)^2m``
    collapses, with ``k = N t``, to ``(K_m(N z) - K_m(0)) / N^2m``.
    """
    m = check_order(m)
    N = grid.N
    z = reduce_point(z)
    if node_index(grid, z) is not None:
        return 0.0
    return (bernoulli_kernel(m, N * z) - bernoulli_kernel(m, 0.0)) / float(N) ** (2 * m)


def optimal_coefficients(m, grid, z, ctl=None):
    """Optimal coefficients ``C(beta; z)`` and multiplier at a single point.

    Exactly cardinal when ``z`` is a node.

    Raises
    ------
    DomainError
        Non-finite ``z`` or unsupported ``m``.
    ConvergenceError
        If a lattice sum cannot be certified under ``ctl``.
    """
    if not np.isfinite(z):
        raise DomainError(f"evaluation point must be finite, got {z!r}")
    zr = reduce_point(float(z))
    values = coefficient_matrix(m, grid, [zr], ctl)[0]
    return CoefficientVector(
        m=check_order(m), grid=grid, z=zr, values=values, lam=lagrange_multiplier(m, grid, zr)
    )
