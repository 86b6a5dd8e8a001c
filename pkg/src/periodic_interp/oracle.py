"""Dense reference path for arbitrary distinct nodes.

Nothing here exploits lattice structure; it exists to cross-check the
explicit formulas of :mod:`periodic_interp.coefficients` and
:mod:`periodic_interp.interpolator`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack, lu_factor, lu_solve

from .errors import DomainError, NumericError
from .kernel import bernoulli_kernel, check_order, reduce_point

__all__ = [
    "NodeSet",
    "SystemSolution",
    "solve_system",
    "norm_via_kernel",
    "extremal_function",
    "positive_definiteness_probe",
    "MIN_SEPARATION",
    "PIVOT_TOL",
]

MIN_SEPARATION = 1e-10
PIVOT_TOL = 1e-13


def _periodic_gap(a, b):
    d = abs(reduce_point(a) - reduce_point(b))
    return min(d, 1.0 - d)


@dataclass(frozen=True)
class NodeSet:
    """Distinct interpolation nodes on the unit circle."""

    nodes: np.ndarray

    def __post_init__(self):
        x = np.array(self.nodes, dtype=float).reshape(-1)
        if x.size < 2:
            raise DomainError(f"need at least 2 nodes, got {x.size}")
        if not np.all(np.isfinite(x)):
            raise DomainError("nodes must be finite")
        r = np.sort(reduce_point(x))
        gaps = np.diff(np.append(r, r[0] + 1.0))
        if gaps.min() <= MIN_SEPARATION:
            raise DomainError(
                f"nodes closer than {MIN_SEPARATION:g} modulo 1 (gap {gaps.min():.3g})"
            )
        x.setflags(write=False)
        object.__setattr__(self, "nodes", x)

    def __len__(self):
        return self.nodes.size


@dataclass(frozen=True)
class SystemSolution:
    coefficients: np.ndarray
    lam: float
    condition_estimate: float


def _gram(m, x):
    return bernoulli_kernel(m, x[:, None] - x[None, :])


def _closest_pair(x):
    best = (np.inf, 0, 1)
    for i in range(x.size):
        for k in range(i + 1, x.size):
            d = _periodic_gap(x[i], x[k])
            if d < best[0]:
                best = (d, i, k)
    return best


def solve_system(nodes, m, z):
    """Solve the bordered optimality system for arbitrary nodes.

    The unknowns ``C_k`` and ``lam`` satisfy

        sum_k C_k K(x_k' - x_k) + lam = K(z - x_k')   for every k',
        sum_k C_k = 1,

    with ``K`` the periodic Bernoulli kernel of order ``m``.

    Parameters
    ----------
    nodes : NodeSet
    m : int
    z : float

    Returns
    -------
    SystemSolution
        ``condition_estimate`` is the reciprocal of LAPACK's 1-norm
        reciprocal condition estimate.

    Raises
    ------
    NumericError
        When a pivot falls below ``PIVOT_TOL`` times the matrix scale; the
        message names the closest pair of nodes.
    """
    m = check_order(m)
    if not np.isfinite(z):
        raise DomainError(f"evaluation point must be finite, got {z!r}")
    x = nodes.nodes
    n = x.size
    A = np.zeros((n + 1, n + 1))
    A[:n, :n] = _gram(m, x)
    A[:n, n] = 1.0
    A[n, :n] = 1.0
    rhs = np.append(bernoulli_kernel(m, z - x), 1.0)

    anorm = np.abs(A).sum(axis=0).max()
    lu, piv = lu_factor(A, check_finite=False)
    small = np.abs(np.diag(lu)).min()
    if small < PIVOT_TOL * anorm:
        d, i, k = _closest_pair(x)
        raise NumericError(
            f"near-singular system (pivot {small:.3g}); closest nodes "
            f"x[{i}]={float(x[i])!r} and x[{k}]={float(x[k])!r} are {d:.3g} apart"
        )
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    cond = np.inf if info != 0 or rcond == 0.0 else 1.0 / rcond
    sol = lu_solve((lu, piv), rhs, check_finite=False)
    C = sol[:n].copy()
    C.setflags(write=False)
    return SystemSolution(coefficients=C, lam=float(sol[n]), condition_estimate=float(cond))


def _as_coefficients(C, nodes):
    C = np.asarray(C, dtype=float).reshape(-1)
    if C.size != len(nodes):
        raise DomainError(f"expected {len(nodes)} coefficients, got {C.size}")
    return C


def norm_via_kernel(C, nodes, m, z):
    """Squared error norm of an arbitrary formula as a kernel quadratic form.

    ``(-1)^m [K(0) - 2 sum_k C_k K(z - x_k) + sum_{k,k'} C_k C_k' K(x_k - x_k')]``.
    """
    m = check_order(m)
    C = _as_coefficients(C, nodes)
    x = nodes.nodes
    quad = C @ _gram(m, x) @ C
    lin = np.dot(C, bernoulli_kernel(m, z - x))
    return float((-1) ** m * (bernoulli_kernel(m, 0.0) - 2.0 * lin + quad))


def extremal_function(C, lam, nodes, m, z, x):
    """Representer of the error functional, with the free constant set to 0.

    ``lam`` does not enter the formula; it is accepted so a full
    :class:`SystemSolution` can be passed through unchanged.
    """
    m = check_order(m)
    C = _as_coefficients(C, nodes)
    x = np.asarray(x, dtype=float)
    xs = nodes.nodes
    val = bernoulli_kernel(m, x - z) - np.tensordot(
        bernoulli_kernel(m, x[..., None] - xs), C, axes=([-1], [0])
    )
    out = (-1) ** m * val
    return float(out) if np.ndim(out) == 0 else out


def positive_definiteness_probe(nodes, m, trials, seed=None):
    """Sample the kernel quadratic form on zero-sum directions.

    Draws ``trials`` random unit vectors ``c`` with ``sum(c) = 0`` and
    evaluates ``2 (-1)^m c^T G c``, ``G`` being the kernel Gram matrix.

    Returns
    -------
    ok : bool
        Whether every value exceeded ``1e-12`` (vectors have unit norm).
    worst : float
        Smallest value observed.
    """
    m = check_order(m)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    G = _gram(m, nodes.nodes)
    c = rng.standard_normal((int(trials), len(nodes)))
    c -= c.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(c, axis=1)
    c = c[norms > 0] / norms[norms > 0, None]
    vals = 2.0 * (-1) ** m * np.einsum("ti,ij,tj->t", c, G, c)
    worst = float(vals.min())
    return bool(worst > 1e-12), worst
