"""Quadrature obtained by integrating the optimal interpolant."""

from __future__ import annotations

import math

import numpy as np

from .coefficients import coefficient_matrix
from .errors import DomainError
from .interpolator import batch_interpolate

__all__ = ["rectangle_rule", "integrate_interpolant", "coefficient_integrals", "midpoints"]


def rectangle_rule(f):
    """``h * sum_beta phi(h beta)``."""
    return math.fsum(f.samples) / f.grid.N


def midpoints(panels):
    """Midpoints of ``panels`` equal subintervals of ``[0, 1]``."""
    panels = int(panels)
    return (np.arange(panels) + 0.5) / panels


def _check_panels(panels, N):
    if isinstance(panels, bool) or int(panels) != panels or panels < N:
        raise DomainError(f"panels must be an integer >= N={N}, got {panels!r}")
    return int(panels)


def integrate_interpolant(f, m, ctl=None, panels=None):
    """Midpoint-rule integral of the interpolant over one period.

    Parameters
    ----------
    f : SampledPeriodicFunction
    m : int
    ctl : SeriesControl, optional
    panels : int, optional
        Number of midpoint panels, at least ``N``. Defaults to ``10 N``.

    Notes
    -----
    Each coefficient integrates to ``h``, so the result tends to
    :func:`rectangle_rule`. When ``panels`` is a multiple of ``N`` the two
    agree up to rounding, because the interpolant is a periodic spline and
    the midpoint rule is then exact for it.
    """
    panels = _check_panels(10 * f.grid.N if panels is None else panels, f.grid.N)
    vals = batch_interpolate(f, m, midpoints(panels), ctl)
    return math.fsum(vals) / panels


def coefficient_integrals(m, grid, ctl=None, panels=None):
    """Midpoint-rule integrals of each coefficient curve ``z -> C(beta; z)``."""
    panels = _check_panels(10 * grid.N if panels is None else panels, grid.N)
    C = coefficient_matrix(m, grid, midpoints(panels), ctl)
    return np.array([math.fsum(col) for col in C.T]) / panels
