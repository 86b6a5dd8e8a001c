"""Optimal interpolation of 1-periodic functions on uniform grids.

The interpolant minimizes the worst-case error over the periodic Sobolev
space of order ``m``. Its coefficients are available in closed form through
:func:`optimal_coefficients`; :mod:`periodic_interp.oracle` solves the same
problem densely for arbitrary nodes.
"""

from .coefficients import (
    CoefficientVector,
    LatticeGrid,
    coefficient_matrix,
    lagrange_multiplier,
    optimal_coefficients,
)
from .errors import ConvergenceError, DataError, DomainError, NumericError, PeriodicInterpError
from .interpolator import (
    ErrorNormProfile,
    SampledPeriodicFunction,
    batch_interpolate,
    error_norm_squared,
    error_profile,
    interpolate,
)
from .kernel import (
    DEFAULT_CONTROL,
    SeriesControl,
    bernoulli_kernel,
    big_lambda,
    discrete_operator,
    euler_frobenius,
    lattice_sum,
    stable_roots,
)
from .oracle import NodeSet, SystemSolution, norm_via_kernel, solve_system
from .quadrature import coefficient_integrals, integrate_interpolant, rectangle_rule

__version__ = "0.1.0"

__all__ = [
    "CoefficientVector",
    "ConvergenceError",
    "DEFAULT_CONTROL",
    "DataError",
    "DomainError",
    "ErrorNormProfile",
    "LatticeGrid",
    "NodeSet",
    "NumericError",
    "PeriodicInterpError",
    "SampledPeriodicFunction",
    "SeriesControl",
    "SystemSolution",
    "batch_interpolate",
    "bernoulli_kernel",
    "big_lambda",
    "coefficient_integrals",
    "coefficient_matrix",
    "discrete_operator",
    "error_norm_squared",
    "error_profile",
    "euler_frobenius",
    "integrate_interpolant",
    "interpolate",
    "lagrange_multiplier",
    "lattice_sum",
    "norm_via_kernel",
    "optimal_coefficients",
    "rectangle_rule",
    "solve_system",
    "stable_roots",
]
