"""
Refinement and quadrature
=========================

Doubling N shrinks the worst squared error norm by a factor of 2^(2m-1),
while the error for a smooth test function falls like N^(-2m).

Integrating the interpolant over one period gives back the rectangle rule:
every coefficient curve has integral exactly h.
"""

import numpy as np

from periodic_interp import (
    LatticeGrid,
    SampledPeriodicFunction,
    batch_interpolate,
    coefficient_integrals,
    error_profile,
    integrate_interpolant,
    rectangle_rule,
)
from periodic_interp.cli import bernoulli10

z = np.linspace(0, 1, 401)
for m in (1, 2, 3):
    prev = None
    for N in (4, 8, 16, 32):
        grid = LatticeGrid(N)
        nsq = error_profile(m, grid, z).norm_sq.max()
        f = SampledPeriodicFunction.from_function(grid, bernoulli10)
        err = np.abs(batch_interpolate(f, m, z) - bernoulli10(z)).max()
        rate = "" if prev is None else f"  order(norm^2)={np.log2(prev[0] / nsq):.2f}  order(err)={np.log2(prev[1] / err):.2f}"
        print(f"m={m} N={N:2d}  max norm^2={nsq:.3e}  max err={err:.3e}{rate}")
        prev = (nsq, err)

grid = LatticeGrid(5)
print("coefficient integrals - h:", coefficient_integrals(2, grid) - grid.h)

f = SampledPeriodicFunction(grid, np.random.default_rng(0).standard_normal(5))
print("rectangle rule          :", rectangle_rule(f))
print("integral of interpolant :", integrate_interpolant(f, 2, panels=50))
