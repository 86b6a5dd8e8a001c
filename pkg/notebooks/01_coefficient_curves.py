"""
Coefficient curves
==================

Each optimal coefficient C(beta; z) is a 1-periodic bump in z that equals
1 at its own node and 0 at every other node. Raising m makes the curves
smoother and lets them dip below zero between nodes.
"""

import numpy as np

from periodic_interp import LatticeGrid, coefficient_matrix

grid = LatticeGrid(5)
z = np.linspace(0, 1, 501)

# Rows are evaluation points, columns are nodes beta = 1..5
for m in (1, 2, 3, 4):
    C = coefficient_matrix(m, grid, z)
    lo = round(C.min(), 6) + 0.0  # drop the sign of a rounding-level -0
    print(f"m={m}: min coefficient {lo:+.4f}, row sums within {np.abs(C.sum(axis=1) - 1).max():.1e} of 1")

# At the nodes the coefficient matrix is the identity (node beta = 5 is z = 0 and z = 1)
C = coefficient_matrix(2, grid, grid.nodes)
print(np.round(C, 12))

# Optional figure: one panel per m, all five curves
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, axes = plt.subplots(2, 2, figsize=(9, 6), sharex=True, sharey=True)
    for ax, m in zip(axes.flat, (1, 2, 3, 4)):
        ax.plot(z, coefficient_matrix(m, grid, z))
        ax.set_title(f"m = {m}")
        ax.axhline(0, color="0.7", lw=0.5)
    fig.tight_layout()
    fig.savefig("coefficient_curves.png", dpi=120)
    print("wrote coefficient_curves.png")
