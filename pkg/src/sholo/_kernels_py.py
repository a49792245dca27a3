"""Numpy implementations of the relaxation kernels.

The Dirichlet sweeps operate on a combined value buffer: entries below n
are the unknowns, entries at n and above hold fixed boundary data. The
neighbor index array points into the combined buffer, so gathering needs
no case split. Cells are two-colored; cells of one color never neighbor
each other, which makes the simultaneous per-color update equal to a
sequential Gauss-Seidel sweep in color order.
"""

from __future__ import annotations

import numpy as np


def gs_sweeps(comb, idx, w, wsum, color0, color1, nsweeps):
    """Run nsweeps checkerboard Gauss-Seidel sweeps in place."""
    for _ in range(int(nsweeps)):
        for cells in (color0, color1):
            if cells.shape[0] == 0:
                continue
            neigh = comb[idx[cells]]
            comb[cells] = (neigh * w[cells]).sum(axis=1) / wsum[cells]


def residual_max(comb, idx, w, wsum, n):
    """Max |weighted average - value| over the n unknown cells."""
    if n == 0:
        return 0.0
    neigh = comb[idx[:n]]
    avg = (neigh * w[:n]).sum(axis=1) / wsum[:n]
    return float(np.abs(avg - comb[:n]).max())
