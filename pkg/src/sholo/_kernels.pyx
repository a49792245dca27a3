# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled relaxation kernels.

Mirrors _kernels_py exactly; see there for the data model. The combined
buffer holds unknowns first, fixed Dirichlet data after.
"""

import numpy as np


cdef void _sweep(double[::1] comb, long long[:, ::1] idx, double[:, ::1] w,
                 double[::1] wsum, long long[::1] cells) noexcept:
    cdef Py_ssize_t t, i, j
    cdef double acc
    for t in range(cells.shape[0]):
        i = cells[t]
        acc = 0.0
        for j in range(4):
            acc += w[i, j] * comb[idx[i, j]]
        comb[i] = acc / wsum[i]


def gs_sweeps(double[::1] comb, long long[:, ::1] idx, double[:, ::1] w,
              double[::1] wsum, long long[::1] color0, long long[::1] color1,
              Py_ssize_t nsweeps):
    """Run nsweeps checkerboard Gauss-Seidel sweeps in place."""
    cdef Py_ssize_t s
    for s in range(nsweeps):
        _sweep(comb, idx, w, wsum, color0)
        _sweep(comb, idx, w, wsum, color1)


def residual_max(double[::1] comb, long long[:, ::1] idx, double[:, ::1] w,
                 double[::1] wsum, Py_ssize_t n):
    """Max |weighted average - value| over the n unknown cells."""
    cdef Py_ssize_t i, j
    cdef double acc, r, worst = 0.0
    for i in range(n):
        acc = 0.0
        for j in range(4):
            acc += w[i, j] * comb[idx[i, j]]
        r = acc / wsum[i] - comb[i]
        if r < 0.0:
            r = -r
        if r > worst:
            worst = r
    return worst
