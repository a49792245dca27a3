"""Dense LU factorization with partial pivoting and a one-norm
condition estimate.

The singular-part systems solved here are small (a few hundred rows at
most) and well conditioned, so a straightforward in-package LU keeps the
dependency surface to numpy alone. The condition estimate follows
Hager's method: a few transpose-pair solves that produce a lower bound
of ||A^{-1}||_1, almost always within a small factor of the truth.
"""

from __future__ import annotations

import numpy as np


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when elimination meets an exactly zero pivot."""


def lu_factor(a: np.ndarray):
    """Factor P A = L U with partial pivoting.

    Returns (lu, piv) with L (unit diagonal) and U packed into one
    array; piv[i] is the original row index moved to row i.
    """
    lu = np.array(a, dtype=float)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValueError("matrix must be square")
    n = lu.shape[0]
    piv = np.arange(n)
    for j in range(n):
        p = j + int(np.argmax(np.abs(lu[j:, j])))
        if lu[p, j] == 0.0:
            raise SingularMatrixError(f"zero pivot in column {j}")
        if p != j:
            lu[[j, p]] = lu[[p, j]]
            piv[[j, p]] = piv[[p, j]]
        lu[j + 1 :, j] /= lu[j, j]
        if j + 1 < n:
            lu[j + 1 :, j + 1 :] -= np.outer(lu[j + 1 :, j], lu[j, j + 1 :])
    return lu, piv


def lu_solve(lu: np.ndarray, piv: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b given the factorization of A."""
    n = lu.shape[0]
    x = np.array(b, dtype=float)[piv]
    for j in range(n - 1):  # forward, unit lower triangle
        x[j + 1 :] -= lu[j + 1 :, j] * x[j]
    for j in range(n - 1, -1, -1):  # backward
        x[j] /= lu[j, j]
        if j > 0:
            x[:j] -= lu[:j, j] * x[j]
    return x


def lu_solve_transpose(
    lu: np.ndarray, piv: np.ndarray, b: np.ndarray
) -> np.ndarray:
    """Solve A^T x = b given the factorization of A."""
    n = lu.shape[0]
    w = np.array(b, dtype=float)
    for j in range(n):  # U^T is lower triangular
        w[j] /= lu[j, j]
        if j + 1 < n:
            w[j + 1 :] -= lu[j, j + 1 :] * w[j]
    for j in range(n - 1, 0, -1):  # L^T is unit upper triangular
        w[:j] -= lu[:j, j] * w[j]
    x = np.empty(n, dtype=float)
    x[piv] = w
    return x


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    lu, piv = lu_factor(a)
    return lu_solve(lu, piv, b)


def inverse_onenorm_estimate(lu: np.ndarray, piv: np.ndarray) -> float:
    """Hager's lower-bound estimate of ||A^{-1}||_1."""
    n = lu.shape[0]
    x = np.full(n, 1.0 / n)
    estimate = 0.0
    for _ in range(5):
        y = lu_solve(lu, piv, x)
        candidate = float(np.abs(y).sum())
        xi = np.where(y >= 0.0, 1.0, -1.0)
        z = lu_solve_transpose(lu, piv, xi)
        j = int(np.argmax(np.abs(z)))
        if candidate <= estimate or abs(z[j]) <= float(z @ x):
            estimate = max(estimate, candidate)
            break
        estimate = candidate
        x = np.zeros(n)
        x[j] = 1.0
    return estimate


def cond1_estimate(a: np.ndarray, lu=None, piv=None) -> float:
    """One-norm condition estimate ||A||_1 * est ||A^{-1}||_1."""
    if lu is None or piv is None:
        lu, piv = lu_factor(a)
    anorm = float(np.abs(a).sum(axis=0).max())
    return anorm * inverse_onenorm_estimate(lu, piv)
