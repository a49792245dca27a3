"""Spectral theory of the row-to-row propagation operator on a strip.

The propagation operator maps the values of an s-holomorphic function
on one cross-section row to the values on the next row up. It is
real-linear, self-adjoint for the real inner product, and has simple
real spectrum: one eigenvalue pair (Lambda, 1/Lambda) per frequency.
The frequencies are the roots of tan(omega/2) tan(width*omega) =
1/sqrt(2), one in each bracket ((k-1/2)pi/width, k pi/width) for the
half-integer labels k = 1/2, 3/2, ...

Eigenfunctions are closed-form trigonometric profiles; all pipelines
here evaluate them directly rather than calling a dense eigensolver,
which keeps row extension exact in the mode coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .analysis import EdgeField
from .lattice import (
    GeometryError,
    StripSpec,
    line_coordinate,
    reconstruct_from_projections,
)
from .space import CrossSectionFn, inner_product

SQRT2 = math.sqrt(2.0)
LAMBDA3 = np.exp(3j * math.pi / 4)
LAMBDA3_INV = np.exp(-3j * math.pi / 4)

# cos((w+1/2) omega) / cos((w-1/2) omega) at every allowed frequency
ALLOWED_FREQUENCY_RATIO = 3.0 - 2.0 * SQRT2


def _check_mode_label(width: int, k: float) -> float:
    two_k = 2.0 * k
    if two_k != int(two_k) or int(two_k) % 2 == 0 or k == 0:
        raise ValueError(f"mode label must be a half-integer, got {k}")
    if abs(k) > width - 0.5:
        raise ValueError(
            f"mode label {k} out of range for width {width} "
            f"(largest is {width - 0.5})"
        )
    return float(k)


def frequency_bracket(width: int, k: float) -> tuple:
    """Open interval containing the frequency of the mode labeled k > 0."""
    if k <= 0:
        raise ValueError("bracket is defined for positive labels")
    return ((k - 0.5) * math.pi / width, k * math.pi / width)


def solve_frequency(width: int, k: float, tol: float = 1e-14) -> float:
    """Frequency of mode |k| by bisection in its bracket.

    The defining equation tan(omega/2) tan(width*omega) = 1/sqrt(2) has
    exactly one root per bracket; the bracket ends are shrunk by
    1e-9 * pi / width to stay clear of the pole at the right end.
    """
    k = _check_mode_label(width, k)
    lo, hi = frequency_bracket(width, abs(k))
    pad = 1e-9 * math.pi / width
    lo, hi = lo + pad, hi - pad

    def g(om: float) -> float:
        return math.tan(0.5 * om) * math.tan(width * om) - 1.0 / SQRT2

    g_lo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if abs(g_mid) <= tol:
            return mid
        if (g_mid > 0.0) != (g_lo > 0.0):
            hi = mid
        else:
            lo, g_lo = mid, g_mid
    return 0.5 * (lo + hi)


def eigenvalue_from_frequency(omega: float) -> float:
    """The larger eigenvalue of the pair attached to a frequency."""
    c = math.cos(omega)
    return 2.0 - c + math.sqrt((3.0 - c) * (1.0 - c))


def allowed_frequency_residual(width: int, omega: float) -> float:
    """Distance of cos((w+1/2)w)/cos((w-1/2)w) from its constant value."""
    ratio = math.cos((width + 0.5) * omega) / math.cos((width - 0.5) * omega)
    return abs(ratio - ALLOWED_FREQUENCY_RATIO)


def coefficient_ratio(omega: float, lam: float) -> float:
    """Ratio of the counter-rotating to the rotating wave coefficient."""
    c = math.cos(omega)
    return (2.0 + SQRT2 * math.cos(3.0 * math.pi / 4.0 + omega) - lam) / (
        SQRT2 * (1.0 - c)
    )


def _wall_mode_values(lo_wall: int, hi_wall: int, k: float):
    """Eigenfunction values on midpoints lo_wall+1/2 .. hi_wall-1/2.

    Generic in the wall positions, so it serves both full strips and
    single legs of a slit-strip. Returns (values, eigenvalue). The
    phase is pinned in three steps: the wave coefficient ratio makes
    the profile an eigenfunction, the norm is set to one, and the
    overall sign is fixed by requiring the reconstructed left-wall
    vertical edge value W between the two lowest rows to have
    Re(e^{i pi/4} W) > 0.
    """
    width = hi_wall - lo_wall
    k = _check_mode_label(width, k)
    omega = solve_frequency(width, abs(k))
    lam = eigenvalue_from_frequency(omega)
    ratio = coefficient_ratio(omega, lam)

    def a_coef(s: float) -> complex:
        return 1.0 + 1.0 / SQRT2 + (LAMBDA3 / SQRT2) * np.exp(s * 1j * omega) - lam

    def b_coef(s: float) -> complex:
        return LAMBDA3 + LAMBDA3_INV / SQRT2 + np.exp(s * 1j * omega) / SQRT2

    mu = (
        -np.exp(-2j * omega * (lo_wall + 0.5))
        * (b_coef(-1.0) + ratio * a_coef(-1.0))
        / (a_coef(1.0) + ratio * b_coef(1.0))
    )
    mu /= abs(mu)
    wave = np.sqrt(mu)
    xs = lo_wall + 0.5 + np.arange(width)
    values = wave * np.exp(1j * omega * xs) + ratio * np.conj(wave) * np.exp(
        -1j * omega * xs
    )
    values /= np.linalg.norm(np.concatenate([values.real, values.imag]))

    # left-wall vertical edge between rows 0 (values) and 1 (lam*values)
    wall = reconstruct_from_projections(
        -3 * math.pi / 8,
        float(line_coordinate(values[0], -3 * math.pi / 8)),
        -math.pi / 8,
        float(line_coordinate(lam * values[0], -math.pi / 8)),
    )
    if (wall * np.exp(1j * math.pi / 4)).real < 0.0:
        values = -values
    if k < 0:
        values = -1j * np.conj(values)
        lam = 1.0 / lam
    return values, float(lam)


@lru_cache(maxsize=512)
def _wall_mode_cached(lo_wall: int, hi_wall: int, k: float):
    values, lam = _wall_mode_values(lo_wall, hi_wall, k)
    values.setflags(write=False)
    return values, lam


def wall_mode(lo_wall: int, hi_wall: int, k: float):
    """Cached eigenfunction values between two walls; returns a copy."""
    values, lam = _wall_mode_cached(lo_wall, hi_wall, k)
    return values.copy(), lam


@dataclass(frozen=True)
class SpectralMode:
    """One eigenpair of the propagation operator on a strip."""

    k: float
    omega: float
    lam: float
    fn: CrossSectionFn

    @property
    def decays_up(self) -> bool:
        return self.lam < 1.0


def solve_mode(spec: StripSpec, k: float) -> SpectralMode:
    """Eigenpair with label k (sign gives the eigenvalue side)."""
    if spec.is_slit:
        raise GeometryError("spectral modes live on plain strips")
    values, lam = wall_mode(spec.a, spec.b, k)
    omega = solve_frequency(spec.width, abs(k))
    return SpectralMode(float(k), omega, lam, CrossSectionFn(spec, values))


def eigenfunction(spec: StripSpec, k: float) -> CrossSectionFn:
    return solve_mode(spec, k).fn


def spectrum(spec: StripSpec, k_max: float | None = None):
    """Modes with positive labels 1/2, 3/2, ... up to k_max, ascending."""
    if k_max is None:
        k_max = spec.width - 0.5
    out = []
    k = 0.5
    while k <= k_max + 1e-12:
        out.append(solve_mode(spec, k))
        k += 1.0
    return out


def all_modes(spec: StripSpec):
    """All 2*width modes ordered by ascending label."""
    ks = []
    for j in range(spec.width, 0, -1):
        ks.append(-(j - 0.5))
    for j in range(1, spec.width + 1):
        ks.append(j - 0.5)
    return [solve_mode(spec, k) for k in ks]


def apply_stencil(values: np.ndarray, direction: str = "up") -> np.ndarray:
    """Raw propagation stencil on an array of row values.

    Works for any pair of walls (full strip or single leg), which is
    why it takes a bare array; the downward step conjugates the upward
    one with the reflection involution. Needs at least two entries.
    """
    v = np.asarray(values, dtype=complex)
    if v.shape[0] < 2:
        raise GeometryError("propagation needs width at least 2")
    if direction == "down":
        return -1j * np.conj(apply_stencil(-1j * np.conj(v)))
    if direction != "up":
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    cv = np.conj(v)
    out = np.empty_like(v)
    out[1:-1] = (
        2.0 * v[1:-1]
        + (LAMBDA3 / SQRT2) * v[2:]
        + (LAMBDA3_INV / SQRT2) * v[:-2]
        - SQRT2 * cv[1:-1]
        + (cv[2:] + cv[:-2]) / SQRT2
    )
    out[0] = (
        (1.0 + 1.0 / SQRT2) * v[0]
        + (LAMBDA3 / SQRT2) * v[1]
        + (LAMBDA3 + LAMBDA3_INV / SQRT2) * cv[0]
        + cv[1] / SQRT2
    )
    out[-1] = (
        (1.0 + 1.0 / SQRT2) * v[-1]
        + (LAMBDA3_INV / SQRT2) * v[-2]
        + (LAMBDA3_INV + LAMBDA3 / SQRT2) * cv[-1]
        + cv[-2] / SQRT2
    )
    return out


def propagate(f: CrossSectionFn, direction: str = "up") -> CrossSectionFn:
    """One row step of the propagation operator on a strip."""
    return CrossSectionFn(f.spec, apply_stencil(f.values, direction))


def mode_coefficients(f: CrossSectionFn, modes=None) -> dict:
    """Real coordinates of f in the (orthonormal) eigenbasis.

    modes may restrict the set; None means all 2*width modes.
    """
    if modes is None:
        modes = all_modes(f.spec)
    return {m.k: inner_product(m.fn, f) for m in modes}


def extend_strip(
    spec: StripSpec,
    f: CrossSectionFn,
    y_min: int,
    y_max: int,
    modes=None,
    delta: float = 1.0,
) -> EdgeField:
    """S-holomorphic extension of a cross-section to a window of rows.

    Row y carries sum_k c_k Lambda_k^y f_k where c_k are the mode
    coordinates of f at row 0. With modes=None every mode whose
    coordinate exceeds roundoff relative to the largest one enters the
    sum; coordinates at roundoff level are dropped because a spurious
    epsilon on a growing mode would otherwise dominate a tall window.
    Passing an explicit mode list disables the dropping and is the
    right call when the caller knows the exact mode content.
    """
    if spec.is_slit:
        raise GeometryError("extend_strip needs a plain strip")
    if f.spec != spec:
        raise GeometryError("cross-section does not match the strip")
    if not (y_min <= 0 <= y_max):
        raise ValueError("the window must contain row 0")
    if y_min == y_max:
        raise ValueError("the window must contain at least two rows")
    prune = modes is None
    if modes is None:
        modes = all_modes(spec)
    coeffs = np.array([inner_product(m.fn, f) for m in modes])
    if prune and coeffs.size:
        keep = np.abs(coeffs) > 1e-13 * max(np.abs(coeffs).max(), 1e-300)
        modes = [m for m, kp in zip(modes, keep) if kp]
        coeffs = coeffs[keep]
    profiles = np.array([m.fn.values for m in modes])
    lams = np.array([m.lam for m in modes])
    hrows = {}
    for y in range(y_min, y_max + 1):
        factors = coeffs * lams**y
        hrows[y] = (
            factors @ profiles
            if profiles.size
            else np.zeros(spec.width, dtype=complex)
        )
    return EdgeField.from_horizontal_rows(spec, hrows, delta)
