"""Continuum counterparts on the unit-width strip and slit-strip.

The continuum strip is {z : -1/2 < Re z < 1/2}; the slit-strip
additionally removes the ray Re z = 0, Im z <= 0. Everything here is
exact analysis: exponential modes per end, the uniformizing map onto
the upper half-plane, monomials pulled back through it, and the "pure
pole" combinations whose growing part at one end is a single unit
mode. Discrete objects converge to these after rescaling, which is
what the convergence harness measures.

Half-integer powers never appear in the monomials themselves (their
exponents are integers); the only branch sensitivity lives in the
square root of the map's derivative, fixed globally in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache

import numpy as np

from ._linalg import lu_factor, lu_solve

REGION_TOP = "top"
REGION_LEFT = "left"
REGION_RIGHT = "right"
REGIONS = (REGION_TOP, REGION_LEFT, REGION_RIGHT)

_TIP_RADIUS = 1e-30
_SLIT_AXIS_TOL = 1e-12
_DOMAIN_TOL = 1e-9


class QuadratureError(RuntimeError):
    """Raised when panel doubling fails to reach the tolerance."""


def _check_region(region: str) -> str:
    if region not in REGIONS:
        raise ValueError(f"unknown region {region!r}")
    return region


def _check_half_integer(k: float, positive: bool = False) -> float:
    two_k = 2.0 * k
    if two_k != int(two_k) or int(two_k) % 2 == 0:
        raise ValueError(f"label must be a half-integer, got {k}")
    if positive and k <= 0:
        raise ValueError(f"label must be positive, got {k}")
    return float(k)


# ---------------------------------------------------------------------------
# exponential modes


def mode_normalization(region: str, k: float) -> complex:
    """Unit-modulus (strip) or sqrt(2)-modulus (leg) mode constant."""
    _check_region(region)
    _check_half_integer(k)
    if region == REGION_TOP:
        return complex(np.exp(1j * math.pi * (-k / 2.0 - 0.25)))
    if region == REGION_LEFT:
        return complex(math.sqrt(2.0) * np.exp(1j * math.pi * (-k - 0.25)))
    return complex(math.sqrt(2.0) * np.exp(-1j * math.pi / 4.0))


def _check_mode_domain(region: str, z: np.ndarray) -> None:
    x, y = z.real, z.imag
    if region == REGION_TOP:
        ok = np.abs(x) <= 0.5 + _DOMAIN_TOL
    elif region == REGION_LEFT:
        ok = (x >= -0.5 - _DOMAIN_TOL) & (x <= _DOMAIN_TOL) & (y <= _DOMAIN_TOL)
    else:
        ok = (x <= 0.5 + _DOMAIN_TOL) & (x >= -_DOMAIN_TOL) & (y <= _DOMAIN_TOL)
    if not np.all(ok):
        raise ValueError(f"point outside the {region} domain")


def mode_value(region: str, k: float, z):
    """Exponential mode at interior points of its strip or half-strip.

    Strip modes have frequency pi k, leg modes 2 pi k; positive labels
    grow toward the region's end (up for the strip, down for a leg
    after the label sign flip used by its growing family).
    """
    _check_region(region)
    _check_half_integer(k)
    z = np.asarray(z, dtype=complex)
    _check_mode_domain(region, z)
    freq = math.pi if region == REGION_TOP else 2.0 * math.pi
    out = mode_normalization(region, k) * np.exp(-1j * freq * k * z)
    return out if out.shape else complex(out)


def mode_restriction(region: str, k: float, x):
    """Mode values on the cross-section, zero off the support."""
    _check_region(region)
    _check_half_integer(k)
    x = np.asarray(x, dtype=float)
    z = x.astype(complex)
    freq = math.pi if region == REGION_TOP else 2.0 * math.pi
    values = mode_normalization(region, k) * np.exp(-1j * freq * k * z)
    if region == REGION_LEFT:
        values = np.where(x < 0.0, values, 0.0)
    elif region == REGION_RIGHT:
        values = np.where(x > 0.0, values, 0.0)
    return values if values.shape else complex(values)


# ---------------------------------------------------------------------------
# the uniformizing map


def conformal_map(z, side: str | None = None):
    """Map to the upper half-plane and the square root of its derivative.

    phi(z) = (1/2) sqrt(1 - exp(-2 pi i z)) with positive imaginary
    part inside the slit-strip. On the boundary the sign of the real
    value is decided by location: negative on the left wall and the
    left side of the slit, positive on the right counterparts, which
    is why points on the slit need a side tag. The derivative's square
    root is the global closed form
    sqrt(pi) e^{-i pi/4} (i e^{-i pi z}) / (2 sqrt(phi)), whose
    principal square root of phi, with upper-half-plane limits on the
    negative real axis, realizes the branch that is e^{i pi/4}-positive
    on the left wall.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) <= _TIP_RADIUS):
        raise ValueError("the slit tip is excluded")
    wt = 1j * np.exp(-1j * math.pi * z)
    s = np.sqrt(1.0 + wt * wt)
    s = np.where(s.imag < 0.0, -s, s)
    real_s = np.abs(s.imag) <= 1e-14 * (np.abs(s) + 1.0)
    if np.any(real_s):
        sign = np.where(z.real > 0.0, 1.0, -1.0)
        on_slit = real_s & (np.abs(z.real) <= _SLIT_AXIS_TOL)
        if np.any(on_slit):
            if side == "left":
                sign = np.where(on_slit, -1.0, sign)
            elif side == "right":
                sign = np.where(on_slit, 1.0, sign)
            else:
                raise ValueError("points on the slit need side='left'/'right'")
        s = np.where(real_s, sign * np.abs(s) + 0.0j, s)
    phi = 0.5 * s
    sqrt_deriv = (
        math.sqrt(math.pi)
        * np.exp(-1j * math.pi / 4.0)
        * wt
        / (2.0 * np.sqrt(phi))
    )
    if phi.shape:
        return phi, sqrt_deriv
    return complex(phi), complex(sqrt_deriv)


def pulled_back_monomial(region: str, k: float, z, side: str | None = None):
    """Monomial in phi times the half-order derivative factor.

    The top family i phi^{k-1/2} sqrt(phi') grows at the top end like
    the mode with label k; the leg families i (phi +- 1/2)^{-k-1/2}
    sqrt(phi') grow toward the respective leg end. All exponents are
    integers for half-integer k.
    """
    _check_region(region)
    _check_half_integer(k, positive=True)
    phi, sqrt_deriv = conformal_map(z, side)
    phi = np.asarray(phi, dtype=complex)
    if region == REGION_TOP:
        power = phi ** int(round(k - 0.5))
    elif region == REGION_LEFT:
        power = (phi + 0.5) ** int(round(-k - 0.5))
    else:
        power = (phi - 0.5) ** int(round(-k - 0.5))
    out = 1j * power * np.asarray(sqrt_deriv, dtype=complex)
    return out if out.shape else complex(out)


# ---------------------------------------------------------------------------
# quadrature on the cross-section


@lru_cache(maxsize=32)
def _gauss_legendre(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes, weights


def _panel(fn, lo: float, hi: float, n: int) -> float:
    nodes, weights = _gauss_legendre(n)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return half * float(np.sum(weights * fn(mid + half * nodes)))


def integrate_section(fn, lo: float, hi: float, tol: float = 1e-8) -> float:
    """Integral of a real integrand with endpoint power blowup.

    Substituting x = lo + t^4 and x = hi - t^4 on the two halves turns
    every |x - end|^{m/4} behavior with integer m >= -2 into a smooth
    integrand (the conformal square root contributes quarter powers,
    inner products of two singular factors contribute -1/2); both
    halves use the same positive weight 4t^3 because the orientation
    flip and the dx sign cancel. Node counts double until two
    estimates agree.
    """
    if hi <= lo:
        raise ValueError("empty integration interval")
    mid = 0.5 * (lo + hi)
    t_left = (mid - lo) ** 0.25
    t_right = (hi - mid) ** 0.25

    def from_lo(t):
        return fn(lo + t**4) * 4.0 * t**3

    def from_hi(t):
        return fn(hi - t**4) * 4.0 * t**3

    previous = None
    n = 16
    while n <= 2048:
        estimate = _panel(from_lo, 0.0, t_left, n) + _panel(
            from_hi, 0.0, t_right, n
        )
        if previous is not None and abs(estimate - previous) < tol:
            return estimate
        previous = estimate
        n *= 2
    raise QuadratureError(
        f"panel doubling stalled at {abs(estimate - previous):.3e} > {tol:.1e}"
    )


def continuum_inner_product(f, g, tol: float = 1e-8) -> float:
    """Real inner product of cross-section functions by quadrature.

    The section splits at 0, the one interior point where the
    integrands of interest are singular; the endpoint substitutions of
    integrate_section absorb the quarter-power behavior there and at
    the walls.
    """

    def integrand(x):
        return (f(x) * np.conj(g(x))).real

    return integrate_section(integrand, -0.5, 0.0, tol) + integrate_section(
        integrand, 0.0, 0.5, tol
    )


def section_mode(region: str, k: float):
    """Cross-section mode as a quadrature-ready callable."""
    _check_region(region)
    _check_half_integer(k)
    return lambda x: mode_restriction(region, k, x)


def section_monomial(region: str, k: float):
    """Cross-section restriction of a pulled-back monomial."""
    _check_region(region)
    _check_half_integer(k, positive=True)
    return lambda x: pulled_back_monomial(region, k, np.asarray(x, dtype=complex))


# ---------------------------------------------------------------------------
# pure poles and coefficient tables


def gbinom(alpha: float, n: float) -> float:
    """Generalized binomial; exactly zero off nonnegative integers n."""
    if n != int(n) or n < 0:
        return 0.0
    out = 1.0
    for t in range(int(n)):
        out *= (alpha - t) / (t + 1.0)
    return out


def closed_mix_to_pole_top(k: float, k_prime: float) -> float:
    """Closed-form monomial coefficients of the unit-leading pure pole."""
    step = (k - k_prime) / 2.0
    if step != int(step) or step < 0:
        return 0.0
    return (-0.25) ** int(step) * gbinom((k - 1.0) / 2.0, step)


def closed_pole_to_mix_top(k: float, k_prime: float) -> float:
    """Closed-form pure-pole coefficients of a top monomial."""
    sign = (-1.0) ** int(round(k_prime + 0.5))
    return (
        math.sqrt(math.pi)
        * sign
        * 2.0**-k
        * gbinom((k - 1.0) / 2.0, (k - k_prime) / 2.0)
    )


def _coordinate_family(region: str, k: float):
    """Mode measuring the growing coefficient of label k at an end."""
    if region == REGION_TOP:
        return section_mode(REGION_TOP, k)
    return section_mode(region, -k)


@dataclass(frozen=True)
class PurePoleTable:
    """Triangular change of basis between monomials and pure poles.

    labels are 1/2, 3/2, ..., k_max. pole_in_monomials[i, j] expands
    the pure pole with label labels[i] (unit growing-mode coefficient)
    in monomials; monomials_in_poles is its inverse. mix_to_pole is
    pole_in_monomials with rows scaled to a unit diagonal, the
    normalization in which the top-case closed form is stated.
    """

    region: str
    labels: tuple
    pole_in_monomials: np.ndarray = dataclass_field(repr=False)
    monomials_in_poles: np.ndarray = dataclass_field(repr=False)

    @property
    def mix_to_pole(self) -> np.ndarray:
        diag = np.diag(self.pole_in_monomials)
        return self.pole_in_monomials / diag[:, None]

    @property
    def pole_to_mix(self) -> np.ndarray:
        return self.monomials_in_poles


@lru_cache(maxsize=16)
def coefficient_tables(
    region: str, k_max: float = 4.5, tol: float = 1e-8
) -> PurePoleTable:
    """Measure the monomial/pure-pole tables of one end by quadrature.

    The matrix of growing-mode coordinates of the monomials is lower
    triangular; inverting it row by row is the recursion that defines
    the pure poles, so the inverse's rows are their monomial
    coefficients.
    """
    _check_region(region)
    _check_half_integer(k_max, positive=True)
    labels = tuple(j + 0.5 for j in range(int(k_max + 0.5)))
    n = len(labels)
    coords = np.zeros((n, n))
    for i, k in enumerate(labels):
        monomial = section_monomial(region, k)
        for j, k_prime in enumerate(labels[: i + 1]):
            coords[i, j] = continuum_inner_product(
                _coordinate_family(region, k_prime), monomial, tol
            )
    lu, piv = lu_factor(coords)
    pole_in_monomials = np.empty((n, n))
    for j in range(n):
        unit = np.zeros(n)
        unit[j] = 1.0
        pole_in_monomials[:, j] = lu_solve(lu, piv, unit)
    return PurePoleTable(region, labels, pole_in_monomials, coords)


def pure_pole(
    region: str,
    k: float,
    z,
    side: str | None = None,
    k_max: float | None = None,
    tol: float = 1e-8,
):
    """Pure pole value: unit growing mode at its end, decay elsewhere."""
    _check_region(region)
    k = _check_half_integer(k, positive=True)
    table = coefficient_tables(region, k_max if k_max is not None else k, tol)
    if k not in table.labels:
        raise ValueError(f"label {k} beyond the table's k_max")
    row = table.pole_in_monomials[table.labels.index(k)]
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for coeff, k_prime in zip(row, table.labels):
        if coeff != 0.0:
            out = out + coeff * pulled_back_monomial(region, k_prime, z, side)
    return out if out.shape else complex(out)
