"""Pole functions on the slit-strip.

A slit-strip window has three ends: the full-width top and the two leg
bottoms. Each end carries the mode family of its own cross-section
(the full strip for the top, one leg for each bottom), split into
modes that decay toward the end and modes that grow toward it. A
function on the slit-strip decays at an end when its expansion there
contains no growing mode.

A pole function is the s-holomorphic function with a single prescribed
growing mode at one end, unit coefficient, and decay at the other two
ends. Its cross-section values at row 0 solve a square real-linear
system whose rows are the growing-mode coordinates at all three ends;
the system is well-conditioned (condition numbers in the tens), so
one dense LU factorization per geometry is enough.

Extension to a window never multiplies a computed coefficient by a
growing factor: the growing parts of the synthesis use the prescribed
coefficients exactly, and everything measured from row 0 rides on
decaying factors only. That keeps tall windows at roundoff accuracy
where naive mode synthesis loses all precision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache

import numpy as np

from ._linalg import cond1_estimate, lu_factor, lu_solve
from .analysis import CheckError, EdgeField
from .lattice import GeometryError, StripSpec
from .space import as_real_vector, from_real_vector
from .spectral import wall_mode

logger = logging.getLogger("sholo.poles")

END_TOP = "top"
END_LEFT = "left"
END_RIGHT = "right"
ENDS = (END_TOP, END_LEFT, END_RIGHT)

CONDITION_WARN_THRESHOLD = 1e12


def _require_slit(spec: StripSpec) -> None:
    if not spec.is_slit:
        raise GeometryError("pole functions live on slit-strips")


def end_mode_count(spec: StripSpec, end: str) -> int:
    if end == END_TOP:
        return spec.width
    if end == END_LEFT:
        return spec.left_leg_width
    if end == END_RIGHT:
        return spec.right_leg_width
    raise ValueError(f"unknown end {end!r}")


def _end_walls(spec: StripSpec, end: str) -> tuple:
    if end == END_TOP:
        return spec.a, spec.b
    if end == END_LEFT:
        return spec.a, 0
    if end == END_RIGHT:
        return 0, spec.b
    raise ValueError(f"unknown end {end!r}")


def _check_pole_label(spec: StripSpec, end: str, k: float) -> float:
    n = end_mode_count(spec, end)
    two_k = 2.0 * k
    if two_k != int(two_k) or int(two_k) % 2 == 0 or k <= 0:
        raise ValueError(f"pole label must be a positive half-integer, got {k}")
    if k > n - 0.5:
        raise ValueError(f"label {k} out of range for the {end} end ({n} modes)")
    return float(k)


def _extended(spec: StripSpec, end: str, values: np.ndarray) -> np.ndarray:
    """Zero-extend a leg profile to the full cross-section width."""
    if end == END_TOP:
        return values
    out = np.zeros(spec.width, dtype=complex)
    if end == END_LEFT:
        out[: spec.left_leg_width] = values
    else:
        out[spec.left_leg_width :] = values
    return out


def end_mode(spec: StripSpec, end: str, k: float, growing: bool):
    """Zero-extended mode of one end and its row-to-row factor.

    The label k is positive; growing selects the copy that grows toward
    the end (upward for the top, downward for a leg). The returned
    factor is the eigenvalue whose powers Lambda^y synthesize rows.
    """
    k = _check_pole_label(spec, end, k)
    lo, hi = _end_walls(spec, end)
    toward_end = k if end == END_TOP else -k
    label = toward_end if growing else -toward_end
    values, lam = wall_mode(lo, hi, label)
    return _extended(spec, end, values), lam


@dataclass
class SingularParts:
    """Growing-mode coefficients at the three ends of a slit-strip.

    Entry j of each array is the coefficient of the mode labeled
    k = j + 1/2 growing toward that end.
    """

    spec: StripSpec
    top: np.ndarray = dataclass_field(repr=False)
    left: np.ndarray = dataclass_field(repr=False)
    right: np.ndarray = dataclass_field(repr=False)

    def __post_init__(self):
        _require_slit(self.spec)
        for name in ("top", "left", "right"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (end_mode_count(self.spec, name),):
                raise ValueError(f"{name} coefficients have shape {arr.shape}")
            setattr(self, name, arr)

    @classmethod
    def zeros(cls, spec: StripSpec) -> "SingularParts":
        return cls(
            spec,
            np.zeros(spec.width),
            np.zeros(spec.left_leg_width),
            np.zeros(spec.right_leg_width),
        )

    @classmethod
    def unit(cls, spec: StripSpec, end: str, k: float) -> "SingularParts":
        k = _check_pole_label(spec, end, k)
        out = cls.zeros(spec)
        getattr(out, end)[int(k - 0.5)] = 1.0
        return out

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.top, self.left, self.right])

    @classmethod
    def from_vector(cls, spec: StripSpec, vec: np.ndarray) -> "SingularParts":
        w, ll = spec.width, spec.left_leg_width
        return cls(spec, vec[:w], vec[w : w + ll], vec[w + ll :])


def _labels(n: int):
    return [j + 0.5 for j in range(n)]


@lru_cache(maxsize=64)
def _singular_system(spec: StripSpec):
    """Matrix of growing-end coordinates, its LU, and mode tables.

    Row order matches SingularParts.as_vector. Since the end modes are
    orthonormal within their own family, each coordinate functional is
    the real dot product against the (zero-extended) mode itself.
    """
    _require_slit(spec)
    rows = []
    for end in ENDS:
        for k in _labels(end_mode_count(spec, end)):
            values, _ = end_mode(spec, end, k, growing=True)
            rows.append(as_real_vector(values))
    matrix = np.array(rows)
    lu, piv = lu_factor(matrix)
    cond = cond1_estimate(matrix, lu, piv)
    logger.info(
        "singular system for %s: size %d, one-norm condition ~ %.3e",
        spec,
        matrix.shape[0],
        cond,
    )
    if cond > CONDITION_WARN_THRESHOLD:
        logger.warning(
            "singular system for %s is ill-conditioned (~ %.3e)", spec, cond
        )
    return matrix, lu, piv, cond


def singular_system_condition(spec: StripSpec) -> float:
    """One-norm condition estimate of the growing-coordinate system."""
    return _singular_system(spec)[3]


def singular_parts(spec: StripSpec, values: np.ndarray) -> SingularParts:
    """Measure the growing-end coefficients of row-0 values."""
    matrix = _singular_system(spec)[0]
    return SingularParts.from_vector(spec, matrix @ as_real_vector(values))


def regular_parts(spec: StripSpec, values: np.ndarray) -> dict:
    """Measure the decaying-end coefficients of row-0 values."""
    _require_slit(spec)
    vec = as_real_vector(np.asarray(values, dtype=complex))
    out = {}
    for end in ENDS:
        coeffs = []
        for k in _labels(end_mode_count(spec, end)):
            mode, _ = end_mode(spec, end, k, growing=False)
            coeffs.append(float(as_real_vector(mode) @ vec))
        out[end] = np.array(coeffs)
    return out


def solve_prescribed_singular(
    spec: StripSpec, singular: SingularParts
) -> np.ndarray:
    """Row-0 values with the prescribed growing-end coefficients."""
    _, lu, piv, _ = _singular_system(spec)
    return from_real_vector(lu_solve(lu, piv, singular.as_vector()))


@dataclass
class PoleFunction:
    """The s-holomorphic function with one unit growing mode at one end."""

    spec: StripSpec
    end: str
    k: float
    values: np.ndarray = dataclass_field(repr=False)
    singular: SingularParts = dataclass_field(repr=False)
    roundtrip_residual: float = 0.0


def pole_function(spec: StripSpec, end: str, k: float) -> PoleFunction:
    """Solve for the pole with label k at the given end.

    The solved row is pushed back through the coordinate map; a
    roundtrip residual above 1e-8 means the geometry's singular system
    lost too much precision and is reported as a failure.
    """
    _require_slit(spec)
    k = _check_pole_label(spec, end, k)
    singular = SingularParts.unit(spec, end, k)
    values = solve_prescribed_singular(spec, singular)
    matrix = _singular_system(spec)[0]
    residual = float(
        np.abs(matrix @ as_real_vector(values) - singular.as_vector()).max()
    )
    if residual > 1e-8:
        raise CheckError(
            f"pole ({end}, {k}) roundtrip residual {residual:.3e} exceeds 1e-8"
        )
    return PoleFunction(spec, end, k, values, singular, residual)


def _end_tables(spec: StripSpec, end: str):
    """Stacked growing/decaying profiles and factors for one end."""
    n = end_mode_count(spec, end)
    grow_profiles = np.empty((n, spec.width), dtype=complex)
    grow_factors = np.empty(n)
    decay_profiles = np.empty((n, spec.width), dtype=complex)
    decay_factors = np.empty(n)
    for j, k in enumerate(_labels(n)):
        grow_profiles[j], grow_factors[j] = end_mode(spec, end, k, True)
        decay_profiles[j], decay_factors[j] = end_mode(spec, end, k, False)
    return grow_profiles, grow_factors, decay_profiles, decay_factors


def extend_slit_strip(
    spec: StripSpec,
    values: np.ndarray,
    y_min: int,
    y_max: int,
    singular: SingularParts | None = None,
    delta: float = 1.0,
) -> EdgeField:
    """S-holomorphic extension of row-0 values over a slit-strip window.

    Rows y >= 0 are synthesized from the top end's families, rows y < 0
    leg by leg from the bottom families. Growing factors multiply only
    the prescribed singular coefficients; all coefficients measured
    from the row-0 values ride on decaying factors. Pass the exact
    SingularParts whenever they are known (for a PoleFunction they are
    its defining data); when omitted they are measured from the row,
    which is fine for short windows only.
    """
    _require_slit(spec)
    values = np.asarray(values, dtype=complex)
    if values.shape != (spec.width,):
        raise ValueError(f"row values have shape {values.shape}")
    if y_min > y_max:
        raise ValueError("empty window")
    if singular is None:
        singular = singular_parts(spec, values)
    regular = regular_parts(spec, values)

    hrows = {}
    if y_max >= 0:
        gp, gf, dp, df = _end_tables(spec, END_TOP)
        for y in range(max(y_min, 0), y_max + 1):
            hrows[y] = (singular.top * gf**y) @ gp + (
                regular[END_TOP] * df**y
            ) @ dp
    if y_min < 0:
        parts = {
            end: _end_tables(spec, end) for end in (END_LEFT, END_RIGHT)
        }
        for y in range(y_min, min(y_max, -1) + 1):
            row = np.zeros(spec.width, dtype=complex)
            for end in (END_LEFT, END_RIGHT):
                gp, gf, dp, df = parts[end]
                row += (getattr(singular, end) * gf**y) @ gp
                row += (regular[end] * df**y) @ dp
            hrows[y] = row
    return EdgeField.from_horizontal_rows(spec, hrows, delta)


def extend_pole(
    pole: PoleFunction, y_min: int, y_max: int, delta: float = 1.0
) -> EdgeField:
    """Extension of a pole function with its exact singular data."""
    return extend_slit_strip(
        pole.spec, pole.values, y_min, y_max, pole.singular, delta
    )
