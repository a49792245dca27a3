"""The real inner-product space of cross-section functions.

Complex-valued functions on the ell half-integer midpoints of a strip's
cross-section form a real vector space of dimension 2*ell. The inner
product is real-bilinear: <f, g> = sum Re f Re g + Im f Im g. The
reflection f -> -i conj(f) is an isometric involution that will exchange
the growing and decaying halves of the spectral basis.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .lattice import StripSpec, cross_section


@dataclass(frozen=True)
class CrossSectionFn:
    """A complex function on the cross-section of a strip."""

    spec: StripSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.spec.width,):
            raise ValueError(
                f"expected {self.spec.width} values, got shape {values.shape}"
            )
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def positions(self) -> np.ndarray:
        return cross_section(self.spec)

    def __add__(self, other: "CrossSectionFn") -> "CrossSectionFn":
        _check_same_spec(self, other)
        return CrossSectionFn(self.spec, self.values + other.values)

    def __sub__(self, other: "CrossSectionFn") -> "CrossSectionFn":
        _check_same_spec(self, other)
        return CrossSectionFn(self.spec, self.values - other.values)

    def __mul__(self, scalar) -> "CrossSectionFn":
        return CrossSectionFn(self.spec, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "CrossSectionFn":
        return CrossSectionFn(self.spec, -self.values)


def _check_same_spec(f: CrossSectionFn, g: CrossSectionFn):
    if f.spec != g.spec:
        raise ValueError(f"mismatched specs: {f.spec} vs {g.spec}")


def inner_product(f: CrossSectionFn, g: CrossSectionFn) -> float:
    """Real-bilinear inner product sum of Re f Re g + Im f Im g."""
    _check_same_spec(f, g)
    return float(
        np.dot(f.values.real, g.values.real)
        + np.dot(f.values.imag, g.values.imag)
    )


def norm(f: CrossSectionFn) -> float:
    return float(np.sqrt(inner_product(f, f)))


def reflect_involution(f: CrossSectionFn) -> CrossSectionFn:
    """The involution f -> -i conj(f)."""
    return CrossSectionFn(f.spec, -1j * np.conj(f.values))


def as_real_vector(values: np.ndarray) -> np.ndarray:
    """Interleaved real coordinates (Re f1, Im f1, Re f2, Im f2, ...)."""
    values = np.asarray(values, dtype=complex)
    out = np.empty(2 * values.shape[0], dtype=float)
    out[0::2] = values.real
    out[1::2] = values.imag
    return out


def from_real_vector(vec: np.ndarray) -> np.ndarray:
    """Inverse of as_real_vector."""
    vec = np.asarray(vec, dtype=float)
    if vec.shape[0] % 2 != 0:
        raise ValueError("real vector length must be even")
    return vec[0::2] + 1j * vec[1::2]


def to_csv(f: CrossSectionFn, target) -> None:
    """Write columns x_prime, re, im. target is a path or text file."""
    from .emit import write_csv

    rows = [
        (x, v.real, v.imag) for x, v in zip(f.positions, f.values)
    ]
    write_csv(target, ("x_prime", "re", "im"), rows)


def from_csv(spec: StripSpec, source) -> CrossSectionFn:
    """Read a cross-section function written by to_csv."""
    if isinstance(source, (str, bytes)):
        with open(source, "r", encoding="utf-8") as handle:
            return from_csv(spec, handle)
    if isinstance(source, io.TextIOBase) or hasattr(source, "readlines"):
        lines = [ln.strip() for ln in source.readlines() if ln.strip()]
    else:
        raise TypeError("source must be a path or a text file")
    header = lines[0].split(",")
    if [h.strip() for h in header] != ["x_prime", "re", "im"]:
        raise ValueError(f"unexpected header {lines[0]!r}")
    xs, vals = [], []
    for line in lines[1:]:
        x, re, im = (float(part) for part in line.split(","))
        xs.append(x)
        vals.append(complex(re, im))
    expected = cross_section(spec)
    if len(xs) != expected.shape[0] or not np.allclose(xs, expected):
        raise ValueError("positions do not match the spec's cross-section")
    return CrossSectionFn(spec, np.array(vals))
