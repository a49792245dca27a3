"""Error tables for the discrete-to-continuum convergence statements.

Rescaling conventions: the lattice strip of width w maps onto the unit
continuum strip by z -> z/w, and cross-section values scale by
sqrt(w). Errors are sup distances over lattice sample points (no
interpolation); a statement "holds in the limit" becomes a table of
errors that must trend downward over doubling widths.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .analysis import CheckError
from .continuum import (
    REGION_TOP,
    continuum_inner_product,
    mode_restriction,
    mode_value,
    pure_pole,
    section_mode,
)
from .lattice import StripSpec, cross_section, slit_strip, strip
from .poles import (
    ENDS,
    end_mode,
    end_mode_count,
    extend_pole,
    pole_function,
)
from .space import as_real_vector
from .spectral import (
    apply_stencil,
    eigenvalue_from_frequency,
    solve_frequency,
    solve_mode,
    wall_mode,
    extend_strip,
)

STRIP_WIDTHS = (8, 16, 32, 64, 128)
SLIT_WIDTHS = (8, 16, 32, 64)

DEFAULT_POLE_RECTS = {
    "top": (-0.3, 0.3, 0.2, 0.6),
    "left": (-0.45, -0.05, -0.7, -0.25),
    "right": (0.05, 0.45, -0.7, -0.25),
}

DEFAULT_STRIP_RECT = (-0.4, 0.4, -0.5, 0.5)

TREND_STEP_TOLERANCE = 1.10


def walls_for(width: int, symmetric: bool = True) -> tuple:
    """Wall positions for a scaled geometry of the given width.

    Even widths center the strip; odd widths (or symmetric=False) put
    the extra column on the left leg.
    """
    if width < 2:
        raise ValueError("scaled geometries need width >= 2")
    if symmetric and width % 2 == 0:
        a = -(width // 2)
    else:
        a = -((width + 1) // 2)
    return a, width + a


def strip_for(width: int, symmetric: bool = True) -> StripSpec:
    return strip(*walls_for(width, symmetric))


def slit_for(width: int, symmetric: bool = True) -> StripSpec:
    return slit_strip(*walls_for(width, symmetric))


def thread_count() -> int:
    """Worker cap: SHOLO_THREADS if set, else a small default."""
    env = os.environ.get("SHOLO_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _map(fn, items):
    items = list(items)
    workers = min(thread_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def strictly_decreasing(errors) -> bool:
    return all(b < a for a, b in zip(errors, errors[1:]))


def trend_ok(errors) -> bool:
    """Last below first, and no step up by more than ten percent."""
    if len(errors) < 2:
        return True
    if not errors[-1] < errors[0]:
        return False
    return all(
        b <= a * TREND_STEP_TOLERANCE for a, b in zip(errors, errors[1:])
    )


@dataclass
class ErrorTable:
    """Sup errors of one rescaled family over a sequence of widths."""

    label: str
    widths: tuple
    errors: tuple
    meta: dict = dataclass_field(default_factory=dict)

    @property
    def decreasing(self) -> bool:
        return strictly_decreasing(self.errors)

    @property
    def trend(self) -> bool:
        return trend_ok(self.errors)

    def ratios(self) -> tuple:
        return tuple(
            b / a for a, b in zip(self.errors, self.errors[1:]) if a > 0
        )

    def rows(self):
        return [
            {"width": w, "error": e} for w, e in zip(self.widths, self.errors)
        ]


# ---------------------------------------------------------------------------
# strip eigenfunctions against continuum modes


def strip_section_error(width: int, k: float) -> float:
    """Sup distance of the rescaled eigenfunction from its limit mode."""
    spec = strip_for(width)
    mode = solve_mode(spec, k)
    xs = cross_section(spec)
    target = mode_restriction(REGION_TOP, k, xs / width)
    return float(
        np.abs(math.sqrt(width) * mode.fn.values - target).max()
    )


def strip_convergence_table(k: float, widths=STRIP_WIDTHS) -> ErrorTable:
    errors = _map(lambda w: strip_section_error(w, k), widths)
    return ErrorTable(
        f"strip k={k:+g}", tuple(widths), tuple(errors), {"k": k}
    )


def _rect_rows_cols(spec: StripSpec, width: int, rect) -> tuple:
    x0, x1, y0, y1 = rect
    ys = [
        y
        for y in range(math.ceil(y0 * width), math.floor(y1 * width) + 1)
    ]
    xs = cross_section(spec)
    mask = (xs / width >= x0) & (xs / width <= x1)
    return ys, xs, mask


def strip_window_error(
    width: int, k: float, rect=DEFAULT_STRIP_RECT
) -> float:
    """Sup distance over a rectangle of rows against the full mode."""
    spec = strip_for(width)
    mode = solve_mode(spec, k)
    ys, xs, mask = _rect_rows_cols(spec, width, rect)
    field = extend_strip(spec, mode.fn, min(ys + [0]), max(ys + [0]), [mode])
    worst = 0.0
    scale = math.sqrt(width)
    for y in ys:
        z = (xs[mask] + 1j * y) / width
        target = mode_value(REGION_TOP, k, z)
        got = scale * field.hrows[y][mask]
        worst = max(worst, float(np.abs(got - target).max()))
    return worst


def strip_window_table(
    k: float, widths=SLIT_WIDTHS, rect=DEFAULT_STRIP_RECT
) -> ErrorTable:
    errors = _map(lambda w: strip_window_error(w, k, rect), widths)
    return ErrorTable(
        f"strip window k={k:+g}",
        tuple(widths),
        tuple(errors),
        {"k": k, "rect": list(rect)},
    )


# ---------------------------------------------------------------------------
# frequency and eigenvalue asymptotics


def asymptotics_rows(k: float, widths=STRIP_WIDTHS):
    """|w*omega - pi k| and |w*(Lambda-1) - pi k| per width."""
    out = []
    for width in widths:
        omega = solve_frequency(width, k)
        lam = eigenvalue_from_frequency(omega)
        out.append(
            {
                "width": width,
                "freq_gap": abs(width * omega - math.pi * k),
                "eig_gap": abs(width * (lam - 1.0) - math.pi * k),
            }
        )
    return out


# ---------------------------------------------------------------------------
# slit-strip pole functions against pure poles


def pole_window_error(
    width: int, end: str, k: float, rect=None
) -> float:
    """Sup distance of the rescaled pole from the continuum pure pole."""
    if rect is None:
        rect = DEFAULT_POLE_RECTS[end]
    spec = slit_for(width)
    pole = pole_function(spec, end, k)
    ys, xs, mask = _rect_rows_cols(spec, width, rect)
    field = extend_pole(pole, min(ys + [0]), max(ys + [0]))
    worst = 0.0
    scale = math.sqrt(width)
    for y in ys:
        z = (xs[mask] + 1j * y) / width
        target = pure_pole(end, k, z)
        got = scale * field.hrows[y][mask]
        worst = max(worst, float(np.abs(got - target).max()))
    return worst


def pole_convergence_table(
    end: str, k: float, widths=SLIT_WIDTHS, rect=None
) -> ErrorTable:
    errors = _map(lambda w: pole_window_error(w, end, k, rect), widths)
    return ErrorTable(
        f"pole {end} k={k:g}",
        tuple(widths),
        tuple(errors),
        {"end": end, "k": k, "rect": list(rect or DEFAULT_POLE_RECTS[end])},
    )


# ---------------------------------------------------------------------------
# inner products: discrete dot products against quadrature


def ip_function_names(k_max: float = 1.5):
    """Deterministic catalog of the tested cross-section functions."""
    ks = []
    j = 0.5
    while j <= k_max + 1e-12:
        ks += [-j, j]
        j += 1.0
    ks.sort()
    names = []
    for family in ("strip", "left", "right"):
        names += [f"{family}_{k:+g}" for k in ks]
    for end in ENDS:
        names += [f"pole_{end}_{k:g}" for k in ks if k > 0]
    return names


def _parse_name(name: str):
    parts = name.split("_")
    if parts[0] == "pole":
        return ("pole", parts[1], float(parts[2]))
    return (parts[0], None, float(parts[1]))


def _discrete_values(spec: StripSpec, name: str) -> np.ndarray:
    kind, end, k = _parse_name(name)
    if kind == "pole":
        return pole_function(spec, end, k).values
    if kind == "strip":
        return wall_mode(spec.a, spec.b, k)[0]
    return end_mode(spec, kind, abs(k), growing=(k < 0))[0]


def _continuum_fn(name: str, k_max: float):
    kind, end, k = _parse_name(name)
    if kind == "pole":
        return lambda x: pure_pole(
            end, k, np.asarray(x, dtype=complex), k_max=k_max
        )
    region = REGION_TOP if kind == "strip" else kind
    return section_mode(region, k)


def classify_pair(name_a: str, name_b: str):
    """Structurally exact pairs and their values, else None.

    Exact cases: orthonormality within one eigen family, disjoint leg
    supports, and a pole paired with any member of a growing family,
    whose coefficient the pole's defining system prescribes as 0 or 1.
    """
    ka, kb = _parse_name(name_a), _parse_name(name_b)
    if ka[0] == "pole" and kb[0] == "pole":
        return None
    if ka[0] != "pole" and kb[0] != "pole":
        if ka[0] == kb[0]:
            return 1.0 if ka[2] == kb[2] else 0.0
        if {ka[0], kb[0]} == {"left", "right"}:
            return 0.0
        return None
    pole, other = (ka, kb) if ka[0] == "pole" else (kb, ka)
    family, k = other[0], other[2]
    grows_somewhere = (family == "strip" and k > 0) or (
        family in ("left", "right") and k < 0
    )
    if not grows_somewhere:
        return None
    if family == "strip":
        return 1.0 if pole[1] == "top" and pole[2] == k else 0.0
    return 1.0 if pole[1] == family and pole[2] == abs(k) else 0.0


@dataclass
class PairEntry:
    """One inner-product pair across the width sequence."""

    name_a: str
    name_b: str
    kind: str  # "exact" or "trend"
    widths: tuple
    discrete: tuple
    continuum: float
    errors: tuple

    @property
    def ok(self) -> bool:
        if self.kind == "exact":
            return max(self.errors) <= 1e-10
        return trend_ok(self.errors)


def inner_product_table(
    widths=SLIT_WIDTHS, k_max: float = 1.5, quad_tol: float = 1e-8
):
    """All pairwise inner products of the tested function catalog."""
    names = ip_function_names(k_max)

    def values_at(width):
        spec = slit_for(width)
        return {name: _discrete_values(spec, name) for name in names}

    tables = _map(values_at, widths)
    vectors = [
        {name: as_real_vector(vals[name]) for name in names}
        for vals in tables
    ]
    pairs = [
        (names[i], names[j])
        for i in range(len(names))
        for j in range(i, len(names))
    ]

    def build(pair):
        name_a, name_b = pair
        discrete = tuple(
            float(vec[name_a] @ vec[name_b]) for vec in vectors
        )
        exact = classify_pair(name_a, name_b)
        if exact is None:
            reference = continuum_inner_product(
                _continuum_fn(name_a, k_max),
                _continuum_fn(name_b, k_max),
                quad_tol,
            )
            kind = "trend"
        else:
            reference, kind = exact, "exact"
        errors = tuple(abs(d - reference) for d in discrete)
        return PairEntry(
            name_a, name_b, kind, tuple(widths), discrete, reference, errors
        )

    return _map(build, pairs)


# ---------------------------------------------------------------------------
# pole asymptotics at fixed width


@dataclass
class PoleAsymptotics:
    """Decay diagnostics of one pole function's extension."""

    end: str
    k: float
    width: int
    dominant_label: float
    fitted_rate: float
    target_rate: float
    singular_ratio_max: float
    regular_ratio_max: dict
    stencil_residual: float

    @property
    def rate_gap(self) -> float:
        return abs(self.fitted_rate - self.target_rate)


def pole_asymptotics(
    end: str, k: float, width: int, depth: int | None = None
) -> PoleAsymptotics:
    """Measure decay rates of a pole's extension toward all three ends.

    In the pole's own end the prescribed growth is removed by reading
    the decaying-family coordinates of each row; the slowest decaying
    mode that is actually present (coefficient above 1e-12 of the
    largest) dominates far out, and the fitted log-rate must match that
    mode's log Lambda. The other two ends must show geometrically
    shrinking row norms. A propagation spot-check at moderate rows ties
    the synthesized rows to the stencil.

    Rows are sampled at distances in [width/2, 2*width]. Farther out
    the prescribed part's magnitude times float roundoff overtakes the
    decaying signal and the read-off coordinates would be noise.
    """
    spec = slit_for(width)
    pole = pole_function(spec, end, k)
    distances = np.arange(max(2, width // 2), 2 * width + 1)
    depth = depth if depth is not None else int(distances[-1])
    field = extend_pole(pole, -depth, depth)
    ll = spec.left_leg_width

    def row_slice(y, which_end):
        row = field.hrows[y]
        if which_end == "left":
            return row[:ll]
        if which_end == "right":
            return row[ll:]
        return row

    # dominant decaying mode in the pole's own end
    n = end_mode_count(spec, end)
    decaying = [end_mode(spec, end, j + 0.5, growing=False) for j in range(n)]
    vecs = np.stack([as_real_vector(mode) for mode, _ in decaying])
    lams = np.array([lam for _, lam in decaying])
    per_step = lams if end == "top" else 1.0 / lams  # decay per unit distance
    coords0 = vecs @ as_real_vector(pole.values)
    present = np.abs(coords0) > 1e-12 * np.abs(coords0).max()
    candidates = np.flatnonzero(present)
    j_star = candidates[np.argmax(per_step[candidates])]
    target_rate = -math.log(per_step[j_star])

    toward = 1 if end == "top" else -1
    coords = np.stack(
        [
            vecs @ as_real_vector(field.hrows[toward * int(d)])
            for d in distances
        ]
    )
    residual_norms = np.linalg.norm(coords, axis=1)
    ratios = residual_norms[1:] / residual_norms[:-1]
    singular_ratio_max = float(ratios.max()) if ratios.size else 0.0
    mags = np.abs(coords[:, j_star])
    keep = mags > 1e-13 * mags.max()
    if keep.sum() < 2:
        raise CheckError("too few usable rows for a decay-rate fit")
    slope = np.polyfit(distances[keep], np.log(mags[keep]), 1)[0]
    fitted_rate = -slope

    # geometric decay of row norms toward the two regular ends
    regular_ratio_max = {}
    for other in ENDS:
        if other == end:
            continue
        sgn = 1 if other == "top" else -1
        norms = [
            float(np.linalg.norm(row_slice(sgn * int(d), other)))
            for d in distances
        ]
        ratios = [b / a for a, b in zip(norms, norms[1:]) if a > 0]
        regular_ratio_max[other] = max(ratios) if ratios else 0.0

    # stencil spot-checks off the synthesis path
    worst = 0.0
    for y in (1, 2):
        got = apply_stencil(field.hrows[y])
        ref = field.hrows[y + 1]
        scale = max(1.0, float(np.abs(ref).max()))
        worst = max(worst, float(np.abs(got - ref).max()) / scale)
    if min(ll, spec.right_leg_width) >= 2:
        for y in (-2, -3):
            for leg, sl in (("left", slice(0, ll)), ("right", slice(ll, None))):
                got = apply_stencil(field.hrows[y][sl], "down")
                ref = field.hrows[y - 1][sl]
                scale = max(1.0, float(np.abs(ref).max()))
                worst = max(worst, float(np.abs(got - ref).max()) / scale)

    return PoleAsymptotics(
        end,
        k,
        width,
        j_star + 0.5,
        float(fitted_rate),
        float(target_rate),
        singular_ratio_max,
        regular_ratio_max,
        worst,
    )
