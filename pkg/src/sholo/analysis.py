"""Pointwise checks and potential theory for edge fields.

An edge field assigns a complex value to every edge of a truncated
strip or slit-strip window. The defining local property is corner-wise:
the two edges sharing a vertex and a face must have equal projections
onto the corner's line. From a field with that property one builds the
real potential H ("imaginary part of the integral of the square"),
whose increments are nonnegative from face to adjacent vertex and which
is constant along boundary components when the field has the Riemann
boundary values.

Internally horizontal rows are dense complex arrays of length width;
vertical rows have width+1 entries, except below the slit where the two
copies of the x=0 edge make it width+2 (left copy first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from ._backend import kernels
from .lattice import (
    LEFT_WALL,
    RIGHT_WALL,
    SLIT_LEFT,
    SLIT_RIGHT,
    Corner,
    EdgeId,
    GeometryError,
    StripSpec,
    boundary_line_angle,
    line_coordinate,
    reconstruct_from_projections,
)

# Corner line angles by position of the vertex relative to the face.
_SW = -3 * math.pi / 8  # vertex below-left of face center
_SE = 3 * math.pi / 8
_NW = -math.pi / 8
_NE = math.pi / 8

# Weight of a boundary face in the face mean-value property.
BOUNDARY_FACE_WEIGHT = 2.0 * (math.sqrt(2.0) - 1.0)

CUT_BOTTOM = "bottom"
CUT_TOP = "top"


class CheckError(ValueError):
    """Raised when a field fails a structural numerical check."""


def _direction(angle: float) -> complex:
    return complex(math.cos(angle), math.sin(angle))


# ---------------------------------------------------------------------------
# edge fields


def _is_slit_row(spec: StripSpec, y: int) -> bool:
    """Whether the vertical-edge row between y and y+1 is on the slit."""
    return spec.is_slit and y < 0


def _vertical_row_length(spec: StripSpec, y: int) -> int:
    return spec.width + (2 if _is_slit_row(spec, y) else 1)


def _vertical_index(spec: StripSpec, y: int, x: int, side: str = "none") -> int:
    """Array slot of the vertical edge at x in the row between y, y+1."""
    if _is_slit_row(spec, y):
        if x < 0:
            return x - spec.a
        if x > 0:
            return x - spec.a + 1
        if side == "left":
            return spec.left_leg_width
        if side == "right":
            return spec.left_leg_width + 1
        raise GeometryError("slit edge lookup requires a side")
    if side != "none":
        raise GeometryError("side tag only applies below the slit")
    return x - spec.a


def _collapse_left(spec: StripSpec, vrow: np.ndarray, y: int) -> np.ndarray:
    """Length width+1 view of a vertical row keeping the left slit copy."""
    if not _is_slit_row(spec, y):
        return vrow
    left = spec.left_leg_width
    return np.concatenate([vrow[: left + 1], vrow[left + 2 :]])


def _reconstruct_segment(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Vertical-edge values of one wall-to-wall segment of a row pair.

    Every vertical edge except the segment's right wall is determined by
    the two corners it shares with the face on its right; the right wall
    edge uses the face on its left.
    """
    n = lo.shape[0]
    out = np.empty(n + 1, dtype=complex)
    out[:n] = reconstruct_from_projections(
        _SW, line_coordinate(lo, _SW), _NW, line_coordinate(hi, _NW)
    )
    out[n] = reconstruct_from_projections(
        _SE,
        float(line_coordinate(lo[-1], _SE)),
        _NE,
        float(line_coordinate(hi[-1], _NE)),
    )
    return out


def reconstruct_vertical_row(
    spec: StripSpec, lo: np.ndarray, hi: np.ndarray, y: int
) -> np.ndarray:
    """Vertical-edge values between horizontal rows y and y+1.

    Below the slit each leg is reconstructed on its own; the two slit
    copies come out adjacent in the returned array (left copy first).
    """
    if _is_slit_row(spec, y):
        left = spec.left_leg_width
        return np.concatenate(
            [
                _reconstruct_segment(lo[:left], hi[:left]),
                _reconstruct_segment(lo[left:], hi[left:]),
            ]
        )
    return _reconstruct_segment(lo, hi)


@dataclass
class EdgeField:
    """Complex values on all edges of a window [y_min, y_max].

    hrows maps integer y to the horizontal-edge row at height y; vrows
    maps y to the vertical edges between heights y and y+1. delta is the
    lattice mesh carried into H-field increments.
    """

    spec: StripSpec
    y_min: int
    y_max: int
    hrows: dict = dataclass_field(repr=False, default_factory=dict)
    vrows: dict = dataclass_field(repr=False, default_factory=dict)
    delta: float = 1.0

    def __post_init__(self):
        if self.y_min > self.y_max:
            raise ValueError("empty window")
        w = self.spec.width
        for y in range(self.y_min, self.y_max + 1):
            row = np.asarray(self.hrows[y], dtype=complex)
            if row.shape != (w,):
                raise ValueError(f"horizontal row {y} has shape {row.shape}")
            self.hrows[y] = row
        for y in range(self.y_min, self.y_max):
            row = np.asarray(self.vrows[y], dtype=complex)
            expected = _vertical_row_length(self.spec, y)
            if row.shape != (expected,):
                raise ValueError(f"vertical row {y} has shape {row.shape}")
            self.vrows[y] = row

    @classmethod
    def from_horizontal_rows(cls, spec, hrows, delta: float = 1.0):
        """Build a field from horizontal rows, reconstructing verticals."""
        ys = sorted(hrows)
        y_min, y_max = ys[0], ys[-1]
        if ys != list(range(y_min, y_max + 1)):
            raise ValueError("horizontal rows must be contiguous")
        hrows = {y: np.asarray(hrows[y], dtype=complex) for y in ys}
        vrows = {
            y: reconstruct_vertical_row(spec, hrows[y], hrows[y + 1], y)
            for y in range(y_min, y_max)
        }
        return cls(spec, y_min, y_max, hrows, vrows, delta)

    def value(self, e: EdgeId) -> complex:
        if e.orientation == "h":
            y = e.y2 // 2
            if not (self.y_min <= y <= self.y_max):
                raise GeometryError(f"edge {e} outside window")
            return complex(self.hrows[y][(e.x2 - 2 * self.spec.a - 1) // 2])
        y = (e.y2 - 1) // 2
        if not (self.y_min <= y < self.y_max):
            raise GeometryError(f"edge {e} outside window")
        idx = _vertical_index(self.spec, y, e.x2 // 2, e.slit_side)
        return complex(self.vrows[y][idx])

    def edges(self):
        """Yield (EdgeId, value) over all edges, deterministic order."""
        a = self.spec.a
        for y in range(self.y_min, self.y_max + 1):
            row = self.hrows[y]
            for i in range(self.spec.width):
                yield EdgeId("h", 2 * a + 1 + 2 * i, 2 * y), complex(row[i])
        for y in range(self.y_min, self.y_max):
            row = self.vrows[y]
            y2 = 2 * y + 1
            if _is_slit_row(self.spec, y):
                left = self.spec.left_leg_width
                for x in range(a, 0):
                    yield EdgeId("v", 2 * x, y2), complex(row[x - a])
                yield EdgeId("v", 0, y2, "left"), complex(row[left])
                yield EdgeId("v", 0, y2, "right"), complex(row[left + 1])
                for x in range(1, self.spec.b + 1):
                    yield EdgeId("v", 2 * x, y2), complex(row[x - a + 1])
            else:
                for x in range(a, self.spec.b + 1):
                    yield EdgeId("v", 2 * x, y2), complex(row[x - a])

    def to_csv(self, target) -> None:
        """Columns orientation, x2, y2, slit_side, re, im."""
        from .emit import write_csv

        rows = [
            (e.orientation, e.x2, e.y2, e.slit_side, v.real, v.imag)
            for e, v in self.edges()
        ]
        write_csv(
            target, ("orientation", "x2", "y2", "slit_side", "re", "im"), rows
        )


# ---------------------------------------------------------------------------
# local structure checks


def corner_value(field: EdgeField, corner: Corner, tol: float = 1e-9):
    """Common projection of the corner's two edge values onto its line.

    Raises CheckError when the two projections disagree by more than
    tol, which means the field is not s-holomorphic at this corner.
    """
    angle = corner.line_angle
    h_edge = corner.horizontal_edge
    v_edge = corner.vertical_edge
    if (
        field.spec.is_slit
        and v_edge.x2 == 0
        and v_edge.y2 < 0
    ):
        side = "left" if corner.px2 < 0 else "right"
        v_edge = EdgeId("v", 0, v_edge.y2, side)
    th = line_coordinate(field.value(h_edge), angle)
    tv = line_coordinate(field.value(v_edge), angle)
    if abs(th - tv) > tol:
        raise CheckError(
            f"corner projections differ by {abs(th - tv):.3e} at "
            f"vertex ({corner.vx2 / 2}, {corner.vy2 / 2})"
        )
    return _direction(angle) * (0.5 * (th + tv))


def _segment_views(spec: StripSpec, lo, hi, v, y: int):
    """Per-leg (lo, hi, verticals) views of a row pair."""
    if _is_slit_row(spec, y):
        left = spec.left_leg_width
        yield lo[:left], hi[:left], v[: left + 1]
        yield lo[left:], hi[left:], v[left + 1 :]
    else:
        yield lo, hi, v


def _interior_no_slit(spec: StripSpec, vrow: np.ndarray, y: int) -> np.ndarray:
    """Vertical values at x = a+1 .. b-1 excluding x = 0."""
    w, left = spec.width, spec.left_leg_width
    if _is_slit_row(spec, y):
        return np.concatenate([vrow[1:left], vrow[left + 2 : w + 1]])
    return np.concatenate([vrow[1:left], vrow[left + 1 : w]])


@dataclass(frozen=True)
class SholomorphicityReport:
    """Residuals of the corner-projection property and its consequences.

    max_corner_residual is the defining check: the largest mismatch of
    the two line projections over all corners. max_contour_residual is
    the implied discrete Cauchy-Riemann statement, the largest contour
    sum of the field around a face or an interior vertex.
    """

    max_corner_residual: float
    max_contour_residual: float


def check_sholomorphic(field: EdgeField) -> SholomorphicityReport:
    """Measure s-holomorphicity of a field over its whole window."""
    spec = field.spec
    corner_worst = 0.0
    contour_worst = 0.0
    for y in range(field.y_min, field.y_max):
        lo, hi, v = field.hrows[y], field.hrows[y + 1], field.vrows[y]
        for los, his, vs in _segment_views(spec, lo, hi, v, y):
            if los.shape[0] == 0:
                continue
            vw, ve = vs[:-1], vs[1:]
            for angle, edge, vert in (
                (_SW, los, vw),
                (_SE, los, ve),
                (_NW, his, vw),
                (_NE, his, ve),
            ):
                mism = line_coordinate(edge, angle) - line_coordinate(
                    vert, angle
                )
                corner_worst = max(corner_worst, float(np.abs(mism).max()))
            loop = (los - his) + 1j * (ve - vw)
            contour_worst = max(contour_worst, float(np.abs(loop).max()))
    for y in range(field.y_min + 1, field.y_max):
        row = field.hrows[y]
        west, east = row[:-1], row[1:]
        s_row, n_row = field.vrows[y - 1], field.vrows[y]
        if _is_slit_row(spec, y - 1):
            keep = np.arange(spec.width - 1) != (spec.left_leg_width - 1)
            west, east = west[keep], east[keep]
            south = _interior_no_slit(spec, s_row, y - 1)
            north = _interior_no_slit(spec, n_row, y)
        else:
            south = s_row[1 : spec.width]
            north = n_row[1 : spec.width]
        if west.shape[0] == 0:
            continue
        loop = (east - west) + 1j * (north - south)
        contour_worst = max(contour_worst, float(np.abs(loop).max()))
    return SholomorphicityReport(corner_worst, contour_worst)


def check_riemann_bv(field: EdgeField) -> dict:
    """Per boundary component, the largest distance from its line."""
    spec = field.spec
    out = {}
    if field.y_min == field.y_max:
        return out

    def distance(values, component):
        angle = boundary_line_angle(component)
        return float(np.abs((np.asarray(values) * np.exp(-1j * angle)).imag).max())

    left_vals = [field.vrows[y][0] for y in range(field.y_min, field.y_max)]
    right_vals = [field.vrows[y][-1] for y in range(field.y_min, field.y_max)]
    out[LEFT_WALL] = distance(left_vals, LEFT_WALL)
    out[RIGHT_WALL] = distance(right_vals, RIGHT_WALL)
    if spec.is_slit and field.y_min < 0:
        ll = spec.left_leg_width
        slit_rows = range(field.y_min, min(0, field.y_max))
        out[SLIT_LEFT] = distance(
            [field.vrows[y][ll] for y in slit_rows], SLIT_LEFT
        )
        out[SLIT_RIGHT] = distance(
            [field.vrows[y][ll + 1] for y in slit_rows], SLIT_RIGHT
        )
    return out


# ---------------------------------------------------------------------------
# the potential H = Im of the integral of the square


def _corner_projection(edge_values, vert_values, angle):
    """Corner value as the averaged projection of the two edge values."""
    t = 0.5 * (
        line_coordinate(edge_values, angle) + line_coordinate(vert_values, angle)
    )
    return _direction(angle) * t


@dataclass
class HField:
    """The potential on vertices, faces, and boundary faces of a window.

    vertices[r, i] is the value at lattice point (a + i, y_min + r);
    faces[r, j] at face center (a + j + 1/2, y_min + r + 1/2). Boundary
    faces are stored per component as (y2 array, values array). All
    values share one normalization H(anchor) = 0.
    """

    spec: StripSpec
    y_min: int
    y_max: int
    delta: float
    anchor: tuple
    vertices: np.ndarray = dataclass_field(repr=False)
    faces: np.ndarray = dataclass_field(repr=False)
    boundary_faces: dict = dataclass_field(repr=False)
    loop_residual: float = 0.0

    def vertex(self, x: int, y: int) -> float:
        return float(self.vertices[y - self.y_min, x - self.spec.a])

    def face(self, x2: int, y2: int) -> float:
        r = (y2 - 1) // 2 - self.y_min
        j = (x2 - 2 * self.spec.a - 1) // 2
        return float(self.faces[r, j])

    def boundary_constants(self) -> dict:
        """Per component: (mean value, max deviation from the mean).

        Measured on the component's boundary vertices, where the
        Riemann boundary values force H to be constant. Virtual-face
        values are not constant; they sit below the vertex constant by
        the projected edge magnitude.
        """
        columns = {LEFT_WALL: 0, RIGHT_WALL: self.spec.width}
        if self.spec.is_slit and self.y_min <= 0:
            slit_col = self.spec.left_leg_width
            columns[SLIT_LEFT] = slit_col
            columns[SLIT_RIGHT] = slit_col
        out = {}
        for comp, i in columns.items():
            values = self.vertices[:, i]
            if comp in (SLIT_LEFT, SLIT_RIGHT):
                values = values[: 1 - self.y_min]  # rows y_min..0
            mean = float(values.mean())
            out[comp] = (mean, float(np.abs(values - mean).max()))
        return out

    def vertex_face_gap(self) -> float:
        """Min of H(v) - H(p) over adjacent vertex/face pairs."""
        gap = math.inf
        rr, ww = self.faces.shape
        for dr in (0, 1):
            for dj in (0, 1):
                corner_vals = self.vertices[dr : dr + rr, dj : dj + ww]
                gap = min(gap, float((corner_vals - self.faces).min()))
        for comp, (y2s, values) in self.boundary_faces.items():
            for k, y2 in enumerate(y2s):
                r = (int(y2) - 1) // 2 - self.y_min
                if comp == LEFT_WALL:
                    cols = (0,)
                elif comp == RIGHT_WALL:
                    cols = (self.spec.width,)
                else:
                    cols = (self.spec.left_leg_width,)
                for i in cols:
                    gap = min(gap, float(self.vertices[r, i] - values[k]))
                    gap = min(gap, float(self.vertices[r + 1, i] - values[k]))
        return gap

    def rows(self):
        """Yield (carrier, x2, y2, value) in deterministic order."""
        a = self.spec.a
        for r in range(self.vertices.shape[0]):
            for i in range(self.vertices.shape[1]):
                yield (
                    "vertex",
                    2 * (a + i),
                    2 * (self.y_min + r),
                    float(self.vertices[r, i]),
                )
        for r in range(self.faces.shape[0]):
            for j in range(self.faces.shape[1]):
                yield (
                    "face",
                    2 * a + 1 + 2 * j,
                    2 * (self.y_min + r) + 1,
                    float(self.faces[r, j]),
                )
        comp_x2 = {
            LEFT_WALL: 2 * self.spec.a - 1,
            RIGHT_WALL: 2 * self.spec.b + 1,
            SLIT_LEFT: 1,
            SLIT_RIGHT: -1,
        }
        for comp in sorted(self.boundary_faces):
            y2s, values = self.boundary_faces[comp]
            for y2, val in zip(y2s, values):
                yield ("boundary_" + comp, comp_x2[comp], int(y2), float(val))

    def to_csv(self, target) -> None:
        from .emit import write_csv

        write_csv(target, ("carrier", "x2", "y2", "value"), list(self.rows()))


def compute_H(
    field: EdgeField, anchor: tuple | None = None, tol: float = 1e-9
) -> HField:
    """Integrate the square of the field into its potential.

    Increments: between adjacent vertices, Im(F(z)^2 (u2 - u1)) through
    the edge z; between a vertex and an adjacent face, Im(2 F(c)^2 (v-p))
    through the corner c. The assignment sweeps rows from the window
    bottom; every relation is then re-checked, and the largest
    discrepancy is the loop-closure residual (raised as CheckError when
    above tol, since closure fails only for non-s-holomorphic input).
    """
    report = check_sholomorphic(field)
    if report.max_corner_residual > max(tol, 1e-9):
        raise CheckError(
            "field is not s-holomorphic: corner residual "
            f"{report.max_corner_residual:.3e}"
        )
    spec = field.spec
    w = spec.width
    ll = spec.left_leg_width
    d = field.delta
    n_rows = field.y_max - field.y_min

    vertices = np.empty((n_rows + 1, w + 1), dtype=float)
    bottom = field.hrows[field.y_min]
    vertices[0, 0] = 0.0
    vertices[0, 1:] = np.cumsum((bottom * bottom * d).imag)
    for r in range(n_rows):
        y = field.y_min + r
        vcol = _collapse_left(spec, field.vrows[y], y)
        vertices[r + 1] = vertices[r] + (vcol * vcol * (1j * d)).imag

    faces = np.empty((n_rows, w), dtype=float)
    for r in range(n_rows):
        y = field.y_min + r
        lo, v = field.hrows[y], field.vrows[y]
        j0 = 0
        for los, his, vs in _segment_views(
            spec, lo, field.hrows[y + 1], v, y
        ):
            nseg = los.shape[0]
            fc = _corner_projection(los, vs[:-1], _SW)
            incr = (2.0 * fc * fc * (d * complex(-0.5, -0.5))).imag
            faces[r, j0 : j0 + nseg] = (
                vertices[r, j0 : j0 + nseg] - incr
            )
            j0 += nseg

    boundary = {}
    y2s = np.array(
        [2 * (field.y_min + r) + 1 for r in range(n_rows)], dtype=int
    )
    left_edge = np.array([field.vrows[field.y_min + r][0] for r in range(n_rows)])
    fc = _corner_projection(left_edge, left_edge, _SE)
    boundary[LEFT_WALL] = (
        y2s,
        vertices[:-1, 0] - (2.0 * fc * fc * (d * complex(0.5, -0.5))).imag,
    )
    right_edge = np.array(
        [field.vrows[field.y_min + r][-1] for r in range(n_rows)]
    )
    fc = _corner_projection(right_edge, right_edge, _SW)
    boundary[RIGHT_WALL] = (
        y2s,
        vertices[:-1, w] - (2.0 * fc * fc * (d * complex(-0.5, -0.5))).imag,
    )
    if spec.is_slit and field.y_min < 0:
        slit_rows = [r for r in range(n_rows) if field.y_min + r < 0]
        sy2 = np.array([2 * (field.y_min + r) + 1 for r in slit_rows], dtype=int)
        lvals = np.array([field.vrows[field.y_min + r][ll] for r in slit_rows])
        rvals = np.array(
            [field.vrows[field.y_min + r][ll + 1] for r in slit_rows]
        )
        anchor_v = vertices[slit_rows, ll]
        fc = _corner_projection(lvals, lvals, _SW)
        boundary[SLIT_LEFT] = (
            sy2,
            anchor_v - (2.0 * fc * fc * (d * complex(-0.5, -0.5))).imag,
        )
        fc = _corner_projection(rvals, rvals, _SE)
        boundary[SLIT_RIGHT] = (
            sy2,
            anchor_v - (2.0 * fc * fc * (d * complex(0.5, -0.5))).imag,
        )

    if anchor is None:
        anchor = (spec.a, field.y_min)
    shift = vertices[anchor[1] - field.y_min, anchor[0] - spec.a]
    vertices -= shift
    faces -= shift
    boundary = {
        comp: (y2arr, vals - shift) for comp, (y2arr, vals) in boundary.items()
    }

    out = HField(
        spec,
        field.y_min,
        field.y_max,
        d,
        anchor,
        vertices,
        faces,
        boundary,
    )
    out.loop_residual = _loop_residual(field, out)
    if out.loop_residual > tol:
        raise CheckError(
            f"loop closure fails: residual {out.loop_residual:.3e} > {tol:.1e}"
        )
    return out


def _loop_residual(field: EdgeField, h: HField) -> float:
    """Largest violation of any H increment relation."""
    spec, d = field.spec, field.delta
    w, ll = spec.width, spec.left_leg_width
    vertices, faces = h.vertices, h.faces
    worst = 0.0
    n_rows = field.y_max - field.y_min

    for r in range(n_rows + 1):
        row = field.hrows[field.y_min + r]
        res = vertices[r, 1:] - vertices[r, :-1] - (row * row * d).imag
        worst = max(worst, float(np.abs(res).max()))

    for r in range(n_rows):
        y = field.y_min + r
        vrow = field.vrows[y]
        vcol = _collapse_left(spec, vrow, y)
        res = vertices[r + 1] - vertices[r] - (vcol * vcol * (1j * d)).imag
        worst = max(worst, float(np.abs(res).max()))
        if _is_slit_row(spec, y):
            right_copy = vrow[ll + 1]
            res2 = (
                vertices[r + 1, ll]
                - vertices[r, ll]
                - (right_copy * right_copy * 1j * d).imag
            )
            worst = max(worst, abs(float(res2)))

    displ = {
        _SW: d * complex(-0.5, -0.5),
        _SE: d * complex(0.5, -0.5),
        _NW: d * complex(-0.5, 0.5),
        _NE: d * complex(0.5, 0.5),
    }
    for r in range(n_rows):
        y = field.y_min + r
        lo, hi, v = field.hrows[y], field.hrows[y + 1], field.vrows[y]
        j0 = 0
        for los, his, vs in _segment_views(spec, lo, hi, v, y):
            nseg = los.shape[0]
            sl = slice(j0, j0 + nseg)
            for angle, edge, vert, dr, dj in (
                (_SW, los, vs[:-1], 0, 0),
                (_SE, los, vs[1:], 0, 1),
                (_NW, his, vs[:-1], 1, 0),
                (_NE, his, vs[1:], 1, 1),
            ):
                fc = _corner_projection(edge, vert, angle)
                incr = (2.0 * fc * fc * displ[angle]).imag
                vv = vertices[r + dr, j0 + dj : j0 + dj + nseg]
                res = vv - faces[r, sl] - incr
                worst = max(worst, float(np.abs(res).max()))
            j0 += nseg

    for comp, (y2arr, vals) in h.boundary_faces.items():
        if comp == LEFT_WALL:
            col, idx, low_a, up_a = 0, 0, _SE, _NE
        elif comp == RIGHT_WALL:
            col, idx, low_a, up_a = w, -1, _SW, _NW
        elif comp == SLIT_LEFT:
            col, idx, low_a, up_a = ll, ll, _SW, _NW
        else:
            col, idx, low_a, up_a = ll, ll + 1, _SE, _NE
        for k, y2 in enumerate(y2arr):
            r = (int(y2) - 1) // 2 - field.y_min
            ev = field.vrows[field.y_min + r][idx]
            for angle, dr in ((low_a, 0), (up_a, 1)):
                fc = _corner_projection(ev, ev, angle)
                incr = (2.0 * fc * fc * displ[angle]).imag
                res = vertices[r + dr, col] - vals[k] - incr
                worst = max(worst, abs(float(res)))
    return worst


def verify_mean_value(h: HField) -> tuple:
    """Largest violations of the two mean-value inequalities.

    Vertex side: H(v) minus the plain average of its four vertex
    neighbors, maximized over interior vertices (positive would violate
    the maximum principle). Face side: the weighted average of the four
    face neighbors minus H(p), with boundary faces entering at weight
    2(sqrt(2)-1), maximized over faces with a full neighborhood.
    """
    spec = h.spec
    w, ll = spec.width, spec.left_leg_width
    vertices, faces = h.vertices, h.faces
    n_rows = faces.shape[0]

    vertex_violation = -math.inf
    if vertices.shape[0] > 2 and vertices.shape[1] > 2:
        center = vertices[1:-1, 1:-1]
        nb = (
            vertices[:-2, 1:-1]
            + vertices[2:, 1:-1]
            + vertices[1:-1, :-2]
            + vertices[1:-1, 2:]
        )
        viol = center - nb / 4.0
        if spec.is_slit:
            for rr in range(viol.shape[0]):
                if h.y_min + 1 + rr <= 0:
                    viol[rr, ll - 1] = -math.inf
        vertex_violation = float(viol.max())

    face_violation = -math.inf
    bf = {comp: dict(zip(map(int, y2s), vals)) for comp, (y2s, vals) in h.boundary_faces.items()}
    wb = BOUNDARY_FACE_WEIGHT
    for r in range(1, n_rows - 1):
        y2 = 2 * (h.y_min + r) + 1
        on_slit = spec.is_slit and y2 < 0
        for j in range(w):
            total = faces[r - 1, j] + faces[r + 1, j]
            weight = 2.0
            if j == 0:
                total += wb * bf[LEFT_WALL][y2]
                weight += wb
            elif on_slit and j == ll:
                total += wb * bf[SLIT_RIGHT][y2]
                weight += wb
            else:
                total += faces[r, j - 1]
                weight += 1.0
            if j == w - 1:
                total += wb * bf[RIGHT_WALL][y2]
                weight += wb
            elif on_slit and j == ll - 1:
                total += wb * bf[SLIT_LEFT][y2]
                weight += wb
            else:
                total += faces[r, j + 1]
                weight += 1.0
            face_violation = max(
                face_violation, total / weight - faces[r, j]
            )
    return vertex_violation, float(face_violation)


# ---------------------------------------------------------------------------
# discrete Dirichlet problems / harmonic measure

WINDOW_COMPONENTS = (
    LEFT_WALL,
    RIGHT_WALL,
    SLIT_LEFT,
    SLIT_RIGHT,
    CUT_BOTTOM,
    CUT_TOP,
)


@dataclass
class HarmonicMeasure:
    """Solution of a 0/1 Dirichlet problem on a window."""

    spec: StripSpec
    y_min: int
    y_max: int
    carrier: str
    values: np.ndarray = dataclass_field(repr=False)
    interior_mask: np.ndarray = dataclass_field(repr=False)
    sweeps: int = 0

    def rows(self):
        if self.carrier == "vertices":
            for r in range(self.values.shape[0]):
                for i in range(self.values.shape[1]):
                    yield (
                        "vertex",
                        2 * (self.spec.a + i),
                        2 * (self.y_min + r),
                        float(self.values[r, i]),
                    )
        else:
            for r in range(self.values.shape[0]):
                for j in range(self.values.shape[1]):
                    yield (
                        "face",
                        2 * self.spec.a + 1 + 2 * j,
                        2 * (self.y_min + r) + 1,
                        float(self.values[r, j]),
                    )

    def to_csv(self, target) -> None:
        from .emit import write_csv

        write_csv(target, ("carrier", "x2", "y2", "value"), list(self.rows()))


def _gs_solve(idx, weights, fixed, parity, tol, max_sweeps):
    """Drive the kernel sweeps until the residual meets tol."""
    n = idx.shape[0]
    comb = np.concatenate([np.full(n, 0.5), fixed])
    wsum = weights.sum(axis=1)
    order = np.arange(n, dtype=np.int64)
    color0 = order[parity == 0]
    color1 = order[parity == 1]
    done = 0
    chunk = 64
    while done < max_sweeps:
        todo = min(chunk, max_sweeps - done)
        kernels.gs_sweeps(comb, idx, weights, wsum, color0, color1, todo)
        done += todo
        if kernels.residual_max(comb, idx, weights, wsum, n) <= tol:
            return comb[:n], done
    raise CheckError(f"Dirichlet iteration did not reach {tol:.1e}")


def harmonic_measure(
    spec: StripSpec,
    y_min: int,
    y_max: int,
    zero_on,
    carrier: str = "vertices",
    tol: float = 1e-10,
    max_sweeps: int = 10**6,
) -> HarmonicMeasure:
    """Discrete harmonic measure of the boundary complement.

    Solves the Dirichlet problem with data 0 on the named boundary
    components and 1 on the rest, by checkerboard Gauss-Seidel. The
    window cut rows act as boundary pieces named "bottom" and "top"
    (weight 1). For the vertex carrier the two slit components share
    their vertices; a vertex on any zero component gets data 0.
    """
    zero_set = set(zero_on)
    unknown = zero_set - set(WINDOW_COMPONENTS)
    if unknown:
        raise ValueError(f"unknown boundary components: {sorted(unknown)}")
    if carrier not in ("vertices", "faces"):
        raise ValueError("carrier must be 'vertices' or 'faces'")
    if y_max - y_min < 2:
        raise ValueError("window too small for an interior")
    w, ll = spec.width, spec.left_leg_width
    n_rows = y_max - y_min

    def data(components) -> float:
        return 0.0 if any(c in zero_set for c in components) else 1.0

    if carrier == "vertices":
        shape = (n_rows + 1, w + 1)
        comps = [[[] for _ in range(shape[1])] for _ in range(shape[0])]
        for r in range(shape[0]):
            y = y_min + r
            for i in range(shape[1]):
                if i == 0:
                    comps[r][i].append(LEFT_WALL)
                if i == w:
                    comps[r][i].append(RIGHT_WALL)
                if spec.is_slit and i == ll and y <= 0:
                    comps[r][i] += [SLIT_LEFT, SLIT_RIGHT]
                if r == 0:
                    comps[r][i].append(CUT_BOTTOM)
                if r == n_rows:
                    comps[r][i].append(CUT_TOP)
        interior = np.array(
            [[not c for c in row] for row in comps], dtype=bool
        )
        index = -np.ones(shape, dtype=np.int64)
        order = np.argwhere(interior)
        index[interior] = np.arange(order.shape[0])
        fixed_vals, fixed_of = [], {}

        def fixed_slot(r, i):
            if (r, i) not in fixed_of:
                fixed_of[(r, i)] = len(fixed_vals)
                fixed_vals.append(data(comps[r][i]))
            return fixed_of[(r, i)]

        n = order.shape[0]
        idx = np.empty((n, 4), dtype=np.int64)
        weights = np.ones((n, 4), dtype=float)
        parity = np.empty(n, dtype=np.int64)
        for t, (r, i) in enumerate(order):
            parity[t] = (r + i) % 2
            for s, (rr, ii) in enumerate(
                ((r - 1, i), (r + 1, i), (r, i - 1), (r, i + 1))
            ):
                if index[rr, ii] >= 0:
                    idx[t, s] = index[rr, ii]
                else:
                    idx[t, s] = n + fixed_slot(rr, ii)
        solution, sweeps = _gs_solve(
            idx, weights, np.array(fixed_vals, dtype=float), parity, tol,
            max_sweeps,
        )
        values = np.empty(shape, dtype=float)
        for r in range(shape[0]):
            for i in range(shape[1]):
                if index[r, i] >= 0:
                    values[r, i] = solution[index[r, i]]
                else:
                    values[r, i] = data(comps[r][i])
        return HarmonicMeasure(
            spec, y_min, y_max, carrier, values, interior, sweeps
        )

    # faces carrier
    shape = (n_rows, w)
    n = n_rows * w
    idx = np.empty((n, 4), dtype=np.int64)
    weights = np.empty((n, 4), dtype=float)
    parity = np.empty(n, dtype=np.int64)
    fixed_vals = []

    def add_fixed(components) -> int:
        fixed_vals.append(data(components))
        return n + len(fixed_vals) - 1

    for r in range(n_rows):
        y2 = 2 * (y_min + r) + 1
        on_slit = spec.is_slit and y2 < 0
        for j in range(w):
            t = r * w + j
            parity[t] = (r + j) % 2
            # south, north, west, east
            if r == 0:
                idx[t, 0], weights[t, 0] = add_fixed([CUT_BOTTOM]), 1.0
            else:
                idx[t, 0], weights[t, 0] = t - w, 1.0
            if r == n_rows - 1:
                idx[t, 1], weights[t, 1] = add_fixed([CUT_TOP]), 1.0
            else:
                idx[t, 1], weights[t, 1] = t + w, 1.0
            if j == 0:
                idx[t, 2], weights[t, 2] = (
                    add_fixed([LEFT_WALL]),
                    BOUNDARY_FACE_WEIGHT,
                )
            elif on_slit and j == ll:
                idx[t, 2], weights[t, 2] = (
                    add_fixed([SLIT_RIGHT]),
                    BOUNDARY_FACE_WEIGHT,
                )
            else:
                idx[t, 2], weights[t, 2] = t - 1, 1.0
            if j == w - 1:
                idx[t, 3], weights[t, 3] = (
                    add_fixed([RIGHT_WALL]),
                    BOUNDARY_FACE_WEIGHT,
                )
            elif on_slit and j == ll - 1:
                idx[t, 3], weights[t, 3] = (
                    add_fixed([SLIT_LEFT]),
                    BOUNDARY_FACE_WEIGHT,
                )
            else:
                idx[t, 3], weights[t, 3] = t + 1, 1.0
    solution, sweeps = _gs_solve(
        idx, weights, np.array(fixed_vals, dtype=float), parity, tol, max_sweeps
    )
    values = solution.reshape(shape)
    return HarmonicMeasure(
        spec, y_min, y_max, carrier, values,
        np.ones(shape, dtype=bool), sweeps,
    )
