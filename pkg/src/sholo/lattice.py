"""Lattice strips and slit-strips: geometry, edges, corners, boundary.

The strip is the set of lattice points with a <= x <= b; the slit-strip
additionally cuts the graph along the downward ray x = 0, y <= 0, where
every vertical edge is doubled into a left copy and a right copy.
Vertices and horizontal edges are never doubled.

Coordinates are stored as doubled integers (2x, 2y) so that half-integer
midpoints and face centers are exact. All public constructors accept
lattice units (floats or ints) and convert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

STRIP = "strip"
SLIT_STRIP = "slit_strip"

INTERIOR = "interior"
LEFT_WALL = "left_wall"
RIGHT_WALL = "right_wall"
SLIT_LEFT = "slit_left"
SLIT_RIGHT = "slit_right"

BOUNDARY_COMPONENTS = (LEFT_WALL, RIGHT_WALL, SLIT_LEFT, SLIT_RIGHT)

# Counterclockwise boundary tangents and the induced boundary lines
# i * tau^{-1/2} R, written as the angle of the line direction.
BOUNDARY_TANGENT = {
    LEFT_WALL: -1j,
    RIGHT_WALL: 1j,
    SLIT_LEFT: 1j,
    SLIT_RIGHT: -1j,
}
BOUNDARY_LINE_ANGLE = {
    LEFT_WALL: -math.pi / 4,
    RIGHT_WALL: math.pi / 4,
    SLIT_LEFT: math.pi / 4,
    SLIT_RIGHT: -math.pi / 4,
}

# Angle of the corner line for a vertex/face pair, keyed by the sign
# pattern of v - p in units of 1/2: (sign(vx-px), sign(vy-py)).
CORNER_LINE_ANGLE = {
    (-1, -1): -3 * math.pi / 8,
    (1, -1): 3 * math.pi / 8,
    (-1, 1): -math.pi / 8,
    (1, 1): math.pi / 8,
}


class GeometryError(ValueError):
    """Raised for objects that do not belong to the requested lattice."""


@dataclass(frozen=True)
class StripSpec:
    """Geometry parameters of a lattice strip or slit-strip.

    Walls sit at x = a and x = b with a < 0 < b; the width is b - a.
    A slit-strip cuts along x = 0 for y <= 0 and requires both legs to
    be nonempty, which a < 0 < b already guarantees.
    """

    a: int
    b: int
    kind: str = STRIP

    def __post_init__(self):
        if self.a != int(self.a) or self.b != int(self.b):
            raise GeometryError("wall positions must be integers")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "b", int(self.b))
        if not (self.a < 0 < self.b):
            raise GeometryError(f"need a < 0 < b, got a={self.a}, b={self.b}")
        if self.kind not in (STRIP, SLIT_STRIP):
            raise GeometryError(f"unknown kind {self.kind!r}")
        if self.kind == SLIT_STRIP and self.width < 2:
            raise GeometryError("slit-strip needs both legs nonempty")

    @property
    def width(self) -> int:
        return self.b - self.a

    @property
    def left_leg_width(self) -> int:
        return -self.a

    @property
    def right_leg_width(self) -> int:
        return self.b

    @property
    def is_slit(self) -> bool:
        return self.kind == SLIT_STRIP


def strip(a: int, b: int) -> StripSpec:
    return StripSpec(a, b, STRIP)


def slit_strip(a: int, b: int) -> StripSpec:
    return StripSpec(a, b, SLIT_STRIP)


def cross_section(spec: StripSpec) -> np.ndarray:
    """Half-integer midpoints a+1/2, ..., b-1/2 of the row y = 0."""
    return spec.a + 0.5 + np.arange(spec.width)


def cross_section_x2(spec: StripSpec) -> np.ndarray:
    """Doubled-integer x coordinates of the cross-section midpoints."""
    return 2 * spec.a + 1 + 2 * np.arange(spec.width)


@dataclass(frozen=True)
class EdgeId:
    """An edge identified by its doubled midpoint coordinates.

    Horizontal edges have odd x2 and even y2, vertical edges even x2 and
    odd y2. slit_side distinguishes the two copies of a doubled vertical
    edge on the slit and is "none" everywhere else.
    """

    orientation: str  # "h" or "v"
    x2: int
    y2: int
    slit_side: str = "none"

    def __post_init__(self):
        if self.orientation == "h":
            ok = self.x2 % 2 != 0 and self.y2 % 2 == 0
        elif self.orientation == "v":
            ok = self.x2 % 2 == 0 and self.y2 % 2 != 0
        else:
            raise GeometryError(f"bad orientation {self.orientation!r}")
        if not ok:
            raise GeometryError(
                f"midpoint parity does not match orientation: "
                f"({self.x2}, {self.y2}) for {self.orientation!r}"
            )
        if self.slit_side not in ("none", "left", "right"):
            raise GeometryError(f"bad slit_side {self.slit_side!r}")
        if self.slit_side != "none":
            if self.orientation != "v" or self.x2 != 0 or self.y2 > 0:
                raise GeometryError(
                    "slit_side only applies to vertical edges at x=0, y<0"
                )

    @property
    def midpoint(self) -> complex:
        return complex(self.x2 / 2.0, self.y2 / 2.0)


def horizontal_edge(x_prime: float, y: int) -> EdgeId:
    return EdgeId("h", round(2 * x_prime), 2 * y)


def vertical_edge(x: int, y_prime: float, slit_side: str = "none") -> EdgeId:
    return EdgeId("v", 2 * x, round(2 * y_prime), slit_side)


def _edge_in_graph(spec: StripSpec, e: EdgeId) -> bool:
    if e.orientation == "h":
        return 2 * spec.a + 1 <= e.x2 <= 2 * spec.b - 1
    if not (2 * spec.a <= e.x2 <= 2 * spec.b):
        return False
    doubled = spec.is_slit and e.x2 == 0 and e.y2 < 0
    if doubled != (e.slit_side != "none"):
        return False
    return True


def classify_edge(spec: StripSpec, e: EdgeId) -> str:
    """Boundary component of an edge: interior, wall, or slit side."""
    if not _edge_in_graph(spec, e):
        raise GeometryError(f"edge {e} is not in the graph of {spec}")
    if e.orientation == "h":
        return INTERIOR
    if e.x2 == 2 * spec.a:
        return LEFT_WALL
    if e.x2 == 2 * spec.b:
        return RIGHT_WALL
    if e.slit_side == "left":
        return SLIT_LEFT
    if e.slit_side == "right":
        return SLIT_RIGHT
    return INTERIOR


def boundary_tangent(component: str) -> complex:
    """Counterclockwise tangent tau of a boundary component."""
    return BOUNDARY_TANGENT[component]


def boundary_line_angle(component: str) -> float:
    """Angle of the boundary line i tau^{-1/2} R of a component."""
    return BOUNDARY_LINE_ANGLE[component]


@dataclass(frozen=True)
class Corner:
    """A vertex/face pair at distance 1/sqrt(2), with its two edges.

    The face slot may be a virtual boundary face; the geometry is the
    same either way. Edge attributes name the horizontal and vertical
    edge sharing the vertex and the face (the vertical one is None for
    a boundary corner whose only real edge is the boundary edge).
    """

    vx2: int
    vy2: int
    px2: int
    py2: int

    def __post_init__(self):
        if self.vx2 % 2 != 0 or self.vy2 % 2 != 0:
            raise GeometryError("corner vertex must be a lattice point")
        if self.px2 % 2 == 0 or self.py2 % 2 == 0:
            raise GeometryError("corner face center must be half-integer")
        if abs(self.vx2 - self.px2) != 1 or abs(self.vy2 - self.py2) != 1:
            raise GeometryError("corner vertex and face must be adjacent")

    @property
    def vertex(self) -> complex:
        return complex(self.vx2 / 2.0, self.vy2 / 2.0)

    @property
    def face(self) -> complex:
        return complex(self.px2 / 2.0, self.py2 / 2.0)

    @property
    def line_angle(self) -> float:
        key = (self.vx2 - self.px2, self.vy2 - self.py2)
        return CORNER_LINE_ANGLE[key]

    @property
    def horizontal_edge(self) -> EdgeId:
        return EdgeId("h", self.px2, self.vy2)

    @property
    def vertical_edge(self) -> EdgeId:
        return EdgeId("v", self.vx2, self.py2)


@dataclass(frozen=True)
class BoundaryFace:
    """The imagined face across a boundary edge.

    For wall edges it sits outside the strip; for slit edges it is the
    virtual face accessed across the slit, which coincides in position
    with a real face of the other leg but has a distinct identity.
    """

    x2: int
    y2: int
    component: str
    edge: EdgeId

    @property
    def center(self) -> complex:
        return complex(self.x2 / 2.0, self.y2 / 2.0)


def boundary_face_of(spec: StripSpec, e: EdgeId) -> BoundaryFace:
    """Construct the boundary face across a boundary edge."""
    component = classify_edge(spec, e)
    if component == INTERIOR:
        raise GeometryError(f"edge {e} is not a boundary edge")
    if component == LEFT_WALL:
        x2 = 2 * spec.a - 1
    elif component == RIGHT_WALL:
        x2 = 2 * spec.b + 1
    elif component == SLIT_LEFT:
        x2 = 1  # virtual face to the right of the slit's left side
    else:
        x2 = -1  # virtual face to the left of the slit's right side
    return BoundaryFace(x2, e.y2, component, e)


def project_to_line(w: complex, angle: float) -> complex:
    """Orthogonal projection of w onto the line e^{i angle} R."""
    direction = complex(math.cos(angle), math.sin(angle))
    return direction * (w * direction.conjugate()).real


def line_coordinate(w, angle: float):
    """Signed coordinate of the projection of w onto e^{i angle} R."""
    return (w * np.exp(-1j * angle)).real


def reconstruct_from_projections(angle1: float, t1, angle2: float, t2):
    """Complex value with prescribed projections onto two distinct lines.

    t1 and t2 are the signed line coordinates on e^{i angle1} R and
    e^{i angle2} R. Arrays broadcast.
    """
    d = math.sin(angle2 - angle1)
    if abs(d) < 1e-12:
        raise GeometryError("projection lines must be distinct")
    re = (t1 * math.sin(angle2) - t2 * math.sin(angle1)) / d
    im = (t2 * math.cos(angle1) - t1 * math.cos(angle2)) / d
    return re + 1j * im


def window_vertices(spec: StripSpec, y_min: int, y_max: int):
    """All lattice vertices of the window, in row-major order."""
    return [
        (x, y)
        for y in range(y_min, y_max + 1)
        for x in range(spec.a, spec.b + 1)
    ]


def window_horizontal_edges(spec: StripSpec, y_min: int, y_max: int):
    out = []
    for y in range(y_min, y_max + 1):
        for x2 in range(2 * spec.a + 1, 2 * spec.b, 2):
            out.append(EdgeId("h", x2, 2 * y))
    return out


def window_vertical_edges(spec: StripSpec, y_min: int, y_max: int):
    """Vertical edges with both endpoints in the window, slit-aware."""
    out = []
    for y in range(y_min, y_max):
        y2 = 2 * y + 1
        for x in range(spec.a, spec.b + 1):
            if spec.is_slit and x == 0 and y2 < 0:
                out.append(EdgeId("v", 0, y2, "left"))
                out.append(EdgeId("v", 0, y2, "right"))
            else:
                out.append(EdgeId("v", 2 * x, y2))
    return out


def window_faces(spec: StripSpec, y_min: int, y_max: int):
    """Centers (x2, y2) of faces whose four edges lie in the window."""
    out = []
    for y in range(y_min, y_max):
        for x2 in range(2 * spec.a + 1, 2 * spec.b, 2):
            out.append((x2, 2 * y + 1))
    return out
