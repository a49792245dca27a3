"""Deterministic text emission: CSV, JSON, and simple SVG heatmaps.

Numbers print with 17 significant digits (enough to round-trip IEEE
doubles), keys stay snake_case, and repeated runs over the same data
produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def format_float(x: float) -> str:
    return "%.17g" % float(x)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(value)


def _write_text(target, text: str) -> None:
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def write_text(target, text: str) -> None:
    """Write prepared text to a path or file-like target."""
    _write_text(target, text)


def write_csv(target, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    _write_text(target, "\n".join(lines) + "\n")


class _Float17(float):
    """Float whose json serialization carries 17 significant digits."""

    def __repr__(self) -> str:  # json uses repr for float subclasses
        return format_float(self)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(key): _jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(item) for item in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(item) for item in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _Float17(float(obj))
    if isinstance(obj, complex):
        return {"re": _Float17(obj.real), "im": _Float17(obj.imag)}
    return obj


def write_json(target, meta: dict, rows) -> None:
    payload = {"meta": _jsonable(meta), "rows": _jsonable(rows)}
    _write_text(target, json.dumps(payload, sort_keys=True) + "\n")


_COLOR_STOPS = ((13, 27, 42), (63, 114, 175), (255, 209, 102))


def _color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    scaled = t * (len(_COLOR_STOPS) - 1)
    i = min(int(scaled), len(_COLOR_STOPS) - 2)
    frac = scaled - i
    lo, hi = _COLOR_STOPS[i], _COLOR_STOPS[i + 1]
    rgb = tuple(round(a + (b - a) * frac) for a, b in zip(lo, hi))
    return "#%02x%02x%02x" % rgb


def svg_heatmap(
    grid: np.ndarray,
    title: str = "",
    cell: int = 10,
    flip_rows: bool = True,
) -> str:
    """Render a 2D array of magnitudes as an SVG grid.

    Row 0 is drawn at the bottom by default (lattice convention of y
    increasing upward). NaN cells are left out. Colors scale linearly
    between the finite minimum and maximum.
    """
    grid = np.asarray(grid, dtype=float)
    n_rows, n_cols = grid.shape
    finite = np.isfinite(grid)
    lo = float(grid[finite].min()) if finite.any() else 0.0
    hi = float(grid[finite].max()) if finite.any() else 1.0
    span = hi - lo if hi > lo else 1.0
    pad = 2
    title_h = 16 if title else 0
    width = n_cols * cell + 2 * pad
    height = n_rows * cell + 2 * pad + title_h
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    ]
    if title:
        parts.append(
            f'<text x="{pad}" y="12" font-family="monospace" '
            f'font-size="11">{title}</text>'
        )
    for r in range(n_rows):
        rr = (n_rows - 1 - r) if flip_rows else r
        y = pad + title_h + rr * cell
        for c in range(n_cols):
            v = grid[r, c]
            if not np.isfinite(v):
                continue
            parts.append(
                f'<rect x="{pad + c * cell}" y="{y}" width="{cell}" '
                f'height="{cell}" fill="{_color((v - lo) / span)}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
