"""Command-line front end.

Every subcommand writes a deterministic table (CSV or JSON, SVG for
field heatmaps) to --out or stdout, and has a --check mode that runs
the computation's invariant suite and reports pass/fail counts on
stderr. Exit codes: 0 success, 2 invalid parameters, 3 failed
numerical check; failures leave a machine-readable error record on
stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import converge, emit
from ._linalg import SingularMatrixError
from .analysis import (
    CheckError,
    WINDOW_COMPONENTS,
    check_riemann_bv,
    check_sholomorphic,
    compute_H,
    harmonic_measure,
    verify_mean_value,
)
from .continuum import (
    QuadratureError,
    closed_mix_to_pole_top,
    closed_pole_to_mix_top,
    coefficient_tables,
    REGION_TOP,
)
from .lattice import GeometryError, slit_strip, strip
from .poles import (
    ENDS,
    extend_pole,
    pole_function,
    singular_system_condition,
)
from .space import CrossSectionFn, as_real_vector, from_csv, norm, to_csv
from .spectral import (
    all_modes,
    allowed_frequency_residual,
    apply_stencil,
    extend_strip,
    frequency_bracket,
    mode_coefficients,
    propagate,
    solve_mode,
    spectrum as spectrum_modes,
)


class CliError(ValueError):
    """Bad parameter combination caught after argparse."""


def _error_record(code: int, kind: str, message: str) -> int:
    record = {"error": {"type": kind, "message": message}}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _error_record(2, "usage", message)
        raise SystemExit(2)


# ---------------------------------------------------------------------------
# argument types


def half_integer(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    doubled = round(2 * value)
    if abs(2 * value - doubled) > 1e-9 or doubled % 2 == 0:
        raise argparse.ArgumentTypeError(
            f"{text!r} is not a half-integer (expected 0.5, 1.5, ...)"
        )
    return doubled / 2


def positive_half_integer(text: str) -> float:
    value = half_integer(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return value


def rows_window(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("--rows expects Y0:Y1")
    try:
        y0, y1 = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError("--rows expects integer rows")
    if y0 >= y1:
        raise argparse.ArgumentTypeError("--rows expects Y0 < Y1")
    return y0, y1


def rect_arg(text: str):
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("--rect expects X0:X1:Y0:Y1")
    try:
        x0, x1, y0, y1 = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("--rect expects numbers")
    if x0 >= x1 or y0 >= y1:
        raise argparse.ArgumentTypeError("--rect expects X0 < X1 and Y0 < Y1")
    return (x0, x1, y0, y1)


_WHICH = {
    "t": "top",
    "l": "left",
    "r": "right",
    "top": "top",
    "left": "left",
    "right": "right",
}


def which_end(text: str) -> str:
    key = text.strip().lower()
    if key not in _WHICH:
        raise argparse.ArgumentTypeError(
            f"{text!r} is not one of T, L, R"
        )
    return _WHICH[key]


def doubling_widths(l_max: int, start: int = 8):
    widths = [start]
    while widths[-1] < l_max:
        widths.append(widths[-1] * 2)
    if widths[-1] != l_max:
        raise CliError(f"--lmax must be {start} times a power of two")
    return tuple(widths)


# ---------------------------------------------------------------------------
# shared plumbing


def add_geometry(parser, default_len=None):
    parser.add_argument(
        "--len", "-l", dest="length", type=int, default=default_len,
        help="strip width; walls placed symmetrically",
    )
    parser.add_argument("--a", type=int, default=None, help="left wall")
    parser.add_argument("--b", type=int, default=None, help="right wall")
    parser.add_argument(
        "--asym", action="store_true",
        help="with --len, put the extra column of an odd width on the left",
    )


def add_output(parser, default_format="csv"):
    parser.add_argument(
        "--format", choices=("csv", "json", "svg"), default=default_format
    )
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument(
        "--check", action="store_true",
        help="also run the invariant suite; any failure exits 3",
    )
    parser.add_argument(
        "--tol", type=float, default=None, help="override check tolerances"
    )


def resolve_walls(args) -> tuple:
    if args.a is not None or args.b is not None:
        if args.a is None or args.b is None:
            raise CliError("--a and --b must be given together")
        if args.length is not None:
            raise CliError("give either --len or --a/--b, not both")
        return args.a, args.b
    if args.length is None:
        raise CliError("geometry needed: --len L or --a A --b B")
    return converge.walls_for(args.length, symmetric=not args.asym)


def write_table(args, meta: dict, columns, records) -> None:
    target = args.out if args.out else sys.stdout
    if args.format == "json":
        emit.write_json(target, meta, records)
    elif args.format == "csv":
        emit.write_csv(
            target, columns, [[rec[c] for c in columns] for rec in records]
        )
    else:
        raise CliError(f"format {args.format!r} not supported here")


def report_checks(checks) -> int:
    """Print one line per check plus a count line; return #failures."""
    failed = 0
    for name, ok, detail in checks:
        status = "pass" if ok else "FAIL"
        sys.stderr.write(f"check {name}: {status} ({detail})\n")
        failed += 0 if ok else 1
    sys.stderr.write(
        f"checks: {len(checks) - failed} passed, {failed} failed\n"
    )
    return failed


def finish(args, checks) -> int:
    if not args.check:
        return 0
    failed = report_checks(checks)
    if failed:
        return _error_record(3, "check-failure", f"{failed} checks failed")
    return 0


def _tol(args, default: float) -> float:
    return args.tol if args.tol is not None else default


# ---------------------------------------------------------------------------
# field construction shared by pole/hfield


def _field_checks(field, args, rbv_tol):
    report = check_sholomorphic(field)
    checks = [
        (
            "corner-projections",
            report.max_corner_residual <= rbv_tol,
            f"max residual {report.max_corner_residual:.3e}",
        ),
        (
            "closed-contours",
            report.max_contour_residual <= rbv_tol,
            f"max residual {report.max_contour_residual:.3e}",
        ),
    ]
    for component, residual in sorted(check_riemann_bv(field).items()):
        checks.append(
            (
                f"boundary-line-{component}",
                residual <= rbv_tol,
                f"max residual {residual:.3e}",
            )
        )
    return checks


# ---------------------------------------------------------------------------
# subcommands


def cmd_spectrum(args) -> int:
    a, b = resolve_walls(args)
    spec = strip(a, b)
    modes = spectrum_modes(spec, args.kmax)
    records = [
        {"k": m.k, "omega": m.omega, "lambda_plus": m.lam} for m in modes
    ]
    write_table(
        args,
        {"subcommand": "spectrum", "a": a, "b": b, "width": spec.width},
        ("k", "omega", "lambda_plus"),
        records,
    )
    if not args.check:
        return 0

    checks = []
    tol = _tol(args, 1e-10)
    for m in modes:
        lo, hi = frequency_bracket(spec.width, m.k)
        checks.append(
            (
                f"bracket-k={m.k:g}",
                lo < m.omega < hi,
                f"omega {m.omega:.6f} in ({lo:.6f}, {hi:.6f})",
            )
        )
        ratio_res = allowed_frequency_residual(spec.width, m.omega)
        checks.append(
            (
                f"allowed-frequency-k={m.k:g}",
                ratio_res <= tol,
                f"residual {ratio_res:.3e}",
            )
        )
        quad = abs(m.lam**2 + (2 * math.cos(m.omega) - 4) * m.lam + 1)
        checks.append(
            (
                f"eigenvalue-quadratic-k={m.k:g}",
                quad <= _tol(args, 1e-12),
                f"residual {quad:.3e}",
            )
        )
    full = all_modes(spec)
    worst = 0.0
    for m in full:
        residual = norm(propagate(m.fn) - m.lam * m.fn)
        worst = max(worst, residual)
    checks.append(
        ("propagation-eigenpairs", worst <= tol, f"max residual {worst:.3e}")
    )
    basis = np.stack([as_real_vector(m.fn.values) for m in full])
    gram = np.abs(basis @ basis.T - np.eye(len(full))).max()
    checks.append(("orthonormal-basis", gram <= tol, f"deviation {gram:.3e}"))
    return finish(args, checks)


def cmd_eigenfunction(args) -> int:
    a, b = resolve_walls(args)
    spec = strip(a, b)
    mode = solve_mode(spec, args.k)
    xs = mode.fn.positions
    records = [
        {"x_prime": x, "re": v.real, "im": v.imag}
        for x, v in zip(xs, mode.fn.values)
    ]
    write_table(
        args,
        {
            "subcommand": "eigenfunction",
            "a": a,
            "b": b,
            "k": mode.k,
            "omega": mode.omega,
            "lambda": mode.lam,
        },
        ("x_prime", "re", "im"),
        records,
    )
    if not args.check:
        return 0
    tol = _tol(args, 1e-10)
    residual = norm(propagate(mode.fn) - mode.lam * mode.fn)
    unit = abs(norm(mode.fn) - 1.0)
    mirror = solve_mode(spec, -args.k)
    flip = np.abs(mirror.fn.values - (-1j * np.conj(mode.fn.values))).max()
    checks = [
        ("propagation-eigenpair", residual <= tol, f"residual {residual:.3e}"),
        ("unit-norm", unit <= tol, f"deviation {unit:.3e}"),
        (
            "reflection-partner",
            flip <= _tol(args, 1e-14),
            f"componentwise {flip:.3e}",
        ),
    ]
    return finish(args, checks)


def cmd_propagate(args) -> int:
    a, b = resolve_walls(args)
    spec = strip(a, b)
    if (args.k is None) == (args.infile is None):
        raise CliError("give exactly one of --k or --in")
    if args.k is not None:
        f = solve_mode(spec, args.k).fn
    else:
        f = from_csv(spec, args.infile)
    steps = args.steps
    values = f.values.copy()
    direction = "up" if steps >= 0 else "down"
    for _ in range(abs(steps)):
        values = apply_stencil(values, direction)
    result = CrossSectionFn(spec, values)
    records = [
        {"x_prime": x, "re": v.real, "im": v.imag}
        for x, v in zip(result.positions, result.values)
    ]
    write_table(
        args,
        {
            "subcommand": "propagate",
            "a": a,
            "b": b,
            "steps": steps,
        },
        ("x_prime", "re", "im"),
        records,
    )
    if not args.check:
        return 0
    # spectral synthesis must reproduce repeated stencil application
    coeffs = mode_coefficients(f)
    modes = all_modes(spec)
    synth = np.zeros(spec.width, dtype=complex)
    for m in modes:
        synth += coeffs[m.k] * m.lam**steps * m.fn.values
    scale = max(1.0, float(np.abs(values).max()))
    gap = float(np.abs(synth - values).max()) / scale
    tol = _tol(args, 1e-10)
    checks = [
        ("spectral-synthesis", gap <= tol, f"relative gap {gap:.3e}")
    ]
    return finish(args, checks)


def _pole_window(args, width: int):
    if args.rows is not None:
        return args.rows
    return (-2 * width, 2 * width)


def cmd_pole(args) -> int:
    a, b = resolve_walls(args)
    spec = slit_strip(a, b)
    pole = pole_function(spec, args.which, args.k)
    y0, y1 = _pole_window(args, spec.width)
    field = extend_pole(pole, y0, y1)
    meta = {
        "subcommand": "pole",
        "a": a,
        "b": b,
        "which": args.which,
        "k": args.k,
        "rows": [y0, y1],
        "roundtrip_residual": pole.roundtrip_residual,
    }
    if args.format == "svg":
        if not args.out:
            raise CliError("--format svg requires --out")
        grid = np.stack(
            [np.abs(field.hrows[y]) for y in range(y0, y1 + 1)]
        )
        title = f"|F| pole {args.which} k={args.k:g} width {spec.width}"
        emit.write_text(args.out, emit.svg_heatmap(grid, title))
        to_csv(CrossSectionFn(spec, pole.values), args.out + ".csv")
    elif args.format == "csv":
        field.to_csv(args.out if args.out else sys.stdout)
    else:
        records = [
            {
                "orientation": edge.orientation,
                "x2": edge.x2,
                "y2": edge.y2,
                "slit_side": edge.slit_side,
                "re": value.real,
                "im": value.imag,
            }
            for edge, value in field.edges()
        ]
        emit.write_json(args.out if args.out else sys.stdout, meta, records)
    if not args.check:
        return 0
    tol = _tol(args, 1e-10)
    checks = [
        (
            "singular-roundtrip",
            pole.roundtrip_residual <= _tol(args, 1e-8),
            f"residual {pole.roundtrip_residual:.3e}",
        ),
        (
            "condition-estimate",
            singular_system_condition(spec) < 1e10,
            f"cond {singular_system_condition(spec):.3e}",
        ),
    ]
    checks += _field_checks(field, args, tol)
    return finish(args, checks)


def cmd_hfield(args) -> int:
    a, b = resolve_walls(args)
    if args.which is not None:
        if args.k is None:
            raise CliError("--which also needs --k (pole label)")
        spec = slit_strip(a, b)
        pole = pole_function(spec, args.which, args.k)
        y0, y1 = _pole_window(args, spec.width)
        field = extend_pole(pole, y0, y1)
        source = {"which": args.which, "k": args.k}
    else:
        if args.k is None:
            raise CliError("--k is required (add --which T|L|R for a pole)")
        spec = strip(a, b)
        mode = solve_mode(spec, args.k)
        y0, y1 = _pole_window(args, spec.width)
        field = extend_strip(spec, mode.fn, y0, y1, [mode])
        source = {"k": args.k}
    h = compute_H(field, tol=_tol(args, 1e-9))
    meta = {
        "subcommand": "hfield",
        "a": a,
        "b": b,
        "rows": [y0, y1],
        "loop_residual": h.loop_residual,
        **source,
    }
    records = [
        {"carrier": carrier, "x2": x2, "y2": y2, "value": value}
        for carrier, x2, y2, value in h.rows()
    ]
    write_table(args, meta, ("carrier", "x2", "y2", "value"), records)
    if not args.check:
        return 0
    gap = h.vertex_face_gap()
    vertex_violation, face_violation = verify_mean_value(h)
    worst_bc = max(dev for _, dev in h.boundary_constants().values())
    checks = [
        (
            "loop-closure",
            h.loop_residual <= _tol(args, 1e-9),
            f"residual {h.loop_residual:.3e}",
        ),
        (
            "vertex-dominates-face",
            gap >= -_tol(args, 1e-12),
            f"min gap {gap:.3e}",
        ),
        (
            "vertex-mean-value",
            vertex_violation <= _tol(args, 1e-10),
            f"violation {vertex_violation:.3e}",
        ),
        (
            "face-mean-value",
            face_violation <= _tol(args, 1e-10),
            f"violation {face_violation:.3e}",
        ),
        (
            "boundary-constancy",
            worst_bc <= _tol(args, 1e-9),
            f"max deviation {worst_bc:.3e}",
        ),
    ]
    return finish(args, checks)


def cmd_harmonic_measure(args) -> int:
    a, b = resolve_walls(args)
    zero_on = frozenset(p.strip() for p in args.zero_on.split(",") if p.strip())
    unknown = zero_on - set(WINDOW_COMPONENTS)
    if unknown:
        raise CliError(f"unknown components: {sorted(unknown)}")
    needs_slit = bool(zero_on & {"slit_left", "slit_right"})
    spec = slit_strip(a, b) if (args.slit or needs_slit) else strip(a, b)
    if args.rows is None:
        raise CliError("--rows Y0:Y1 is required")
    y0, y1 = args.rows
    tol = _tol(args, 1e-10)
    hm = harmonic_measure(
        spec, y0, y1, zero_on, carrier=args.carrier, tol=tol
    )
    meta = {
        "subcommand": "harmonic-measure",
        "a": a,
        "b": b,
        "slit": spec.is_slit,
        "zero_on": sorted(zero_on),
        "carrier": args.carrier,
        "rows": [y0, y1],
        "sweeps": hm.sweeps,
    }
    records = [
        {"carrier": carrier, "x2": x2, "y2": y2, "value": value}
        for carrier, x2, y2, value in hm.rows()
    ]
    write_table(args, meta, ("carrier", "x2", "y2", "value"), records)
    if not args.check:
        return 0
    values = hm.values
    in_range = float(max(values.max() - 1.0, -values.min(), 0.0))
    complement = frozenset(WINDOW_COMPONENTS if spec.is_slit else
                           [c for c in WINDOW_COMPONENTS
                            if not c.startswith("slit")]) - zero_on
    hm2 = harmonic_measure(
        spec, y0, y1, complement, carrier=args.carrier, tol=tol
    )
    split = float(np.abs(hm.values + hm2.values - 1.0).max())
    checks = [
        ("range", in_range <= 1e-12, f"outside [0,1] by {in_range:.3e}"),
        (
            "complementary-split",
            split <= 10 * tol,
            f"deviation from 1 {split:.3e}",
        ),
    ]
    return finish(args, checks)


def cmd_coeffs(args) -> int:
    region = args.which
    table = coefficient_tables(region, args.kmax)
    labels = table.labels
    records = []
    for i, ki in enumerate(labels):
        for j, kj in enumerate(labels):
            if j > i:
                continue
            records.append(
                {
                    "k_row": ki,
                    "k_col": kj,
                    "pole_in_monomials": table.pole_in_monomials[i, j],
                    "monomials_in_poles": table.monomials_in_poles[i, j],
                }
            )
    write_table(
        args,
        {"subcommand": "coeffs", "which": region, "k_max": args.kmax},
        ("k_row", "k_col", "pole_in_monomials", "monomials_in_poles"),
        records,
    )
    if not args.check:
        return 0
    n1, n2 = table.pole_in_monomials, table.monomials_in_poles
    eye = np.eye(len(labels))
    inv1 = float(np.abs(n1 @ n2 - eye).max())
    inv2 = float(np.abs(n2 @ n1 - eye).max())
    tol_inv = _tol(args, 1e-8)
    checks = [
        ("mutual-inverse-left", inv1 <= tol_inv, f"deviation {inv1:.3e}"),
        ("mutual-inverse-right", inv2 <= tol_inv, f"deviation {inv2:.3e}"),
    ]
    if region == REGION_TOP:
        tol_closed = _tol(args, 1e-6)
        worst_mix = 0.0
        worst_pole = 0.0
        mix = table.mix_to_pole
        for i, ki in enumerate(labels):
            for j, kj in enumerate(labels):
                worst_mix = max(
                    worst_mix,
                    abs(mix[i, j] - closed_mix_to_pole_top(ki, kj)),
                )
                worst_pole = max(
                    worst_pole,
                    abs(n2[i, j] - closed_pole_to_mix_top(ki, kj)),
                )
        checks.append(
            (
                "closed-form-pole-expansion",
                worst_mix <= tol_closed,
                f"max gap {worst_mix:.3e}",
            )
        )
        checks.append(
            (
                "closed-form-monomial-expansion",
                worst_pole <= tol_closed,
                f"max gap {worst_pole:.3e}",
            )
        )
    return finish(args, checks)


def cmd_converge_strip(args) -> int:
    widths = doubling_widths(args.lmax)
    if args.rect is not None:
        table = converge.strip_window_table(args.k, widths, args.rect)
    else:
        table = converge.strip_convergence_table(args.k, widths)
    asym = converge.asymptotics_rows(args.k, widths)
    records = [
        {
            "width": width,
            "error": err,
            "freq_gap": row["freq_gap"],
            "eig_gap": row["eig_gap"],
        }
        for (width, err), row in zip(
            zip(table.widths, table.errors), asym
        )
    ]
    meta = {
        "subcommand": "converge-strip",
        "k": args.k,
        "widths": list(widths),
        "strictly_decreasing": table.decreasing,
        "trend_ok": table.trend,
    }
    write_table(
        args, meta, ("width", "error", "freq_gap", "eig_gap"), records
    )
    if not args.check:
        return 0
    freq_gaps = [row["freq_gap"] for row in asym]
    eig_gaps = [row["eig_gap"] for row in asym]
    checks = [
        (
            "error-decreasing",
            table.decreasing,
            f"errors {['%.3e' % e for e in table.errors]}",
        ),
        (
            "frequency-asymptotics",
            converge.strictly_decreasing(freq_gaps),
            f"gaps {['%.3e' % g for g in freq_gaps]}",
        ),
        (
            "eigenvalue-asymptotics",
            converge.strictly_decreasing(eig_gaps),
            f"gaps {['%.3e' % g for g in eig_gaps]}",
        ),
    ]
    return finish(args, checks)


def cmd_converge_pole(args) -> int:
    widths = doubling_widths(args.lmax)
    table = converge.pole_convergence_table(
        args.which, args.k, widths, args.rect
    )
    records = table.rows()
    meta = {
        "subcommand": "converge-pole",
        "which": args.which,
        "k": args.k,
        "widths": list(widths),
        "rect": table.meta["rect"],
        "trend_ok": table.trend,
    }
    write_table(args, meta, ("width", "error"), records)
    if not args.check:
        return 0
    diag = converge.pole_asymptotics(args.which, args.k, min(16, args.lmax))
    checks = [
        (
            "window-error-trend",
            table.trend,
            f"errors {['%.3e' % e for e in table.errors]}",
        ),
        (
            "singular-end-rate",
            diag.rate_gap <= _tol(args, 1e-3),
            f"fitted {diag.fitted_rate:.6f} target {diag.target_rate:.6f}",
        ),
        (
            "regular-end-decay",
            max(diag.regular_ratio_max.values()) < 1.0,
            f"ratios {diag.regular_ratio_max}",
        ),
        (
            "stencil-spot-check",
            diag.stencil_residual <= _tol(args, 1e-8),
            f"residual {diag.stencil_residual:.3e}",
        ),
    ]
    return finish(args, checks)


def cmd_converge_ip(args) -> int:
    widths = doubling_widths(args.lmax)
    entries = converge.inner_product_table(widths, args.kmax)
    records = [
        {
            "a": e.name_a,
            "b": e.name_b,
            "kind": e.kind,
            "continuum": e.continuum,
            "discrete": list(e.discrete),
            "errors": list(e.errors),
            "trend_ok": e.ok,
        }
        for e in entries
    ]
    meta = {
        "subcommand": "converge-ip",
        "widths": list(widths),
        "k_max": args.kmax,
        "pairs": len(entries),
        "all_ok": all(e.ok for e in entries),
    }
    if args.format == "csv":
        columns = ["a", "b", "kind", "continuum", "trend_ok"] + [
            f"error_{w}" for w in widths
        ]
        flat = []
        for rec in records:
            row = {
                key: rec[key]
                for key in ("a", "b", "kind", "continuum", "trend_ok")
            }
            for width, err in zip(widths, rec["errors"]):
                row[f"error_{width}"] = err
            flat.append(row)
        write_table(args, meta, columns, flat)
    else:
        write_table(args, meta, (), records)
    if not args.check:
        return 0
    bad = [e for e in entries if not e.ok]
    checks = [
        (
            "pairwise-trends",
            not bad,
            "all pairs ok" if not bad else
            "failing: " + ", ".join(f"({e.name_a},{e.name_b})" for e in bad),
        )
    ]
    exact_worst = max(
        (max(e.errors) for e in entries if e.kind == "exact"), default=0.0
    )
    checks.append(
        (
            "exact-pairs",
            exact_worst <= _tol(args, 1e-10),
            f"max deviation {exact_worst:.3e}",
        )
    )
    return finish(args, checks)


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> _Parser:
    parser = _Parser(
        prog="sholo",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("spectrum", help="frequencies and eigenvalues")
    add_geometry(p)
    p.add_argument("--kmax", type=positive_half_integer, default=None)
    add_output(p)
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("eigenfunction", help="one cross-section eigenvector")
    add_geometry(p)
    p.add_argument("--k", type=half_integer, required=True)
    add_output(p)
    p.set_defaults(handler=cmd_eigenfunction)

    p = sub.add_parser("propagate", help="apply the propagation stencil")
    add_geometry(p)
    p.add_argument("--k", type=half_integer, default=None)
    p.add_argument(
        "--in", dest="infile", default=None,
        help="CSV cross-section (x_prime, re, im) to propagate",
    )
    p.add_argument(
        "--steps", type=int, default=1,
        help="number of rows to move; negative steps go down",
    )
    add_output(p)
    p.set_defaults(handler=cmd_propagate)

    p = sub.add_parser("pole", help="slit-strip pole function field")
    add_geometry(p)
    p.add_argument("--which", type=which_end, required=True)
    p.add_argument("--k", type=positive_half_integer, required=True)
    p.add_argument("--rows", type=rows_window, default=None)
    add_output(p)
    p.set_defaults(handler=cmd_pole)

    p = sub.add_parser("hfield", help="imaginary part of the integral of F^2")
    add_geometry(p)
    p.add_argument("--k", type=half_integer, default=None)
    p.add_argument(
        "--which", type=which_end, default=None,
        help="use the pole at this end instead of a strip eigenfunction",
    )
    p.add_argument("--rows", type=rows_window, default=None)
    add_output(p)
    p.set_defaults(handler=cmd_hfield)

    p = sub.add_parser(
        "harmonic-measure", help="discrete harmonic measure of components"
    )
    add_geometry(p)
    p.add_argument(
        "--zero-on", required=True,
        help="comma-separated components valued 0 (others 1): "
        + ",".join(WINDOW_COMPONENTS),
    )
    p.add_argument("--slit", action="store_true", help="slit geometry")
    p.add_argument(
        "--carrier", choices=("vertices", "faces"), default="vertices"
    )
    p.add_argument("--rows", type=rows_window, default=None)
    add_output(p)
    p.set_defaults(handler=cmd_harmonic_measure)

    p = sub.add_parser("coeffs", help="pure-pole coefficient tables")
    p.add_argument("--which", type=which_end, default="top")
    p.add_argument("--kmax", type=positive_half_integer, default=4.5)
    add_output(p)
    p.set_defaults(handler=cmd_coeffs)

    p = sub.add_parser("converge", help="discrete-to-continuum error tables")
    conv_sub = p.add_subparsers(dest="table", required=True)

    q = conv_sub.add_parser("strip", help="strip eigenfunction errors")
    q.add_argument("--k", type=positive_half_integer, default=0.5)
    q.add_argument("--lmax", type=int, default=128)
    q.add_argument("--rect", type=rect_arg, default=None)
    add_output(q, default_format="json")
    q.set_defaults(handler=cmd_converge_strip)

    q = conv_sub.add_parser("pole", help="slit-strip pole errors")
    q.add_argument("--which", type=which_end, required=True)
    q.add_argument("--k", type=positive_half_integer, default=0.5)
    q.add_argument("--lmax", type=int, default=64)
    q.add_argument("--rect", type=rect_arg, default=None)
    add_output(q, default_format="json")
    q.set_defaults(handler=cmd_converge_pole)

    q = conv_sub.add_parser("ip", help="inner-product convergence")
    q.add_argument("--kmax", type=positive_half_integer, default=1.5)
    q.add_argument("--lmax", type=int, default=64)
    add_output(q, default_format="json")
    q.set_defaults(handler=cmd_converge_ip)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except CliError as exc:
        return _error_record(2, "invalid-parameters", str(exc))
    except CheckError as exc:
        return _error_record(3, "numerical-check", str(exc))
    except (QuadratureError, SingularMatrixError) as exc:
        return _error_record(3, "numerical-check", str(exc))
    except GeometryError as exc:
        return _error_record(2, "invalid-parameters", str(exc))
    except ValueError as exc:
        return _error_record(2, "invalid-parameters", str(exc))


if __name__ == "__main__":
    sys.exit(main())
