"""Command-line front end: ``convert``, ``subdivide``, ``verify`` and ``plot``.

Exit codes: 0 success, 2 invalid input, 3 coprimality failure, 4 a residual
above tolerance.  ``APPINT_SOLVER`` overrides the solver named in the config.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .appint import CROSS_TOL, SOLVERS, InterpolatorySelection, run_appint
from .bezout_roots import ROOT_BACKENDS
from .errors import (BackendMismatch, CommonRoot, CoprimalityFailure, DomainError, ParseError,
                     ResidualTooLarge, SelectionOutOfRange, SingularSystem, ValidationError)
from .laurent import COPRIME_THRESHOLD, LaurentPolynomial
from .spectra import SpectrumSpec, SymbolProgram, basis_functions
from .subdivision import (DataSequence, check_reproduction_conditions, read_csv, run_scheme,
                          stepwise_residual, write_csv)

log = logging.getLogger("interpsub")

EXIT_OK, EXIT_FAIL, EXIT_VALIDATION, EXIT_COPRIME, EXIT_TOLERANCE = 0, 1, 2, 3, 4

PROGRAM_FIELDS = ("family", "spectrum", "v_init", "case", "alpha", "beta", "symbols")
CONFIG_FIELDS = PROGRAM_FIELDS + ("selection", "levels", "solver", "root_backend", "tol",
                                  "margin_threshold", "verify_spectrum", "window")


@dataclass
class SchemeConfig:
    program: SymbolProgram
    selections: object = None
    levels: int = 6
    solver: str = "both"
    root_backend: str = "hermite"
    tol: float = 1e-9
    margin_threshold: float = COPRIME_THRESHOLD
    spectrum: Optional[SpectrumSpec] = None
    window: tuple = (-4, 4)
    raw: dict = field(default_factory=dict, repr=False)


def _parse_selection(obj):
    if obj is None or obj == "centered":
        return None
    if isinstance(obj, dict):
        unknown = set(obj) - {"i", "star"}
        if unknown:
            raise ValidationError(f"selection: unknown fields {sorted(unknown)}")
        return InterpolatorySelection(obj["i"], obj.get("star", "-"))
    if isinstance(obj, list) and obj:
        return [_parse_selection(o) for o in obj]
    raise ValidationError(f"selection: expected 'centered', an object or a list, got {obj!r}")


def _field(obj, name, kind, check=None):
    val = obj[name]
    try:
        val = kind(val)
    except (TypeError, ValueError):
        raise ValidationError(f"field {name!r}: cannot read {val!r} as {kind.__name__}") from None
    if check is not None and not check(val):
        raise ValidationError(f"field {name!r}: invalid value {val!r}")
    return val


def parse_config(obj):
    """Validate a decoded config object and fill defaults."""
    if not isinstance(obj, dict):
        raise ValidationError("config must be a JSON object")
    unknown = set(obj) - set(CONFIG_FIELDS)
    if unknown:
        raise ValidationError(f"unknown config fields {sorted(unknown)}")
    try:
        program = SymbolProgram.from_json({k: obj[k] for k in PROGRAM_FIELDS if k in obj})
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"program fields: {exc}") from None
    cfg = SchemeConfig(program=program, raw=obj)
    cfg.selections = _parse_selection(obj.get("selection"))
    if "levels" in obj:
        cfg.levels = _field(obj, "levels", int, lambda k: 1 <= k <= 30)
    if "solver" in obj:
        cfg.solver = _field(obj, "solver", str, lambda s: s in SOLVERS)
    if "root_backend" in obj:
        cfg.root_backend = _field(obj, "root_backend", str, lambda s: s in ROOT_BACKENDS)
    if "tol" in obj:
        cfg.tol = _field(obj, "tol", float, lambda t: t > 0)
    if "margin_threshold" in obj:
        cfg.margin_threshold = _field(obj, "margin_threshold", float, lambda t: t > 0)
    if "window" in obj:
        w = obj["window"]
        if not (isinstance(w, list) and len(w) == 2 and all(isinstance(a, int) for a in w) and w[0] < w[1]):
            raise ValidationError(f"field 'window': expected [lo, hi] integers, got {w!r}")
        cfg.window = tuple(w)
    spec = obj.get("verify_spectrum")
    cfg.spectrum = SpectrumSpec.from_json(spec) if spec is not None else program.generated_spectrum()
    return cfg


def load_config(path):
    """Read and validate a JSON config; :class:`ParseError` carries the line number."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_config(obj)


def resolve_solver(cfg):
    env = os.environ.get("APPINT_SOLVER")
    if env:
        if env not in SOLVERS:
            raise ValidationError(f"APPINT_SOLVER={env!r}: expected one of {SOLVERS}")
        return env
    return cfg.solver


# --- deterministic JSON ------------------------------------------------------------

def _fmt_float(x):
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent=0):
    """JSON text with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj) + "\n")


# --- commands ------------------------------------------------------------------

def convert(cfg, levels=None):
    return run_appint(cfg.program, cfg.selections, levels or cfg.levels, solver=resolve_solver(cfg),
                      root_backend=cfg.root_backend, tol=cfg.tol, margin_threshold=cfg.margin_threshold)


def read_points(path):
    """Points file: one row per point, one (scalar) or two (x, y) numeric columns; header optional."""
    rows, names = [], None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            cells = [c.strip() for c in row if c.strip()]
            if not cells:
                continue
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                if rows or names is not None:
                    raise ParseError(f"{path}:{lineno}: non-numeric value in {row!r}") from None
                names = [c.lower() for c in cells]
    if not rows:
        raise ValidationError(f"{path}: no points")
    if len({len(r) for r in rows}) != 1:
        raise ParseError(f"{path}: rows have differing column counts")
    arr = np.array(rows)
    if names is not None and "x" in names:
        cols = [names.index("x")] + ([names.index("y")] if "y" in names else [])
        arr = arr[:, cols]
    if arr.shape[1] > 2:
        raise ValidationError(f"{path}: expected one or two coordinates, got {arr.shape[1]}")
    return arr[:, 0] if arr.shape[1] == 1 else arr


def subdivide(cfg, points, levels, all_levels=False):
    """Refine ``points`` (placed at t = 0, 1, ...) and return ``(rows, dim)``."""
    seq = convert(cfg, levels)
    run = run_scheme(seq.symbols, DataSequence(points, 0), levels)
    span = (0.0, float(len(points) - 1))
    ks = range(levels + 1) if all_levels else [levels]
    rows = [r for k in ks for r in run.rows(k, span)]
    return rows, (1 if np.ndim(points) == 1 else 2)


def verify(cfg, levels, tol):
    """Build the verification report; ``report["passed"]`` is the exit contract."""
    seq = convert(cfg, levels)
    checks = []

    def check(name, value, limit):
        checks.append(value <= limit)
        return {"value": value, "tol": limit, "ok": bool(value <= limit)}

    per_level = []
    for rec in seq.records:
        entry = {
            "k": rec.k,
            "selection": rec.selection.to_json(),
            "margin": rec.margin,
            "interpolation": check("interpolation", rec.interp_residual, tol),
            "bezout": check("bezout", rec.residual, tol),
        }
        if rec.backend_gap is not None:
            entry["backend_gap"] = check("backend_gap", rec.backend_gap, CROSS_TOL)
        if cfg.spectrum is not None:
            rep = check_reproduction_conditions(rec.m, cfg.spectrum, rec.k, "reproduction", tol)
            entry["conditions"] = {key: rep[key] for key in ("value_plus", "value_minus", "deriv_plus", "deriv_minus")}
            entry["conditions"]["max"] = check("conditions", rep["max"], tol)
        per_level.append(entry)
    report = {"levels": levels, "tol": tol, "solver": seq.records[0].solver, "per_level": per_level}
    if cfg.spectrum is not None:
        repro = []
        for label, f in basis_functions(cfg.spectrum, real=cfg.spectrum.is_conjugate_closed()):
            res, steps = stepwise_residual(seq.symbols, f, levels, cfg.window)
            repro.append({"basis": label, "residual": check("reproduction", res, tol), "per_level": steps})
        report["reproduction"] = repro
    report["passed"] = bool(all(checks))
    return report


def plot_svg(path_in, path_out, width, height, margin=10.0):
    """SVG 1.1 polyline of the deepest level in a refinement CSV."""
    cols = read_csv(path_in)
    if "level" in cols:
        keep = cols["level"] == cols["level"].max()
        cols = {k: v[keep] for k, v in cols.items()}
    if "y" in cols:
        xs, ys = cols["x"], cols["y"]
    else:
        xs, ys = cols["t"], cols["x"]
    if xs.size == 0:
        raise ValidationError(f"{path_in}: no points to plot")

    def scale(v, lo_px, hi_px):
        lo, hi = float(v.min()), float(v.max())
        if hi == lo:
            return np.full_like(v, 0.5 * (lo_px + hi_px))
        return lo_px + (v - lo) / (hi - lo) * (hi_px - lo_px)

    px = scale(xs, margin, width - margin)
    py = scale(ys, height - margin, margin)
    pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in zip(px, py))
    svg = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'  <polyline fill="none" stroke="black" stroke-width="1" points="{pts}"/>\n'
        "</svg>\n"
    )
    with open(path_out, "w") as fh:
        fh.write(svg)
    return len(px)


# --- entry point ------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="interpsub", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="write the interpolatory symbol sequence as JSON")
    c.add_argument("--config", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--levels", type=int)

    s = sub.add_parser("subdivide", help="refine a point list and write CSV")
    s.add_argument("--config", required=True)
    s.add_argument("--points", required=True)
    s.add_argument("--levels", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--all-levels", action="store_true", help="write every level, not only the last")

    v = sub.add_parser("verify", help="check interpolation and reproduction residuals")
    v.add_argument("--config", required=True)
    v.add_argument("--levels", type=int, required=True)
    v.add_argument("--tol", type=float)
    v.add_argument("--report", required=True)

    p = sub.add_parser("plot", help="draw the last level of a refinement CSV as SVG")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=480)
    return ap


def run_pipeline(args):
    if args.command == "plot":
        if args.width <= 0 or args.height <= 0:
            raise ValidationError("width and height must be positive")
        plot_svg(args.inp, args.out, args.width, args.height)
        return EXIT_OK
    cfg = load_config(args.config)
    levels = getattr(args, "levels", None)
    if levels is not None and levels < 1:
        raise ValidationError("--levels must be at least 1")
    if args.command == "convert":
        write_json(args.out, convert(cfg, levels).to_json())
        return EXIT_OK
    if args.command == "subdivide":
        rows, dim = subdivide(cfg, read_points(args.points), levels, args.all_levels)
        write_csv(args.out, rows, dim)
        return EXIT_OK
    tol = cfg.tol if args.tol is None else args.tol
    if not tol > 0:
        raise ValidationError("--tol must be positive")
    report = verify(cfg, levels, tol)
    write_json(args.report, report)
    return EXIT_OK if report["passed"] else EXIT_TOLERANCE


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return run_pipeline(args)
    except (CoprimalityFailure, SingularSystem, CommonRoot) as exc:
        log.error("%s", exc)
        return EXIT_COPRIME
    except (BackendMismatch, ResidualTooLarge) as exc:
        log.error("%s", exc)
        return EXIT_TOLERANCE
    except (ParseError, ValidationError, DomainError, SelectionOutOfRange) as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
