"""``mqed`` command-line interface.

Exit codes: 0 success / all checks passed, 1 a verification failed or a
solver hit a singularity, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .conductivity import Nonlocal1DKernel
from .constants import get_constants
from .duality import rotate_responses, symmetry_class
from .errors import InvalidInputError, MQEDError, SingularityError
from .fluctuations import (
    field_fluctuation_spectrum,
    integral_relation_residual_1d,
    spectrum_route_residual_k,
)
from .green import solve_green_1d, solve_green_k
from .media import SLOTS, MediumModel, classify, decompose_magnetoelectric, default_omega_grid
from .verify import SUITES, parallel_map, run_suite
from .zoo import FIXTURE_NAMES, load_fixture

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
FLOAT_FMT = "%.12e"
COMPONENTS = ("xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz")

DEFAULTS_HELP = """\
default grids: omega = 50 log-spaced points over [0.1, 10] x the lowest
resonance of the model (1 when the model has none); k = 0.7 w0/c along x, y,
z and (1,2,3)/sqrt(14). Models are JSON files (schema_version 1) or the name
of a shipped fixture: {fixtures}.
""".format(fixtures=", ".join(FIXTURE_NAMES))


class UsageError(InvalidInputError):
    pass


# --------------------------------------------------------------------------
# argument parsing helpers


def parse_omega(text: str) -> np.ndarray:
    """``START:STOP:N[:log]`` or a single number."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) not in (3, 4):
            raise ValueError
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--omega expects START:STOP:N[:log], got {text!r}") from None
    spacing = parts[3] if len(parts) == 4 else "lin"
    if n < 1:
        raise UsageError("--omega needs N >= 1")
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise UsageError("log-spaced --omega needs positive bounds")
        grid = np.geomspace(start, stop, n)
    elif spacing == "lin":
        grid = np.linspace(start, stop, n)
    else:
        raise UsageError(f"unknown --omega spacing {spacing!r}; use 'log'")
    if n > 1 and not np.all(np.diff(grid) > 0):
        raise UsageError("--omega grid must be strictly increasing")
    return grid


def parse_k(text: str) -> np.ndarray:
    try:
        k = np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise UsageError(f"--k expects X,Y,Z, got {text!r}") from None
    if k.shape != (3,):
        raise UsageError(f"--k expects three components, got {text!r}")
    return k


def load_model(spec: str) -> MediumModel:
    path = Path(spec)
    if not path.exists() and spec in FIXTURE_NAMES:
        return load_fixture(spec)
    return MediumModel.load(path)


def _omega_grid(args, model):
    return parse_omega(args.omega) if args.omega else default_omega_grid(model)


def _k_list(args, model, const):
    if args.k:
        return [parse_k(t) for t in args.k]
    mag = 0.7 * model.reference_frequency() / const.c
    dirs = [np.eye(3)[i] for i in range(3)] + [np.array([1.0, 2.0, 3.0]) / math.sqrt(14.0)]
    return [mag * d for d in dirs]


# --------------------------------------------------------------------------
# output


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return FLOAT_FMT % float(x)


def tensor_columns(name: str) -> list:
    cols = []
    for c in COMPONENTS:
        cols += [f"re_{name}_{c}", f"im_{name}_{c}"]
    return cols


def tensor_values(t) -> list:
    out = []
    for z in np.asarray(t, dtype=complex).reshape(-1):
        out += [z.real, z.imag]
    return out


def write_table(columns, rows, args, meta=None):
    if args.format == "json":
        doc = {"schema_version": 1, **(meta or {}), "columns": columns, "rows": [
            [float(v) if not isinstance(v, str) else v for v in row] for row in rows
        ]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    emit(text, args)


def emit(text: str, args):
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def cmd_classify(args, const):
    model = load_model(args.model)
    w = parse_omega(args.omega)[0] if args.omega else model.reference_frequency()
    rs = model.evaluate(w)
    cls = classify(rs)
    kappa, chi = decompose_magnetoelectric(rs)
    sym = symmetry_class(model, default_omega_grid(model, count=10))
    doc = {
        "schema_version": 1,
        "model": model.name,
        **cls.to_dict(),
        "omega": float(w),
        "kappa_norm": float(np.linalg.norm(kappa)),
        "chi_norm": float(np.linalg.norm(chi)),
        "duality_symmetry": sym.symmetry,
        "witness_theta": sym.witness_theta,
    }
    emit(json.dumps(doc, indent=2) + "\n", args)
    return EXIT_OK


def cmd_evaluate(args, const):
    model = load_model(args.model)
    grid = _omega_grid(args, model)
    columns = ["omega"] + [c for s in SLOTS for c in tensor_columns(s)]
    rows = []
    for rs in parallel_map(model.evaluate, grid):
        rows.append([rs.omega.real] + [v for s in SLOTS for v in tensor_values(getattr(rs, s))])
    write_table(columns, rows, args, {"command": "evaluate", "model": model.name})
    return EXIT_OK


def cmd_green(args, const):
    model = load_model(args.model)
    grid = _omega_grid(args, model)
    ks = _k_list(args, model, const)
    pts = [(w, k) for w in grid for k in ks]
    results = parallel_map(lambda p: solve_green_k(model, p[1], p[0], const), pts)
    columns = ["omega", "kx", "ky", "kz"] + tensor_columns("G") + ["right_residual", "left_residual"]
    rows = [
        [w, *k, *tensor_values(g.G), g.right_residual, g.left_residual]
        for (w, k), g in zip(pts, results)
    ]
    write_table(columns, rows, args, {"command": "green", "model": model.name, "units": const.name})
    return EXIT_OK


def cmd_spectrum(args, const):
    model = load_model(args.model)
    grid = _omega_grid(args, model)
    ks = _k_list(args, model, const)
    pts = [(w, k) for w in grid for k in ks]

    def run(p):
        w, k = p
        spec = field_fluctuation_spectrum(solve_green_k(model, k, w, const), const=const)
        return spec, spectrum_route_residual_k(model, k, w, const)

    results = parallel_map(run, pts)
    columns = ["omega", "kx", "ky", "kz"] + tensor_columns("S") + ["min_eigenvalue", "route_residual"]
    rows = [
        [w, *k, *tensor_values(spec.S), spec.min_eigenvalue, res]
        for (w, k), (spec, res) in zip(pts, results)
    ]
    write_table(columns, rows, args, {"command": "spectrum", "model": model.name, "units": const.name})
    return EXIT_OK


def cmd_dualize(args, const):
    model = load_model(args.model)
    grid = _omega_grid(args, model)
    theta = args.theta
    columns = ["theta", "omega"] + [c for s in SLOTS for c in tensor_columns(s)]
    rows = []
    for w in grid:
        rs = rotate_responses(model.evaluate(w), theta)
        rows.append([theta, w] + [v for s in SLOTS for v in tensor_values(getattr(rs, s))])
    write_table(columns, rows, args, {"command": "dualize", "source_model": model.name, "theta": theta})
    return EXIT_OK


def cmd_sim1d(args, const):
    kern = Nonlocal1DKernel(
        n=args.n,
        length=args.length,
        ell=args.ell,
        plasma_frequency=args.plasma_frequency,
        damping=args.damping,
        const=const,
    )
    grid = parse_omega(args.omega) if args.omega else np.array([0.5, 1.0, 2.0])
    if np.any(grid <= 0):
        raise UsageError("sim1d needs omega > 0")

    def run(w):
        green = solve_green_1d(kern, w)
        return green, field_fluctuation_spectrum(green), integral_relation_residual_1d(kern, w)

    columns = ["omega", "x", "re_G", "im_G", "S", "fdt_residual"]
    rows = []
    for w, (green, spec, res) in zip(grid, parallel_map(run, grid)):
        diag_g = np.diag(green.G)
        diag_s = np.real(np.diag(spec.S))
        for x, g, s in zip(kern.x, diag_g, diag_s):
            rows.append([w, x, g.real, g.imag, s, res])
    meta = {"command": "sim1d", "n": kern.n, "length": kern.length, "ell": kern.ell,
            "plasma_frequency": kern.plasma_frequency, "damping": kern.damping}
    write_table(columns, rows, args, meta)
    return EXIT_OK


PRIMARY_TOL = {
    "schwarz": "schwarz",
    "fdt": "fdt",
    "duality": "duality_covariance",
    "onsager": "onsager_symmetric",
    "asymptote": "asymptote",
    "equivalence": "equivalence",
}


def cmd_verify(args, const):
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    model = load_model(args.model)
    overrides = {}
    if args.tol is not None:
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        overrides[PRIMARY_TOL[args.suite]] = args.tol
    report = run_suite(args.suite, model, const, overrides)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "residual", "comparison", "tolerance", "pass", "parameters"])
        for r in report.records:
            writer.writerow([r.check, _fmt(r.residual), r.comparison, _fmt(r.tolerance),
                             "true" if r.passed else "false", json.dumps(r.parameters, sort_keys=True)])
        text = buf.getvalue()
    else:
        text = json.dumps(report.to_dict(include_timings=args.timings), indent=2) + "\n"
    emit(text, args)
    status = "PASS" if report.passed else "FAIL"
    print(f"{args.suite}: {status} ({sum(r.passed for r in report.records)}/{len(report.records)} checks)",
          file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    "classify": cmd_classify,
    "evaluate": cmd_evaluate,
    "green": cmd_green,
    "spectrum": cmd_spectrum,
    "dualize": cmd_dualize,
    "sim1d": cmd_sim1d,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--units", choices=("scaled", "si"), default="scaled")

    parser = _Parser(
        prog="mqed",
        description="Macroscopic QED numerics for general linear media.",
        epilog=DEFAULTS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"mqed {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_, fmt="csv", model=True):
        p = sub.add_parser(name, help=help_, parents=[common], epilog=DEFAULTS_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        if model:
            p.add_argument("--model", required=True, help="model JSON path or fixture name")
        p.add_argument("--format", choices=("csv", "json"), default=fmt)
        return p

    p = add("classify", "classify a medium and its duality symmetry", fmt="json")
    p.add_argument("--omega", help="reference frequency (default: lowest resonance)")

    p = add("evaluate", "tabulate eps, xi, zeta, mu")
    p.add_argument("--omega", help="START:STOP:N[:log]")

    for name, help_ in (("green", "k-space Green tensor"), ("spectrum", "electric-field fluctuation spectrum")):
        p = add(name, help_)
        p.add_argument("--omega", help="START:STOP:N[:log]")
        p.add_argument("--k", action="append", help="wavevector X,Y,Z (repeatable)")

    p = add("dualize", "duality-rotated responses, tabulated per omega")
    p.add_argument("--omega", help="START:STOP:N[:log]")
    p.add_argument("--theta", type=float, required=True, help="rotation angle in radians")

    p = add("sim1d", "non-local 1-D Gaussian-Drude slab", model=False)
    p.add_argument("--omega", help="START:STOP:N[:log] (default: 0.5, 1, 2)")
    p.add_argument("--n", type=int, default=64, help="interior grid points (>= 16)")
    p.add_argument("--length", type=float, default=10.0, help="box length")
    p.add_argument("--ell", type=float, default=1.0, help="Gaussian smoothing length")
    p.add_argument("--plasma-frequency", type=float, default=1.0, help="Drude plasma frequency (0 disables)")
    p.add_argument("--damping", type=float, default=0.1, help="Drude damping rate")

    p = add("verify", "run a verification suite", fmt="json")
    p.add_argument("--suite", required=True, help=f"one of: {', '.join(SUITES)}")
    p.add_argument("--tol", type=float, help="override the suite's primary tolerance")
    p.add_argument("--timings", action="store_true", help="include wall time in the report")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        const = get_constants(args.units)
        return COMMANDS[args.command](args, const)
    except SingularityError as exc:
        print(f"mqed: singular: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InvalidInputError, ValueError) as exc:
        print(f"mqed: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except MQEDError as exc:
        print(f"mqed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
