"""Command-line driver: ``annuli <subcommand> [options]``.

Every table output starts with two comment lines,

    # format: annuli-report/1
    # config: {...}

followed by the CSV header and rows (or a JSON object ``{"meta", "rows"}``).
The config line holds every parameter of the run, so ``annuli --replay FILE``
can re-execute it and compare the data section byte for byte.

Scalar subcommands (``volume``, ``maximal`` and single-frequency ``fourier``)
print the bare value when no ``--out`` is given.

Exit codes: 0 success, 2 invalid input or usage, 3 a check failed.
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

from .errors import DomainError, ToleranceError
from .ergodic import TorusSystem, TrigPoly, flow_average, mean_l2_error, spectral_average
from .fields import critical_norm, parse_field
from .fourier import SCAN_COLUMNS, annulus_kernel, decay_scan
from .geometry import Constant, annulus_volume, parse_thickness, thickness
from .maximal import (
    DEFAULT_DELTAS,
    REPORT_COLUMNS,
    cap_measure,
    control_report,
    dichotomy_report,
    growth_regression,
    maximal_over_radii,
)
from .quadrature import annulus_average, parse_scheme, sphere_average

FORMAT_VERSION = "annuli-report/1"
EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 2, 3
_NOT_CONFIG = ("out", "replay", "handler")


class Result:
    """Rows of one run plus whether its checks (if any) passed."""

    def __init__(self, columns, rows, ok=True, scalar=None):
        self.columns = tuple(columns)
        self.rows = [tuple(row) for row in rows]
        self.ok = ok
        self.scalar = scalar


# -- argument helpers -----------------------------------------------------------


def _floats(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _ints(text):
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise DomainError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _grid(text):
    """``log:lo,hi,n`` | ``lin:lo,hi,n`` | ``step:lo,hi,h`` | ``v1,v2,...``."""
    kind, _, rest = str(text).partition(":")
    if not rest:
        return np.array(_floats(text))
    lo, hi, n = _floats(rest)
    if kind == "log":
        return np.geomspace(lo, hi, int(n))
    if kind == "lin":
        return np.linspace(lo, hi, int(n))
    if kind == "step":
        return lo + n * np.arange(int(round((hi - lo) / n)) + 1)
    raise DomainError(f"unknown grid kind {kind!r} (use log, lin or step)")


def _point(text, d):
    x = np.array(_floats(text)) if text is not None else np.zeros(d)
    if x.size == 1 and d > 1:
        x = np.concatenate([x, np.zeros(d - 1)])
    if x.size != d:
        raise DomainError(f"point has {x.size} coordinates, expected {d}")
    return x


def _thickness_of(args):
    if args.thickness is not None:
        return parse_thickness(args.thickness)
    if args.e is not None:
        return Constant(args.e)
    raise DomainError("give either --e or --thickness")


def _scheme_of(args):
    return parse_scheme(args.scheme) if args.scheme else None


# -- subcommands ----------------------------------------------------------------


def cmd_volume(args):
    val = annulus_volume(args.dim, args.r, args.e, args.norm)
    return Result(("volume",), [(val,)], scalar=val)


def cmd_average(args):
    field = parse_field(args.field, args.dim)
    x = _point(args.x, args.dim)
    scheme = _scheme_of(args)
    if args.sphere:
        est = sphere_average(field, x, args.r, scheme)
    else:
        e, _ = thickness(_thickness_of(args), args.r)
        est = annulus_average(field, x, args.r, e, args.norm, scheme)
    return Result(("value", "error"), [(float(est.value), float(est.error))])


def cmd_maximal(args):
    field = parse_field(args.field, args.dim)
    x = _point(args.x, args.dim)
    val = maximal_over_radii(field, x, _grid(args.radii), _thickness_of(args), _scheme_of(args))
    return Result(("value",), [(val,)], scalar=val)


def _cap_rows(args):
    rng = np.random.default_rng(args.seed)
    rows, ok = [], True
    for i in range(args.trials):
        xnorm = float(rng.uniform(1.05, 3.0))
        rho = float(rng.uniform(0.05, 1.0))
        eps = float(rng.uniform(0.01, 1.0) * rho)
        mc = cap_measure(args.dim, xnorm, eps, rho, "mc", n=args.n, seed=args.seed + i + 1)
        if args.dim == 3:
            exact = cap_measure(3, xnorm, eps, rho, "exact3").value
            bound = eps / (4 * rho)
            passed = abs(mc.value - exact) <= 4 * mc.error and exact >= bound
        else:
            exact = math.nan
            bound = eps / (2 * math.pi * rho) if args.dim == 2 else math.nan
            passed = not mc.value < bound
        ok &= bool(passed)
        rows.append((xnorm, eps, rho, exact, mc.value, mc.error, bound, int(passed)))
    return Result(("xnorm", "eps", "rho", "exact", "mc", "mc_error", "lower_bound", "pass"), rows, ok)


def _norm_rows(args):
    rows, ok = [], True
    for d in args.dims:
        closed, quad = critical_norm(d)
        rel = abs(quad - closed) / closed
        passed = rel <= args.tol
        ok &= passed
        rows.append((d, closed, quad, rel, int(passed)))
    return Result(("d", "closed", "quadrature", "rel_err", "pass"), rows, ok)


def _growth_rows(args):
    fit = growth_regression(args.dim, args.xnorm, args.deltas)
    ok = fit.slope > 0 and fit.r2 > 0.9
    rows = [
        (delta, ll, val, fit.slope, fit.r2, int(ok))
        for delta, ll, val in zip(args.deltas, fit.loglog, fit.scaled_values)
    ]
    return Result(("delta", "loglog", "scaled_value", "slope", "r2", "pass"), rows, ok)


def cmd_lemma_check(args):
    return {"cap": _cap_rows, "norm": _norm_rows, "growth": _growth_rows}[args.lemma](args)


def cmd_dichotomy(args):
    if args.control is not None:
        rep = control_report(args.dim, args.a, args.deltas, args.control, args.p, args.n_rad)
    else:
        rep = dichotomy_report(args.dim, args.a, args.deltas, args.p, args.C, args.n_rad)
    rows = [tuple(row.as_dict()[c] for c in REPORT_COLUMNS) for row in rep.rows]
    return Result(REPORT_COLUMNS, rows)


def cmd_fourier(args):
    if args.r_grid is not None:
        rows = decay_scan(args.dim, _thickness_of(args), args.s, _grid(args.r_grid))
        return Result(SCAN_COLUMNS, rows)
    if args.r is None:
        raise DomainError("give --r (single kernel value) or --r-grid (scan)")
    e, _ = thickness(_thickness_of(args), args.r)
    val = annulus_kernel(args.dim, args.r, e, args.s)
    return Result(SCAN_COLUMNS, [(args.r, e, args.s, val)], scalar=val)


def cmd_ergodic(args):
    system = TorusSystem.from_csv(args.matrix) if args.matrix else TorusSystem.identity(args.dim)
    if system.d != args.dim:
        raise DomainError(f"matrix is {system.d}x{system.d} but --dim is {args.dim}")
    if args.poly:
        phi = TrigPoly.from_csv(args.poly)
    elif args.wave:
        phi = TrigPoly.wave(_ints(args.wave))
    else:
        raise DomainError("give --poly or --wave")
    fn = _thickness_of(args)
    radii = _grid(args.radii)
    if args.mode == "l2":
        rows = [(r, thickness(fn, r).e, mean_l2_error(system, phi, r, fn)) for r in radii]
        return Result(("r", "e", "l2_error"), rows)
    omega = _point(args.omega, system.d)
    scheme = _scheme_of(args)
    rows = []
    for i, r in enumerate(radii):
        est = flow_average(system, phi, omega, r, fn, scheme, stream=i)
        exact = spectral_average(system, phi, omega, r, fn)
        val = complex(est.value)
        rows.append((r, thickness(fn, r).e, val.real, val.imag, est.error, exact.real, exact.imag))
    return Result(("r", "e", "flow_re", "flow_im", "error", "spectral_re", "spectral_im"), rows)


# -- parser -----------------------------------------------------------------------


def _common(p):
    p.add_argument("--seed", type=int, default=0, help="base random seed")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--digits", type=int, help="significant digits (default: round-trip)")


def _shell_args(p, r_required=True):
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--r", type=float, required=r_required, help="outer radius")
    p.add_argument("--e", type=float, help="constant thickness")
    p.add_argument("--thickness", help="ball | prop:g | const:e | pow:c,a | table:path")


def build_parser():
    parser = argparse.ArgumentParser(prog="annuli", description="Averages over annuli: experiments.")
    parser.add_argument("--replay", metavar="FILE", help="re-run the config embedded in a report")
    parser.add_argument("--out", dest="replay_out", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("volume", help="annulus volume")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--e", type=float, required=True)
    p.add_argument("--norm", choices=("euclidean", "max"), default="euclidean")
    _common(p)
    p.set_defaults(handler=cmd_volume)

    p = sub.add_parser("average", help="annulus (or sphere) average of a field")
    _shell_args(p)
    p.add_argument("--field", required=True, help="cex | cex-scaled:h | ball-ind:R | radial-pow:b | trig:k1,..")
    p.add_argument("--x", help="center, comma separated (a single value means (v, 0, ...))")
    p.add_argument("--norm", choices=("euclidean", "max"), default="euclidean")
    p.add_argument("--scheme", help="mc:n,seed | prod:n_rad,n_ang | shell:n")
    p.add_argument("--sphere", action="store_true", help="average over the sphere of radius r")
    _common(p)
    p.set_defaults(handler=cmd_average)

    p = sub.add_parser("maximal", help="maximal average over a radius grid")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--x")
    p.add_argument("--radii", required=True, help="log:lo,hi,n | lin:lo,hi,n | r1,r2,...")
    p.add_argument("--e", type=float)
    p.add_argument("--thickness")
    p.add_argument("--scheme")
    _common(p)
    p.set_defaults(handler=cmd_maximal)

    p = sub.add_parser("lemma-check", help="numerical checks of the lemmas (exit 3 on failure)")
    p.add_argument("--lemma", choices=("cap", "norm", "growth"), required=True)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--n", type=int, default=10**6, help="Monte Carlo samples per cap trial")
    p.add_argument("--dims", type=_ints, default=[2, 3, 4])
    p.add_argument("--tol", type=float, default=5e-3)
    p.add_argument("--xnorm", type=float, default=1.5)
    p.add_argument("--deltas", type=_floats, default=list(DEFAULT_DELTAS))
    _common(p)
    p.set_defaults(handler=cmd_lemma_check)

    p = sub.add_parser("dichotomy", help="weak-type ratios, thin vs proportional thickness")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--a", type=float, required=True, help="outer radius of the probe annulus")
    p.add_argument("--deltas", type=_floats, default=list(DEFAULT_DELTAS))
    p.add_argument("--p", type=float)
    p.add_argument("--C", type=float, help="threshold constant (default: calibrated)")
    p.add_argument("--n-rad", type=int, default=256)
    p.add_argument("--control", type=float, metavar="GAMMA", help="run the prop:GAMMA control instead")
    _common(p)
    p.set_defaults(handler=cmd_dichotomy)

    p = sub.add_parser("fourier", help="annulus Fourier kernel, single value or decay scan")
    _shell_args(p, r_required=False)
    p.add_argument("--s", "--z", dest="s", type=float, required=True, help="frequency (signed in d=1)")
    p.add_argument("--r-grid", help="radius grid for a scan")
    _common(p)
    p.set_defaults(handler=cmd_fourier)

    p = sub.add_parser("ergodic", help="torus flow averages and mean ergodic error")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--matrix", help="CSV file with the flow matrix (default: identity)")
    p.add_argument("--poly", help="CSV file k1,...,kd,re,im")
    p.add_argument("--wave", default=None, help="single frequency k1,...,kd (if no --poly)")
    p.add_argument("--radii", required=True)
    p.add_argument("--e", type=float)
    p.add_argument("--thickness")
    p.add_argument("--mode", choices=("l2", "average"), default="l2")
    p.add_argument("--omega", help="torus point for --mode average")
    p.add_argument("--scheme")
    _common(p)
    p.set_defaults(handler=cmd_ergodic)
    return parser


# -- output -----------------------------------------------------------------------


def _fmt(v, digits):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if digits is None:
        return repr(v)
    return format(v, f".{digits}g")


def _json_value(v, digits):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(format(v, f".{digits}g")) if digits is not None else v


def config_of(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG and not k.startswith("replay")}


def render(result, config, fmt, digits):
    header = f"# format: {FORMAT_VERSION}\n# config: {json.dumps(config, sort_keys=True)}\n"
    if fmt == "json":
        rows = [{c: _json_value(v, digits) for c, v in zip(result.columns, row)} for row in result.rows]
        body = json.dumps({"meta": {"format": FORMAT_VERSION, "config": config}, "rows": rows}, indent=1)
        return body + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_fmt(v, digits) for v in row])
    return header + buf.getvalue()


def _data_section(text):
    text = text.strip()
    if text.startswith("{"):
        return json.dumps(json.loads(text)["rows"], sort_keys=True)
    return "\n".join(line for line in text.splitlines() if not line.startswith("#"))


def _read_config(path):
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return json.loads(text)["meta"]["config"], text
    for line in text.splitlines():
        if line.startswith("# config: "):
            return json.loads(line[len("# config: "):]), text
    raise DomainError(f"{path} has no embedded config line")


def _execute(args):
    result = args.handler(args)
    return result, render(result, config_of(args), args.format, args.digits)


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _replay(path, out):
    config, original = _read_config(path)
    parser = build_parser()
    command = config.get("command")
    if command not in parser._subparsers._group_actions[0].choices:
        raise DomainError(f"embedded config names an unknown command {command!r}")
    # rebuild the namespace: parser defaults first, then the recorded values
    ns = parser.parse_args([command, *_required_stub(parser, command)])
    for key, val in config.items():
        setattr(ns, key, val)
    _, text = _execute(ns)
    _emit(text, out)
    if _data_section(text) != _data_section(original):
        print(f"replay of {path}: data section differs", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def _required_stub(parser, command):
    sub = parser._subparsers._group_actions[0].choices[command]
    argv = []
    for action in sub._actions:
        if action.required and action.option_strings:
            argv += [action.option_strings[0], "1"]
    return argv


def run(argv=None):
    """Run the CLI and return the exit code (never raises ``SystemExit``)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if args.replay:
            return _replay(args.replay, args.replay_out)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        result, text = _execute(args)
        if result.scalar is not None and not args.out and args.format == "csv":
            text = _fmt(result.scalar, args.digits) + "\n"
        _emit(text, args.out)
        if not result.ok:
            print(f"{args.command}: check failed", file=sys.stderr)
            return EXIT_CHECK
        return EXIT_OK
    except ToleranceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())
