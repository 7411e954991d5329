"""Command-line front end: ``qzeta {eval,scan,mu,poles}``.

Scalars go to stdout as a JSON envelope, scans as CSV followed by a single
``# {...}`` JSON trailer line. Logs go to stderr.

Exit codes: 0 ok, 1 usage, 2 pole, 3 budget, 4 bound violation,
5 insufficient data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time

import numpy as np

from .core import (
    LatticeKind,
    PoleLattice,
    QParameter,
    Tolerance,
    pole_points,
    zeta_q,
    zeta_q_single,
)
from .exceptions import BudgetExceededError, InsufficientDataError, PoleProximityError
from .growth import ScanRow, ScanSpec, check_bound, fit_mu, scan_vertical

SCHEMA_VERSION = "1"
CSV_HEADER = "v,log_abs,arg,pole_margin,skipped,bound_log,terms_used"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_POLE = 2
EXIT_BUDGET = 3
EXIT_BOUND = 4
EXIT_DATA = 5

DEFAULT_MAX_TERMS = 10**7

logger = logging.getLogger("qzeta")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(x):
    """17 significant digits; 'nan'/'inf' spelled out for CSV."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _json_num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _max_terms(args):
    if args.max_terms is not None:
        return args.max_terms
    env = os.environ.get("QZETA_MAX_TERMS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"QZETA_MAX_TERMS must be an integer, got {env!r}") from None
        if value < 1:
            raise UsageError("QZETA_MAX_TERMS must be at least 1")
        return value
    return DEFAULT_MAX_TERMS


def _qparam(value):
    try:
        return QParameter(value)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _tolerance(args):
    if not args.rel_tol > 0:
        raise UsageError(f"--rel-tol must be positive, got {args.rel_tol!r}")
    return Tolerance(args.rel_tol, _max_terms(args))


def _envelope(command, parameters, **payload):
    env = {"schema_version": SCHEMA_VERSION, "command": command, "parameters": parameters}
    env.update(payload)
    return env


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args):
    q = _qparam(args.q)
    tol = _tolerance(args)
    if args.single == (args.t_re is not None or args.t_im is not None):
        raise UsageError("give either --single or both --t-re and --t-im")
    if not args.single and (args.t_re is None or args.t_im is None):
        raise UsageError("--t-re and --t-im must be given together")
    if args.N is not None and args.N < 1:
        raise UsageError(f"--N must be a positive integer, got {args.N}")
    s = complex(args.s_re, args.s_im)
    start = time.perf_counter()
    try:
        if args.single:
            res = zeta_q_single(q, s, tol)
        else:
            res = zeta_q(q, s, complex(args.t_re, args.t_im), tol, method=args.method, N=args.N)
    except (PoleProximityError, BudgetExceededError):
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    wall = (time.perf_counter() - start) * 1e3
    value = res.value
    parameters = {
        "q": args.q,
        "s_re": args.s_re,
        "s_im": args.s_im,
        "t_re": args.t_re,
        "t_im": args.t_im,
        "single": args.single,
        "method": args.method,
        "N": args.N,
        "rel_tol": args.rel_tol,
        "max_terms": tol.max_terms,
    }
    return _envelope(
        "eval",
        parameters,
        value={
            "re": None if value is None else value.real,
            "im": None if value is None else value.imag,
            "log_abs": _json_num(res.log_value.log_abs),
            "arg": res.log_value.arg,
        },
        diagnostics={
            "method": res.method.value,
            "terms_used": res.terms_used,
            "tail_bound": _json_num(res.tail_bound),
            "pole_margin": res.pole_margin,
            "precision_digits": res.precision,
            "wall_time_ms": wall,
        },
    )


def _v_grid(args):
    if not args.v_step > 0:
        raise UsageError(f"--v-step must be positive, got {args.v_step!r}")
    if not args.v_from > 0:
        raise UsageError(f"--v-from must be positive, got {args.v_from!r}")
    if args.v_to < args.v_from:
        raise UsageError("--v-to must not be below --v-from")
    n = math.floor((args.v_to - args.v_from) / args.v_step + 1e-9) + 1
    return tuple(args.v_from + args.v_step * np.arange(n))


def _scan_spec(args):
    if args.single == (args.t_re is not None):
        raise UsageError("give exactly one of --single or --t-re")
    if args.t_im is not None and args.single:
        raise UsageError("--t-im only applies with --t-re")
    if not args.epsilon > 0:
        raise UsageError(f"--epsilon must be positive, got {args.epsilon!r}")
    return ScanSpec(
        q_param=_qparam(args.q),
        sigma=args.sigma,
        v_values=_v_grid(args),
        single=args.single,
        re_t=args.t_re,
        im_t=args.t_im,
        epsilon=args.epsilon,
        tol=_tolerance(args),
    )


def _scan_parameters(args):
    return {
        "q": args.q,
        "sigma": args.sigma,
        "v_from": args.v_from,
        "v_to": args.v_to,
        "v_step": args.v_step,
        "single": args.single,
        "t_re": args.t_re,
        "t_im": args.t_im,
        "epsilon": args.epsilon,
        "rel_tol": args.rel_tol,
        "max_terms": _max_terms(args),
    }


def rows_to_csv(rows):
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for r in rows:
        fields = (r.v, r.log_abs, r.arg, r.pole_margin, r.skipped, r.bound_log, r.terms_used)
        out.write(",".join(_fmt(f) for f in fields) + "\n")
    return out.getvalue()


def rows_from_csv(text):
    """Parse scan CSV (header plus rows; '#' lines ignored) back into ScanRows."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0].strip() != CSV_HEADER:
        raise UsageError(f"replay file must start with the header {CSV_HEADER!r}")
    rows = []
    for rec in csv.DictReader(lines):
        rows.append(
            ScanRow(
                v=float(rec["v"]),
                log_abs=float(rec["log_abs"]),
                arg=float(rec["arg"]),
                pole_margin=float(rec["pole_margin"]),
                skipped=rec["skipped"].strip() not in ("0", "false", "False"),
                bound_log=float(rec["bound_log"]),
                terms_used=int(rec["terms_used"]),
            )
        )
    return rows


def cmd_scan(args):
    """Returns (csv_text, envelope_trailer, exit_code)."""
    spec = _scan_spec(args)
    start = time.perf_counter()
    rows = scan_vertical(spec, n_jobs=args.jobs)
    wall = (time.perf_counter() - start) * 1e3
    trailer = _envelope(
        "scan",
        _scan_parameters(args) | {"check_bound": args.check_bound},
        diagnostics={
            "rows": len(rows),
            "skipped": sum(r.skipped and not r.failed for r in rows),
            "failed": sum(r.failed for r in rows),
            "terms_used": sum(r.terms_used for r in rows),
            "wall_time_ms": wall,
        },
    )
    code = EXIT_OK
    if args.check_bound:
        report = check_bound(rows, spec.regime)
        trailer["check_bound"] = {
            "violations": report.violations,
            "fitted_constant": report.fitted_constant,
            "max_ratio_log": report.max_ratio_log,
        }
        if report.violations > 0:
            code = EXIT_BOUND
    return rows_to_csv(rows), trailer, code


def cmd_mu(args):
    start = time.perf_counter()
    if args.replay is not None:
        try:
            with open(args.replay, encoding="utf-8") as fh:
                rows = rows_from_csv(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read replay file: {exc}") from None
        parameters = {"sigma": args.sigma, "replay": args.replay}
    else:
        missing = [f for f in ("q", "v_from", "v_to", "v_step") if getattr(args, f) is None]
        if missing:
            raise UsageError("missing flags: " + ", ".join("--" + m.replace("_", "-") for m in missing))
        rows = scan_vertical(_scan_spec(args), n_jobs=args.jobs)
        parameters = _scan_parameters(args)
    parameters["regressor"] = args.regressor
    est = fit_mu(rows, args.sigma, args.regressor)
    wall = (time.perf_counter() - start) * 1e3
    return _envelope(
        "mu",
        parameters,
        result={
            "sigma": est.sigma,
            "slope": est.slope,
            "intercept": est.intercept,
            "regressor": est.regressor,
            "residual_rms": est.residual_rms,
            "n_points": est.n_points,
            "note": "least-squares surrogate for the growth exponent",
        },
        diagnostics={"wall_time_ms": wall},
    )


def cmd_poles(args):
    q = _qparam(args.q)
    kind = LatticeKind.TWO_VARIABLE if args.kind == "t" else LatticeKind.SINGLE_VARIABLE
    try:
        points = pole_points(PoleLattice(q, kind), args.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _envelope(
        "poles",
        {"q": args.q, "kind": args.kind, "window": list(args.window)},
        poles=[{"re": z.real, "im": z.imag} for z in points],
        diagnostics={"count": len(points)},
    )


# ---------------------------------------------------------------------------
# parser


def _add_common(p):
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--max-terms", type=int, default=None,
                   help="term budget (default: $QZETA_MAX_TERMS or 10^7)")


def _add_scan_flags(p, required):
    p.add_argument("--q", type=float, required=required)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--v-from", type=float, required=required)
    p.add_argument("--v-to", type=float, required=required)
    p.add_argument("--v-step", type=float, required=required)
    p.add_argument("--single", action="store_true", help="t = s - 1")
    p.add_argument("--t-re", type=float, default=None)
    p.add_argument("--t-im", type=float, default=None,
                   help="fixed Im t (default: Im t follows v)")
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)


def build_parser():
    parser = _Parser(prog="qzeta", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate zeta_q(s, t) or zeta_q(s)")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--s-re", type=float, required=True)
    p.add_argument("--s-im", type=float, required=True)
    p.add_argument("--t-re", type=float, default=None)
    p.add_argument("--t-im", type=float, default=None)
    p.add_argument("--single", action="store_true", help="evaluate zeta_q(s) = zeta_q(s, s-1)")
    p.add_argument("--method", choices=("auto", "direct", "continuation"), default="auto")
    p.add_argument("--N", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("scan", help="sample |zeta_q| along a vertical line (CSV)")
    _add_scan_flags(p, required=True)
    p.add_argument("--check-bound", action="store_true")

    p = sub.add_parser("mu", help="least-squares growth exponent along a vertical line")
    _add_scan_flags(p, required=False)
    p.add_argument("--regressor", choices=("auto", "log_v", "linear_v"), default="auto")
    p.add_argument("--replay", default=None, help="fit rows from a scan CSV instead of scanning")

    p = sub.add_parser("poles", help="list pole-lattice points inside a window")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--kind", choices=("t", "s"), required=True)
    p.add_argument("--window", type=float, nargs=4, required=True,
                   metavar=("RE0", "RE1", "IM0", "IM1"))
    return parser


def argv_from_parameters(command, parameters):
    """Rebuild a command line from an envelope's parameter echo."""
    argv = [command]
    for key, value in parameters.items():
        if value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif isinstance(value, list):
            argv.append(flag)
            argv.extend(repr(float(x)) for x in value)
        elif isinstance(value, float):
            argv.extend([flag, repr(value)])
        else:
            argv.extend([flag, str(value)])
    return argv


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "eval":
            stdout.write(json.dumps(cmd_eval(args)) + "\n")
            return EXIT_OK
        if args.command == "scan":
            text, trailer, code = cmd_scan(args)
            stdout.write(text)
            stdout.write("# " + json.dumps(trailer) + "\n")
            return code
        if args.command == "mu":
            stdout.write(json.dumps(cmd_mu(args)) + "\n")
            return EXIT_OK
        stdout.write(json.dumps(cmd_poles(args)) + "\n")
        return EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PoleProximityError as exc:
        z = exc.nearest
        print(f"pole: {exc} (nearest pole at {z.real!r}{z.imag:+}i)", file=sys.stderr)
        return EXIT_POLE
    except BudgetExceededError as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
