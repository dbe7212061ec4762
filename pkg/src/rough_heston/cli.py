"""Command-line interface: classify, sweep, critical, vie and bounds.

All commands read model parameters from a JSON file ("--params", falling back
to the ROUGH_HESTON_PARAMS environment variable, then to the built-in default
set).  Scalar results are printed as JSON with sorted keys; sweeps and
solution paths as CSV.  Identical invocations produce byte-identical output.

Exit codes: 0 ok, 2 input error, 3 domain/range error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import bounds, classical, critical, series, vie
from .model import (
    CaseError,
    ModelParams,
    MomentCase,
    classify,
    default_params,
    riccati_coeffs,
)

ENV_PARAMS = "ROUGH_HESTON_PARAMS"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4


class _InputError(Exception):
    pass


def _load_params(path: str | None) -> ModelParams:
    if path is None:
        path = os.environ.get(ENV_PARAMS)
    if path is None:
        return default_params()
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise _InputError(f"cannot read parameter file {path}: {exc}") from exc
    try:
        return ModelParams.from_json(text)
    except (ValueError, TypeError) as exc:
        raise _InputError(f"invalid parameter file {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _format_record(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, sort_keys=True) + "\n"
    lines = ["key,value"]
    for key in sorted(record):
        lines.append(f"{key},{record[key]}")
    return "\n".join(lines) + "\n"


def _float_str(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return repr(float(x))


def _cmd_classify(args) -> int:
    params = _load_params(args.params)
    rc = riccati_coeffs(params, args.u)
    record = {
        "u": args.u,
        "case": classify(params, args.u).value,
        "e0": rc.e0,
        "e1": rc.e1,
        "c1": rc.c1,
    }
    _emit(_format_record(record, args.format or "json"), args.out)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    params = _load_params(args.params)
    lo, hi = bounds.sandwich(params, args.u)
    record = {
        "u": args.u,
        "case": classify(params, args.u).value,
        "lower_bound": lo,
        "upper_bound": hi,
    }
    _emit(_format_record(record, args.format or "json"), args.out)
    return EXIT_OK


_SWEEP_HEADER = "u,case,explosion_time,method,lower_bound,upper_bound,classical"


def _sweep_row(task) -> tuple:
    params, u, n_max = task
    case = classify(params, u)
    if case is MomentCase.A:
        res = series.explosion_time(params, u, n_max=n_max)
        value, method = res.value, res.method
    elif case is MomentCase.B:
        res = series.explosion_lower_bound(params, u, n_max=max(n_max, 200))
        value, method = res.value, res.method
    else:
        value, method = math.inf, "none"
    if case in (MomentCase.A, MomentCase.B):
        lo, hi = bounds.sandwich(params, u)
    else:
        lo = hi = math.inf
    t1 = classical.explosion_time(params, u)
    return (u, case.value, value, method, lo, hi, t1)


def _cmd_sweep(args) -> int:
    params = _load_params(args.params)
    if args.n_points < 0:
        raise _InputError(f"--n-points must be >= 0, got {args.n_points}")
    grid = np.linspace(args.u_from, args.u_to, args.n_points)
    tasks = [(params, float(u), args.n_max) for u in grid]
    if args.jobs > 1 and tasks:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    lines = [_SWEEP_HEADER]
    for u, case, value, method, lo, hi, t1 in rows:
        lines.append(
            f"{u!r},{case},{_float_str(value)},{method},"
            f"{_float_str(lo)},{_float_str(hi)},{_float_str(t1)}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_critical(args) -> int:
    params = _load_params(args.params)
    try:
        if args.side == "lower":
            res = critical.lower_critical_moment(params, args.T, n_max=args.n_max)
            record = {
                "T": args.T,
                "u_minus": res.u_critical,
                "residual": res.residual,
                "lee_slope": critical.lee_left_wing_slope(
                    params, args.T, n_max=args.n_max
                ),
                "left_tail_exponent": -res.u_critical - 1.0,
            }
        else:
            res = critical.upper_critical_moment(params, args.T, n_max=args.n_max)
            record = {
                "T": args.T,
                "u_plus": res.u_critical,
                "residual": res.residual,
                "right_tail_exponent": -res.u_critical - 1.0,
            }
    except critical.MaturityRangeError as exc:
        sys.stderr.write(
            f"error: {exc}\nvalid maturity range: (0, {exc.boundary_time!r}]\n"
        )
        return EXIT_DOMAIN
    _emit(_format_record(record, args.format or "json"), args.out)
    return EXIT_OK


def _cmd_vie(args) -> int:
    params = _load_params(args.params)
    u = complex(args.u_re, args.u_im) if args.u_im != 0.0 else args.u_re
    sol = vie.solve_vie(params, u, args.t_end, args.steps)
    mgf_vals = vie.mgf_on_grid(params, sol)
    lines = ["t,re_f,im_f,re_mgf,im_mgf"]
    for t, f, m in zip(sol.grid, sol.values, mgf_vals):
        lines.append(
            f"{float(t)!r},{float(f.real)!r},{float(f.imag)!r},"
            f"{float(m.real)!r},{float(m.imag)!r}"
        )
    if sol.blew_up:
        lines.append(f"blowup_time,{float(sol.blowup_time)!r},,,")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rough-heston",
        description="Moment explosion times, bounds and critical moments "
        "for the rough Heston model.",
    )
    parser.add_argument(
        "--params",
        metavar="FILE",
        help=f"parameter JSON file (default: ${ENV_PARAMS} or built-in set)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="case A/B/C/D of a moment u")
    p.add_argument("-u", "--u", type=float, required=True)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--format", choices=("json", "csv"))
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("bounds", help="explicit explosion-time bounds at u")
    p.add_argument("-u", "--u", type=float, required=True)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--format", choices=("json", "csv"))
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser(
        "sweep", help="explosion time, bounds and classical reference over a u-grid"
    )
    p.add_argument("--u-from", type=float, required=True)
    p.add_argument("--u-to", type=float, required=True)
    p.add_argument("--n-points", type=int, required=True)
    p.add_argument("--n-max", type=int, default=100, help="series truncation order")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("critical", help="critical moment, Lee slope, tail exponent")
    p.add_argument("-T", "--maturity", dest="T", type=float, required=True)
    p.add_argument("--side", choices=("lower", "upper"), default="lower")
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--format", choices=("json", "csv"))
    p.set_defaults(func=_cmd_critical)

    p = sub.add_parser("vie", help="solve the Volterra equation and export f and mgf")
    p.add_argument("--u-re", type=float, required=True)
    p.add_argument("--u-im", type=float, default=0.0)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--steps", type=int, default=1024)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=_cmd_vie)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (CaseError, critical.CorrelationSignError, critical.MaturityRangeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except (
        vie.CorrectorError,
        vie.ExplosionError,
        bounds.BoundsConsistencyError,
        OverflowError,
    ) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
