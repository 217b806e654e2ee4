"""Command-line front door.

Thin wrappers over the library: each subcommand resolves its flags into a
config object, runs one library call, and writes JSON (default) or CSV
with the resolved config echoed under a "config" key.  Usage errors exit
with code 64; verification exit codes (0 pass, 2 inequality failure,
3 sharpness failure, 4 all-inconclusive) are passed through.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .errors import BohrKitError
from .harmonic import construct_pair, harmonic_bohr_sum, unit_from_turns
from .radius import Equation, RadiusProblem, closed_form_or_none, solve_radius
from .series import (
    bohr_sum,
    bprime_extremal,
    disk_automorphism,
    expand_extremal,
    half_plane,
    koebe,
    schur_sample,
    schwarz_sample,
)
from .subordination import subordinate_to_model, subordination_bohr_sum
from .verify import SCHEMA, Experiment, run_inequality, run_sharpness
from .weights import from_config as weights_from_config

USAGE_ERROR = 64

EQUATION_MAP = """\
equation mapping (flag value -> radius equation):
  thma  phi0(x) = (2/p) * Phi1(x)
  thm1  phi0(x) = (1/p) * Phi1(x)
  thm2  p = (1+k) * Phi1(x)
  thm3  1 = 4 * Psi1(x)
  thm4  1 = 2 * Phi1(x)
  thm5  1 = 2 * (1+k) * Phi1(x)
"""


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def default_tol() -> float:
    return float(os.environ.get("BOHR_DEFAULT_TOL", "1e-12"))


def _add_common(sub, *, equation=False, theorem=False, pk=True):
    if equation:
        sub.add_argument("--equation", required=True, choices=[e.value for e in Equation])
    if theorem:
        sub.add_argument("--theorem", required=True, choices=[e.value for e in Equation])
    sub.add_argument("--weights", default="power", choices=["power"],
                     help="built-in weight family (use --weights-config for others)")
    sub.add_argument("--weights-config", metavar="FILE",
                     help="JSON file with a weight sequence config object")
    if pk:
        sub.add_argument("--p", type=_float_or_range, default=None,
                         help="exponent; sweep accepts lo:hi:step")
        group = sub.add_mutually_exclusive_group()
        group.add_argument("--k", type=_float_or_range, default=None,
                           help="dilatation bound in [0,1]; sweep accepts lo:hi:step")
        group.add_argument("--K", type=float, default=None, dest="K_big",
                           help="alternative parametrization, k = (K-1)/(K+1)")
    sub.add_argument("--tol", type=float, default=None,
                     help="root/certification tolerance (default 1e-12 or $BOHR_DEFAULT_TOL)")
    sub.add_argument("--out", choices=["json", "csv"], default=None,
                     help="output format (default json; sweep defaults to csv)")
    sub.add_argument("--output", metavar="FILE", help="write to FILE instead of stdout")


def _float_or_range(text: str):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be lo:hi:step, got {text!r}")
        lo, hi, step = (float(x) for x in parts)
        if step <= 0 or hi < lo:
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        return ("range", lo, hi, step)
    return float(text)


_float_or_range.__name__ = "number-or-range"


def build_parser() -> _Parser:
    parser = _Parser(prog="bohr", description="weighted Bohr radius toolkit",
                     epilog=EQUATION_MAP,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"bohr {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sp = subs.add_parser("radius", help="locate the minimal positive root R",
                         epilog=EQUATION_MAP,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_common(sp, equation=True)

    sp = subs.add_parser("sum", help="weighted coefficient sum of one series",
                         epilog=EQUATION_MAP,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("--family", required=True,
                    choices=["bprime", "koebe", "half-plane", "automorphism", "schur"])
    sp.add_argument("--a", type=float, default=0.0, help="family parameter in [0,1)")
    sp.add_argument("--seed", type=int, default=0, help="seed for --family schur")
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--order", type=int, default=64)
    sp.add_argument("--weights", default="power", choices=["power"])
    sp.add_argument("--weights-config", metavar="FILE")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--out", choices=["json", "csv"], default=None)
    sp.add_argument("--output", metavar="FILE")

    sp = subs.add_parser("harmonic-sum",
                         help="|a0|^p + sum |a_n| phi_n + sum |b_n| phi_n for a constructed pair",
                         epilog=EQUATION_MAP,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--k", type=float, default=None)
    sp.add_argument("--K", type=float, default=None, dest="K_big")
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--lambda-turns", type=float, default=0.0, dest="lambda_turns",
                    help="unimodular factor as an angle in turns")
    sp.add_argument("--order", type=int, default=64)
    sp.add_argument("--weights", default="power", choices=["power"])
    sp.add_argument("--weights-config", metavar="FILE")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--out", choices=["json", "csv"], default=None)
    sp.add_argument("--output", metavar="FILE")

    sp = subs.add_parser("subord-sum", help="sum |b_n| phi_n for a composed subordinate",
                         epilog=EQUATION_MAP,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("--model", required=True, choices=["koebe", "half-plane"])
    sp.add_argument("--omega", default="id",
                    help="'id' or 'seed:N' for a random Schwarz function")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--order", type=int, default=64)
    sp.add_argument("--weights", default="power", choices=["power"])
    sp.add_argument("--weights-config", metavar="FILE")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--out", choices=["json", "csv"], default=None)
    sp.add_argument("--output", metavar="FILE")

    for name, helptext in (("verify", "inequality sweep below R"),
                           ("sharpness", "extremal scan above R")):
        sp = subs.add_parser(name, help=helptext, epilog=EQUATION_MAP,
                             formatter_class=argparse.RawDescriptionHelpFormatter)
        _add_common(sp, theorem=True)
        sp.add_argument("--samples", type=int, default=1000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--order", type=int, default=64)
        sp.add_argument("--grid", type=int, default=50, help="points in [0, R]")
        sp.add_argument("--csv", metavar="FILE", help="also write the margin table as CSV")

    sp = subs.add_parser("sweep", help="R over a swept parameter (CSV by default)",
                         epilog=EQUATION_MAP,
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_common(sp, equation=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    tol = args.tol if getattr(args, "tol", None) is not None else default_tol()
    try:
        handler = _HANDLERS[args.subcommand]
        return handler(parser, args, tol)
    except BohrKitError as exc:
        print(f"bohr: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


# -- handlers ------------------------------------------------------------


def _resolve_k(parser, args):
    k = getattr(args, "k", None)
    K = getattr(args, "K_big", None)
    if K is not None:
        if K < 1.0:
            parser.error(f"argument --K: must be >= 1, got {K}")
        return (K - 1.0) / (K + 1.0)
    return k


def _resolve_weights(args):
    path = getattr(args, "weights_config", None)
    if path:
        with open(path) as fh:
            return json.load(fh)
    return {"kind": "power"}


def _emit(args, payload, default_format="json", csv_rows=None, csv_header=None):
    fmt = args.out or default_format
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _no_range(parser, flag, value):
    if isinstance(value, tuple):
        parser.error(f"argument {flag}: ranges are only valid for the sweep subcommand")
    return value


def _cmd_radius(parser, args, tol):
    k = _no_range(parser, "--k", _resolve_k(parser, args))
    p = _no_range(parser, "--p", args.p)
    wcfg = _resolve_weights(args)
    prob = RadiusProblem(Equation(args.equation), weights_from_config(wcfg),
                         p=p, k=k)
    located = solve_radius(prob, tol)
    payload = {
        "schema": SCHEMA,
        "config": {"subcommand": "radius", "equation": args.equation,
                   "weights": wcfg, "p": p, "k": k, "tol": tol},
        "R": located.R,
        "bracket": list(located.bracket),
        "residual": located.residual,
        "closed_form": closed_form_or_none(prob),
        "certificate": located.certificate,
    }
    _emit(args, payload,
          csv_rows=[[located.R, located.bracket[0], located.bracket[1], located.residual]],
          csv_header=["R", "bracket_lo", "bracket_hi", "residual"])
    return 0


def _cmd_sweep(parser, args, tol):
    k = _resolve_k(parser, args)
    p = args.p
    ranges = [name for name, val in (("p", p), ("k", k)) if isinstance(val, tuple)]
    if len(ranges) != 1:
        parser.error("argument --p/--k: sweep needs exactly one lo:hi:step range")
    swept_name = ranges[0]
    values = _range_values(p if swept_name == "p" else k)
    wcfg = _resolve_weights(args)
    eq = Equation(args.equation)
    rows = []
    for v in values:
        prob = RadiusProblem(eq, weights_from_config(wcfg),
                             p=v if swept_name == "p" else p,
                             k=v if swept_name == "k" else k)
        located = solve_radius(prob, tol)
        rows.append([v, located.R, closed_form_or_none(prob)])
    payload = {
        "schema": SCHEMA,
        "config": {"subcommand": "sweep", "equation": args.equation, "weights": wcfg,
                   "p": None if swept_name == "p" else p,
                   "k": None if swept_name == "k" else k, "swept": swept_name,
                   "values": [float(v) for v in values], "tol": tol},
        "rows": [{swept_name: row[0], "R": row[1], "closed_form": row[2]} for row in rows],
    }
    _emit(args, payload, default_format="csv",
          csv_rows=rows, csv_header=[swept_name, "R", "closed_form"])
    return 0


def _range_values(spec):
    _tag, lo, hi, step = spec
    values = []
    v = lo
    while v <= hi + 1e-12:
        values.append(round(v, 12))
        v += step
    return values


_FAMILIES = {
    "bprime": lambda args: expand_extremal(bprime_extremal(args.a), args.order),
    "koebe": lambda args: expand_extremal(koebe(), args.order),
    "half-plane": lambda args: expand_extremal(half_plane(), args.order),
    "automorphism": lambda args: expand_extremal(disk_automorphism(args.a), args.order),
    "schur": lambda args: schur_sample(order=args.order, seed=args.seed),
}


def _cmd_sum(parser, args, tol):
    w = weights_from_config(_resolve_weights(args))
    s = _FAMILIES[args.family](args)
    res = bohr_sum(s, w, args.p, args.r, tol)
    payload = {
        "schema": SCHEMA,
        "config": {"subcommand": "sum", "family": args.family, "a": args.a,
                   "seed": args.seed, "p": args.p, "r": args.r,
                   "order": args.order, "tol": tol},
        "value": res.value,
        "error": res.error,
        "certified": res.certified,
    }
    _emit(args, payload,
          csv_rows=[[res.value, res.error, res.certified]],
          csv_header=["value", "error", "certified"])
    return 0


def _cmd_harmonic_sum(parser, args, tol):
    k = _resolve_k(parser, args)
    if k is None:
        parser.error("argument --k: one of --k or --K is required")
    w = weights_from_config(_resolve_weights(args))
    h = expand_extremal(bprime_extremal(args.a), args.order)
    pair = construct_pair(h, k, unit_from_turns(args.lambda_turns))
    res = harmonic_bohr_sum(pair, w, args.p, args.r, tol=tol)
    payload = {
        "schema": SCHEMA,
        "config": {"subcommand": "harmonic-sum", "a": args.a, "k": k,
                   "p": args.p, "r": args.r, "lambda_turns": args.lambda_turns,
                   "order": args.order, "tol": tol},
        "value": res.value,
        "error": res.error,
        "certified": res.certified,
    }
    _emit(args, payload,
          csv_rows=[[res.value, res.error, res.certified]],
          csv_header=["value", "error", "certified"])
    return 0


def _cmd_subord_sum(parser, args, tol):
    w = weights_from_config(_resolve_weights(args))
    model = args.model.replace("-", "_")
    if args.omega == "id":
        g = expand_extremal(koebe() if model == "koebe" else half_plane(), args.order)
    elif args.omega.startswith("seed:"):
        omega = schwarz_sample(args.order, int(args.omega.split(":", 1)[1]))
        g = subordinate_to_model(model, omega)
    else:
        parser.error(f"argument --omega: expected 'id' or 'seed:N', got {args.omega!r}")
    res = subordination_bohr_sum(g, w, args.r, tol)
    payload = {
        "schema": SCHEMA,
        "config": {"subcommand": "subord-sum", "model": args.model,
                   "omega": args.omega, "r": args.r, "order": args.order, "tol": tol},
        "value": res.value,
        "error": res.error,
        "certified": res.certified,
    }
    _emit(args, payload,
          csv_rows=[[res.value, res.error, res.certified]],
          csv_header=["value", "error", "certified"])
    return 0


def _experiment_from_args(parser, args):
    k = _no_range(parser, "--k", _resolve_k(parser, args))
    p = _no_range(parser, "--p", args.p)
    return Experiment(
        theorem=Equation(args.theorem),
        p=p,
        k=k,
        weights_config=_resolve_weights(args),
        count=args.samples,
        seed=args.seed,
        order=args.order,
        grid_below=args.grid,
    )


def _cmd_verify(parser, args, tol):
    report = run_inequality(_experiment_from_args(parser, args))
    _write_report(args, report)
    return report.exit_code


def _cmd_sharpness(parser, args, tol):
    report = run_sharpness(_experiment_from_args(parser, args))
    _write_report(args, report)
    return report.exit_code


def _write_report(args, report):
    if (args.out or "json") == "csv":
        text = report.csv_text()
    else:
        text = report.to_json_bytes().decode() + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "csv", None):
        with open(args.csv, "w") as fh:
            fh.write(report.csv_text())


_HANDLERS = {
    "radius": _cmd_radius,
    "sum": _cmd_sum,
    "harmonic-sum": _cmd_harmonic_sum,
    "subord-sum": _cmd_subord_sum,
    "verify": _cmd_verify,
    "sharpness": _cmd_sharpness,
    "sweep": _cmd_sweep,
}


if __name__ == "__main__":
    entry()
