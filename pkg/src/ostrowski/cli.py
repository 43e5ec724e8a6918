"""Command-line front end.

Exit status: 0 when every checked inequality holds, 1 when a violation is
found, 2 on usage or domain errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import bounds as B
from . import means, quadrature
from .errors import OstrowskiError
from .funlib import DEFAULT_TOL, Interval, mean_value, parse_function_spec
from .mconvex import (ConvexityGrid, abs_derivative_power, check_m_convex,
                      check_starshaped, in_km, max_m)
from .serialization import tidy

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

# short numeric selectors accepted alongside the descriptive names
BOUND_ALIASES = {
    "21": "mconvex", "22": "holder", "23": "power-mean",
    "c21": "holder-lipschitz", "c22": "holder-midpoint",
}
POINT_BOUNDS = (
    "mconvex", "holder", "power-mean", "holder-lipschitz", "holder-midpoint",
    "classical", "lipschitz-midpoint", "power-mean-midpoint", "convex-midpoint",
    "mconvex-midpoint", "trapezoid", "hadamard", "kernel",
)
SWEEP_BOUNDS = ("mconvex", "holder", "power-mean", "holder-lipschitz")
MEAN_ALIASES = {"prop31": "power-gap", "prop32": "log-identric"}
QUAD_ALIASES = {"prop41": "holder", "prop42": "power-mean"}


class UsageError(Exception):
    pass


def _bound_name(value: str, allowed) -> str:
    name = BOUND_ALIASES.get(value, value)
    if name not in allowed:
        raise argparse.ArgumentTypeError(
            f"unknown bound {value!r}; choose from {', '.join(allowed)} "
            f"or aliases {', '.join(BOUND_ALIASES)}")
    return name


def _common(p: argparse.ArgumentParser, interval=True):
    p.add_argument("--fn", required=True,
                   help="function: builtin:power:n=3 | builtin:neg_log1p | "
                        "builtin:exp | expr:-ln(x+1), optional :domain=lo,hi")
    if interval:
        p.add_argument("--a", type=float, required=True)
        p.add_argument("--b", type=float, required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="integration tolerance (default %(default)g)")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")


def _exponents(p: argparse.ArgumentParser):
    p.add_argument("--m", type=float, default=1.0, help="m in (0, 1] (default %(default)g)")
    p.add_argument("--p", type=float, default=None, help="Holder exponent p > 1")
    p.add_argument("--q", type=float, default=None, help="exponent q >= 1 (q = p/(p-1) if p given)")
    p.add_argument("--M", type=float, default=None, help="uniform bound on |f'|")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ostrowski",
        description="Evaluate and verify Ostrowski / Hermite-Hadamard type bounds "
                    "for functions with m-convex derivatives.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convexity", help="grid check of m-convexity / starshapedness")
    _common(p, interval=False)
    p.add_argument("--b", type=float, required=True, help="check on [0, b]")
    p.add_argument("--m", type=float, default=1.0, help="m (default %(default)g)")
    p.add_argument("--mode", choices=("mconvex", "starshaped", "km", "max-m"),
                   default="mconvex")
    p.add_argument("--of", choices=("f", "dprime"), default="f",
                   help="check f itself or |f'|^q (default %(default)s)")
    p.add_argument("--q", type=float, default=1.0, help="power for --of dprime")
    p.add_argument("--grid", type=int, default=101, help="x/y grid size (default %(default)d)")
    p.add_argument("--t-grid", type=int, default=101, help="t grid size (default %(default)d)")
    p.add_argument("--tolerance", type=float, default=None,
                   help="violation slack (default 1e-12*(1+max|g|))")
    p.add_argument("--resolution", type=float, default=0.05, help="lattice step for max-m")

    p = sub.add_parser("bound", help="evaluate one bound at one point")
    _common(p)
    _exponents(p)
    p.add_argument("--thm", required=True, type=lambda v: _bound_name(v, POINT_BOUNDS),
                   help=f"one of {', '.join(POINT_BOUNDS)} (aliases 21, 22, 23, c21, c22)")
    p.add_argument("--x", type=float, default=None, help="evaluation point (default midpoint)")
    p.add_argument("--certify", action="store_true",
                   help="grid-check the convexity hypothesis first")
    p.add_argument("--grid", type=int, default=101, help="certification grid (default %(default)d)")

    p = sub.add_parser("sweep", help="evaluate a bound on a uniform x grid")
    _common(p)
    _exponents(p)
    p.add_argument("--thm", required=True, type=lambda v: _bound_name(v, SWEEP_BOUNDS),
                   help=f"one of {', '.join(SWEEP_BOUNDS)} (aliases 21, 22, 23, c21)")
    p.add_argument("--points", type=int, default=101, help="grid points (default %(default)d)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("means", help="special means and the mean inequalities")
    p.add_argument("--kind", required=True,
                   choices=("power-gap", "log-identric", "prop31", "prop32", "A", "L", "I"))
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--p", type=float, default=1.0, help="exponent of the p-logarithmic mean")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("quad", help="composite midpoint rule and its a priori bounds")
    _common(p)
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--n", type=int, default=None, help="uniform panels")
    grid.add_argument("--nodes", default=None, help="explicit comma-separated nodes")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--bound", default="power-mean",
                   choices=("holder", "power-mean", "prop41", "prop42"))
    p.add_argument("--target", type=float, default=None,
                   help="refine uniform n = 1, 2, 4, ... until the bound <= target")
    p.add_argument("--max-panels", type=int, default=1 << 16)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


# ------------------------------------------------------------- commands

def _dump(obj) -> str:
    return json.dumps(tidy(obj), indent=2) + "\n"


def _grid(args, tolerance=None):
    return ConvexityGrid(args.grid, getattr(args, "t_grid", args.grid), tolerance)


def cmd_convexity(args):
    f = parse_function_spec(args.fn)
    g = abs_derivative_power(f, args.q) if args.of == "dprime" else f
    grid = _grid(args, args.tolerance)
    if args.mode == "starshaped":
        report = check_starshaped(g, args.b, grid)
        return _dump(report.to_dict()), report.certified
    if args.mode == "max-m":
        value = max_m(g, args.b, grid, args.resolution)
        return _dump({"maxM": value, "resolution": args.resolution}), True
    if args.mode == "km":
        member, report = in_km(g, args.b, args.m, grid)
        return _dump({"inKm": member, **report.to_dict()}), member
    report = check_m_convex(g, args.b, args.m, grid)
    return _dump(report.to_dict()), report.certified


# exponent applied to |f'| by each bound's hypothesis; None means f itself
def _hypothesis_power(name, prm):
    if name in ("mconvex", "convex-midpoint"):
        return 1.0
    if name == "hadamard":
        return None
    return prm.q if prm.q is not None else 1.0


def _certify(f, name, prm, grid_size):
    m = 1.0 if name == "convex-midpoint" else prm.m
    power = _hypothesis_power(name, prm)
    g = f if power is None else abs_derivative_power(f, power)
    return check_m_convex(g, prm.b / m, m, ConvexityGrid(grid_size, grid_size))


def cmd_bound(args):
    f = parse_function_spec(args.fn)
    iv = Interval(args.a, args.b)
    x = iv.midpoint if args.x is None else args.x
    prm = B.BoundParams(iv, x, m=args.m, p=args.p, q=args.q, M=args.M)
    name = args.thm
    out = {"bound": name, "x": prm.x}
    if args.certify and name not in ("classical", "lipschitz-midpoint",
                                     "holder-lipschitz", "kernel"):
        report = _certify(f, name, prm, args.grid)
        out["certification"] = report.to_dict()
        if not report.certified:
            return _dump(out), False

    if name == "kernel":
        residual = B.kernel_identity_residual(f, prm, args.tol)
        out.update({"residual": residual, "holds": residual <= 1e-9})
        return _dump(out), out["holds"]
    if name == "hadamard":
        avg = mean_value(f, iv, args.tol)
        rhs, branch = B.hadamard_right_bound(f, iv, prm.m)
        holds = avg <= rhs + 1e-9 * (1 + abs(rhs))
        out.update({"mean": avg, "rhs": rhs, "branch": branch, "holds": holds})
        return _dump(out), holds

    evaluators = {
        "mconvex": B.mconvex_ostrowski_bound,
        "holder": B.holder_ostrowski_bound,
        "power-mean": B.power_mean_ostrowski_bound,
        "holder-midpoint": B.holder_midpoint_bound,
        "power-mean-midpoint": B.power_mean_midpoint_bound,
        "convex-midpoint": B.convex_midpoint_bound,
        "mconvex-midpoint": B.mconvex_midpoint_bound,
        "trapezoid": B.trapezoid_bound,
    }
    if name in evaluators:
        result = evaluators[name](f, prm, args.tol)
    else:
        closed = {"classical": B.classical_ostrowski_bound,
                  "lipschitz-midpoint": B.lipschitz_midpoint_bound,
                  "holder-lipschitz": B.holder_lipschitz_bound}[name]
        if name == "lipschitz-midpoint":
            prm = B.BoundParams.midpoint(iv, m=prm.m, p=prm.p, q=prm.q, M=prm.M)
            out["x"] = prm.x
        result = B.BoundResult(B.ostrowski_lhs(f, prm, args.tol), closed(prm))
    out.update(result.to_dict())
    return _dump(out), result.holds


def cmd_sweep(args):
    f = parse_function_spec(args.fn)
    iv = Interval(args.a, args.b)
    report = B.verify_sweep(f, iv, args.m, args.thm.replace("-", "_"),
                            p=args.p, q=args.q, M=args.M,
                            points=args.points, tol=args.tol)
    if report.failures:
        first = next(r for r in report.rows if r.result is None)
        raise UsageError(f"{report.failures} point(s) failed, first at x={first.x}: {first.error}")
    summary = report.summary()
    if args.format == "csv":
        sys.stderr.write(json.dumps(tidy(summary)) + "\n")
        body = report.to_csv()
    else:
        rows = [{"x": r.x, **r.result.to_dict()} for r in report.rows]
        body = _dump({**summary, "rows": rows})
    return body, report.violations == 0


def cmd_means(args):
    kind = MEAN_ALIASES.get(args.kind, args.kind)
    if kind == "power-gap":
        result = means.power_gap_check(args.a, args.b, args.n, args.m)
    elif kind == "log-identric":
        result = means.log_identric_gap_check(args.a, args.b, args.m, args.q)
    else:
        value = {"A": lambda: means.arithmetic_mean(args.a, args.b),
                 "L": lambda: means.p_logarithmic_mean(args.a, args.b, args.p),
                 "I": lambda: means.identric_mean(args.a, args.b)}[kind]()
        return _dump({"mean": kind, "value": value}), True
    return _dump(result.to_dict()), result.holds


def cmd_quad(args):
    f = parse_function_spec(args.fn)
    iv = Interval(args.a, args.b)
    which = QUAD_ALIASES.get(args.bound, args.bound).replace("-", "_")
    if args.target is not None:
        d, report = quadrature.refine_to_bound(f, iv, args.q, args.target, which,
                                               args.max_panels, args.tol)
    else:
        if args.nodes is not None:
            d = quadrature.Partition(tuple(float(v) for v in args.nodes.split(",")))
            if (d.nodes[0], d.nodes[-1]) != (iv.a, iv.b):
                raise UsageError("--nodes must start at --a and end at --b")
        else:
            d = quadrature.Partition.uniform(iv, args.n or 1)
        report = quadrature.quadrature_report(f, d, args.q, which, args.tol)
    if args.format == "csv":
        sys.stderr.write(json.dumps(tidy(report.to_dict())) + "\n")
        return quadrature.panel_csv(f, d, args.q, which), report.holds
    return _dump(report.to_dict()), report.holds


COMMANDS = {"convexity": cmd_convexity, "bound": cmd_bound, "sweep": cmd_sweep,
            "means": cmd_means, "quad": cmd_quad}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        body, ok = COMMANDS[args.command](args)
    except (OstrowskiError, ValueError, UsageError) as exc:
        sys.stderr.write(f"ostrowski {args.command}: error: {exc}\n")
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return EXIT_OK if ok else EXIT_VIOLATION


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
