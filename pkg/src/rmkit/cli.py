"""``rmkit`` command line."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .contfrac import bratteli_data, cf_expand, convergents, gl2_equivalent, stabilizer_matrix
from .errors import RMKitError
from .functor import functor_on_class
from .lattices import IMAGINARY, REAL, endomorphism_order, order_omega
from .matrix import Matrix2Z
from .modgroup import K_MAX_DEFAULT, fixed_points
from .quadnum import parse_quadratic
from .report import (
    TARGETS,
    GridSpec,
    exit_code,
    parse_grid,
    read_json,
    recheck_report,
    run_verification,
    write_csv,
    write_json,
)


def _emit(args, text: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_omega(args) -> int:
    w = order_omega(args.D, IMAGINARY if args.imaginary else REAL)
    _emit(args, str(w), {"D": args.D, "omega": str(w)})
    return 0


def cmd_cf(args) -> int:
    x = parse_quadratic(args.theta)
    cf = cf_expand(x)
    payload = {"theta": str(x), "preperiod": list(cf.preperiod), "period": list(cf.period), "text": str(cf)}
    lines = [str(cf)]
    if args.convergents:
        conv = convergents(cf, args.convergents)
        payload["convergents"] = [str(c) for c in conv]
        lines.append("convergents: " + ", ".join(str(c) for c in conv))
    if args.bratteli:
        mats = bratteli_data(cf, args.bratteli)
        payload["bratteli"] = [m.to_list() for m in mats]
        lines.append("bratteli: " + " ".join(str(m) for m in mats))
    _emit(args, "\n".join(lines), payload)
    return 0


def cmd_order(args) -> int:
    x = parse_quadratic(args.theta)
    order = endomorphism_order(x)
    _emit(args, f"D={order.D} f={order.f} {order.sign}", order.to_dict())
    return 0


def cmd_stabilizer(args) -> int:
    m = stabilizer_matrix(parse_quadratic(args.theta))
    _emit(args, ",".join(map(str, m)), m.to_list())
    return 0


def cmd_fixed_points(args) -> int:
    x, xbar = fixed_points(Matrix2Z.parse(args.matrix))
    _emit(args, f"{x}, {xbar}", [str(x), str(xbar)])
    return 0


def cmd_equivalent(args) -> int:
    x, y = parse_quadratic(args.x), parse_quadratic(args.y)
    eq = gl2_equivalent(x, y)
    payload = {"equivalent": eq.equivalent,
               "witness": None if eq.witness is None else eq.witness.to_list(),
               "determinant": eq.determinant}
    text = "true" if eq.equivalent else "false"
    if eq.witness is not None:
        text += f" witness {','.join(map(str, eq.witness))} det {eq.determinant}"
    _emit(args, text, payload)
    return 0


def cmd_functor(args) -> int:
    rep = functor_on_class(args.D, args.f, args.bound)
    d = rep.to_dict()
    lines = [
        f"input   (-{args.D}, {args.f}) imaginary, case {rep.case}",
        f"minimum norm {rep.minimum_norm} (f^2 D = {args.f ** 2 * args.D}) at {list(rep.minimizers)}",
        f"endomorphism {d['endo_matrix']} -> {d['mapped_matrix']}",
        f"claimed {rep.claimed}  recovered {rep.recovered} via {rep.recovered_generator}  agreement {rep.agreement}",
    ]
    _emit(args, "\n".join(lines), d)
    return 0


def cmd_verify(args) -> int:
    grid = GridSpec(
        D_max=args.D_max, f_max=args.f_max, k_max=args.k_max, bound=args.bound,
        N_max=args.N_max, points=parse_grid(args.grid) if args.grid else None,
    )
    report = run_verification(args.target, grid, args.jobs)
    try:
        if args.out:
            write_json(report, args.out)
        if args.csv:
            write_csv(read_json(args.out) if args.out else report, args.csv)
        if args.figures:
            from .plotting import render_figures

            render_figures(report, args.figures)
    except OSError as exc:
        print(f"rmkit: error: cannot write report: {exc}", file=sys.stderr)
        return 2

    code = exit_code(report)
    if args.recheck:
        reparsed = read_json(args.out) if args.out else json.loads(json.dumps(report))
        problems = recheck_report(reparsed)
        for msg in problems:
            print(f"recheck: {msg}", file=sys.stderr)
        if problems:
            code = 1
    s = report["summary"]
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"{args.target}: {s['points']} points, {s['asserted_pass']} pass, {s['asserted_fail']} fail, "
              f"{s['discrepancy_flagged']} discrepancy-flagged, {s['recorded']} recorded")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"rmkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="print JSON instead of text")
        p.set_defaults(func=func)
        return p

    p = command("omega", cmd_omega, "generator omega of the maximal order")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--imaginary", action="store_true")

    p = command("cf", cmd_cf, "periodic continued fraction")
    p.add_argument("--theta", required=True)
    p.add_argument("--convergents", type=int, default=0, metavar="K")
    p.add_argument("--bratteli", type=int, default=0, metavar="N")

    p = command("order", cmd_order, "endomorphism order (D, f) of Z + Z*theta")
    p.add_argument("--theta", required=True)

    p = command("stabilizer", cmd_stabilizer, "hyperbolic SL2(Z) matrix fixing theta")
    p.add_argument("--theta", required=True)

    p = command("fixed-points", cmd_fixed_points, "fixed points of a hyperbolic matrix")
    p.add_argument("--matrix", required=True, metavar="a,b,c,d")

    p = command("equivalent", cmd_equivalent, "unimodular equivalence with a witness M, M(y) = x")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    p = command("functor", cmd_functor, "carry the CM class (-D, f) through the functor")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--f", type=int, default=1)
    p.add_argument("--bound", type=int, default=None)

    p = command("verify", cmd_verify, "grid verification with JSON/CSV reports and figures")
    p.add_argument("target", choices=TARGETS)
    p.add_argument("--D-max", dest="D_max", type=int, default=30)
    p.add_argument("--f-max", dest="f_max", type=int, default=3)
    p.add_argument("--k-max", dest="k_max", type=int, default=K_MAX_DEFAULT)
    p.add_argument("--N-max", dest="N_max", type=int, default=15)
    p.add_argument("--bound", type=int, default=None, help="norm search bound")
    p.add_argument("--grid", default=None, help='explicit points, e.g. "(2,1),(5,1)"')
    p.add_argument("--out", type=Path, default=None, help="JSON report path")
    p.add_argument("--csv", type=Path, default=None, help="CSV export derived from the JSON report")
    p.add_argument("--figures", type=Path, default=None, help="directory for PNG figures")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (RMKIT_JOBS overrides)")
    p.add_argument("--recheck", action="store_true", help="re-verify the written report")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RMKitError, ValueError, ArithmeticError) as exc:
        print(f"rmkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
