"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import re
import sys
from pathlib import Path

import numpy as np

from .characteristic import horizon_diagnostics, integrate_characteristic
from .errors import InvalidMesh, NumericalFailure, ProblemError
from .harness import default_threads, epsilon_sweep, render_table
from .postprocess import export_csv, write_csv
from .problem import get_example, validate
from .solver import prepare, solve

log = logging.getLogger("layertrack")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_eps(text: str) -> float:
    """Accept '2^-k', '2**-k' or a decimal."""
    m = re.fullmatch(r"\s*2\s*(?:\^|\*\*)\s*(-?\d+)\s*", text)
    if m:
        return 2.0 ** int(m.group(1))
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse epsilon {text!r}") from None
    if not value > 0.0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return value


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def parse_powers(text: str) -> list[int]:
    """'0:26' (inclusive) or '0,4,8'."""
    if ":" in text:
        lo, _, hi = text.partition(":")
        try:
            a, b = int(lo), int(hi)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
        step = 1 if b >= a else -1
        return list(range(a, b + step, step))
    return parse_int_list(text)


def _check_N(N: int):
    if N < 8 or N % 8:
        raise UsageError("N must be divisible by 8")


def _problem(args):
    p = get_example(args.example)
    if getattr(args, "T", None) is not None:
        p = dataclasses.replace(p, T=args.T)
    return p


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w")


def cmd_solve(args) -> int:
    _check_N(args.N)
    if args.M < 1:
        raise UsageError("M must be at least 1")
    p = _problem(args)
    sol = solve(p, args.eps, args.N, args.M)
    export_csv(sol, "physical" if args.physical else "transformed", args.out)
    log.info("wrote %s (eps=%g, N=%d, M=%d)", args.out, args.eps, args.N, args.M)
    return EXIT_OK


def cmd_converge(args) -> int:
    if args.no_transform:
        raise UsageError("--no-transform is reserved; the untransformed scheme is not implemented")
    for N in args.N:
        _check_N(N)
    p = _problem(args)
    threads = args.threads if args.threads is not None else default_threads()
    report = epsilon_sweep(p, args.N, args.eps_powers, threads=threads, progress=log.info)
    fmt = args.format or ("csv" if args.out and args.out.endswith(".csv") else "aligned-text")
    text = render_table(report, fmt)
    if args.out and args.out != "-":
        Path(args.out).write_text(text)
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)
    for (k, N), msg in report.failures.items():
        log.warning("eps=2^-%d N=%d failed: %s", k, N, msg)
    return EXIT_OK


def cmd_characteristic(args) -> int:
    p = _problem(args)
    curve = integrate_characteristic(p, tol=args.tol)
    t = np.linspace(0.0, p.T, args.samples)
    d = np.asarray(curve(t))
    rows = np.column_stack([t, d, p.a(d, t)])
    diag = horizon_diagnostics(curve, p)
    meta = {"problem": p.name, "d_T": "%.17g" % curve.d_final, "delta": "%.17g" % diag.delta}
    if args.out in (None, "-"):
        sys.stdout.write("".join(f"# {k}={v}\n" for k, v in meta.items()) + "t,d,dd\n")
        np.savetxt(sys.stdout, rows, fmt="%.17g", delimiter=",")
    else:
        write_csv(args.out, meta, ["t", "d", "dd"], rows)
    return EXIT_OK


def cmd_mesh(args) -> int:
    _check_N(args.N)
    p = _problem(args)
    disc = prepare(p, args.eps, args.N, max(args.M, 1))
    m = disc.space
    meta = {
        "problem": p.name,
        "epsilon": "%.17g" % args.eps,
        "N": m.N,
        "sigma1": "%.17g" % m.sigma1,
        "sigma2": "%.17g" % m.sigma2,
        "sigma": "%.17g" % m.sigma,
    }
    rows = np.column_stack([np.arange(m.N + 1), m.nodes])
    if args.out in (None, "-"):
        sys.stdout.write("".join(f"# {k}={v}\n" for k, v in meta.items()) + "i,x\n")
        for i, x in zip(range(m.N + 1), m.nodes):
            sys.stdout.write(f"{i},{x:.17g}\n")
    else:
        write_csv(args.out, meta, ["i", "x"], rows)
    return EXIT_OK


def cmd_validate(args) -> int:
    p = _problem(args)
    rep = validate(p, args.grid)
    curve = integrate_characteristic(p)
    diag = horizon_diagnostics(curve, p)
    out = sys.stdout
    for f in dataclasses.fields(rep):
        out.write(f"{f.name}: {getattr(rep, f.name)}\n")
    out.write(f"d_T: {curve.d_final:.12g}\n")
    for f in dataclasses.fields(diag):
        out.write(f"{f.name}: {getattr(diag, f.name)}\n")
    for w in rep.warnings:
        log.warning(w)
    if not diag.gamma_condition_ok:
        log.warning("final-time restriction 2T/delta*|a_s| < 1 does not hold (%.4g)", diag.gamma_condition_lhs)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="layertrack", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, eps=True):
        sp.add_argument("--example", type=int, choices=(1, 2), required=True)
        sp.add_argument("--T", type=float, default=None, help="override the final time")
        if eps:
            sp.add_argument("--eps", type=parse_eps, default=2.0**-12)

    sp = sub.add_parser("solve", help="solve one case and write CSV")
    common(sp)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--physical", action="store_true", help="write u on a uniform s-grid")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("converge", help="two-mesh convergence table")
    common(sp, eps=False)
    sp.add_argument("--N", type=parse_int_list, default=[32, 64, 128, 256])
    sp.add_argument("--eps-powers", type=parse_powers, default=list(range(27)))
    sp.add_argument("--M-equals-N", action="store_true", default=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "aligned-text"), default=None)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--no-transform", action="store_true", help="reserved")
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("characteristic", help="sample the layer path")
    common(sp, eps=False)
    sp.add_argument("--samples", type=int, default=101)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_characteristic)

    sp = sub.add_parser("mesh", help="dump the space mesh")
    common(sp)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--M", type=int, default=1)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_mesh)

    sp = sub.add_parser("validate", help="check problem assumptions")
    common(sp, eps=False)
    sp.add_argument("--grid", type=int, default=101)
    sp.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s", stream=sys.stderr)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidMesh, ProblemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
