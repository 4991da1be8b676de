"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 domain error (the message names the degeneracy, e.g. VerticalCError).
Data goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import sys

from .catalog import SAMPLERS, demo_state, run_sweep
from .config import InvarianceConfig, default_tolerance
from .deprit import eliminate_nodes
from .dynamics import integrate, invariance_demo
from .errors import CollisionError, DarbouxError, DomainError
from .kepler import solve_kepler
from .statefile import KINDS, Representation, StateFileError, convert, fmt, format_state
from .statefile import format_trajectory, read_state

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path, kind=None) -> Representation:
    try:
        rep = read_state(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if kind is not None and rep.kind != kind:
        raise UsageError(f"{path} holds a {rep.kind} state, not {kind}")
    return rep


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_convert(args) -> int:
    rep = convert(_load(args.infile, args.source), args.target)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(format_state(rep), args.outfile)
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = default_tolerance() if args.tol is None else args.tol
    result = run_sweep(args.chart, args.points, args.seed, tol, workers=args.workers, scheme=args.scheme)
    has_d = bool(result.d_values)
    print("point defect pass" + (" D" if has_d else ""))
    for k, r in enumerate(result.reports):
        row = f"{k} {r.max_defect:.3e} {int(r.passed)}"
        print(row + (f" {result.d_values[k]:.9f}" if has_d else ""))
    d_ok = True
    for d in sorted(set(round(d, 6) for d in result.d_values)):
        print(f"D={d:.6f}")
    if has_d:
        d_ok = all(abs(d - 1.0) < tol for d in result.d_values)
    ok = result.passed and d_ok
    print(f"chart={args.chart} points={args.points} scheme={result.reports[0].scheme} tol={tol:g}")
    print(f"defect={result.worst_defect:.3e} pass={int(ok)} seed={args.seed}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_nodes(args) -> int:
    r = eliminate_nodes(args.G1, args.G2, args.C)
    print(f"H1={fmt(r.H1)} H2={fmt(r.H2)}")
    return EXIT_OK


def cmd_kepler(args) -> int:
    print(f"E={fmt(solve_kepler(args.M, args.e))}")
    return EXIT_OK


def cmd_propagate(args) -> int:
    state = convert(_load(args.infile), "cartesian").payload
    try:
        traj = integrate(state, args.dt, args.steps)
    except CollisionError as exc:
        if exc.trajectory is not None:
            _emit(format_trajectory(exc.trajectory), args.outfile)
        raise
    _emit(format_trajectory(traj), args.outfile)
    return EXIT_OK


def cmd_demo_invariance(args) -> int:
    cfg = InvarianceConfig()
    state = demo_state() if args.infile is None else convert(_load(args.infile), "cartesian").payload
    report = invariance_demo(state, args.dt, args.steps, tol=cfg.angle_tol)
    print(f"steps={args.steps} dt={fmt(args.dt)}")
    print(f"max_C_hat_deviation={report.max_angle:.3e} rad")
    print(f"C_norm_drift={report.C_norm_drift:.3e}")
    ok = report.passed
    if report.deprit is not None:
        for label in report.deprit_labels:
            print(f"spread {label} {report.spread(label):.3e}")
        invariant = max(report.spread(x) for x in ("Phi1", "Phi2", "phi2"))
        ok = ok and invariant < cfg.invariant_tol
        print(f"invariants_constant={int(invariant < cfg.invariant_tol)}")
    print(f"pass={int(ok)}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="darboux", description="Symplectic N-body coordinate charts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert a state file between representations")
    p.add_argument("--from", dest="source", choices=KINDS, required=True)
    p.add_argument("--to", dest="target", choices=KINDS, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", dest="outfile", default=None)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("verify", help="certify a chart at seeded random points")
    p.add_argument("--chart", choices=sorted(SAMPLERS), required=True)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--scheme", choices=("auto", "dual", "fd"), default="auto")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("nodes", help="Jacobi's elimination of the nodes")
    p.add_argument("--G1", type=float, required=True)
    p.add_argument("--G2", type=float, required=True)
    p.add_argument("--C", type=float, required=True)
    p.set_defaults(func=cmd_nodes)

    p = sub.add_parser("kepler", help="solve Kepler's equation")
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--e", type=float, required=True)
    p.set_defaults(func=cmd_kepler)

    p = sub.add_parser("propagate", help="leapfrog integration, one trajectory sample per line")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", dest="outfile", default=None)
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("demo-invariance", help="watch the direction of C and the Deprit variables along a run")
    p.add_argument("--in", dest="infile", default=None)
    p.add_argument("--dt", type=float, default=InvarianceConfig.dt)
    p.add_argument("--steps", type=int, default=InvarianceConfig.steps)
    p.set_defaults(func=cmd_demo_invariance)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, StateFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DarbouxError as exc:
        # validation failures of parsed values (dimensions, non-finite input)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
