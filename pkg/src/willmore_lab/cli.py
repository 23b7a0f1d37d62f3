"""Command-line entry point: ``willmore-lab <command> ...``.

Exit codes: 0 success, 1 input/validation/convergence failure, 2 bad arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import spheroid
from .errors import DomainError, ParseError, PrecisionLoss, ValidationFailed, WillmoreLabError
from .functionals import compute_report
from .mesh import ShapeSpec, load_mesh, save_mesh
from .mesh.fileio import atomic_write_text
from .optimize import DescentConfig, minimize
from .verify import VerifyConfig, run_verify

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def _fail(exc) -> int:
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_FAILURE


def cmd_gen(args) -> int:
    kind = {"bumpy": "bumpy-sphere"}.get(args.shape, args.shape)
    try:
        spec = ShapeSpec(kind=kind, level=args.level, r=args.r, nu=args.nu, nv=args.nv,
                         lmax=args.lmax, amp=args.amp, seed=args.seed)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    try:
        mesh = spec.build()
    except WillmoreLabError as exc:
        return _fail(exc)
    save_mesh(mesh, args.out, args.format)
    print(f"wrote {args.out}: {mesh.n_vertices} vertices, {mesh.n_faces} faces")
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        mesh = load_mesh(args.path, args.format)
    except (ParseError, ValidationFailed, OSError) as exc:
        return _fail(exc)
    report = compute_report(mesh)
    if args.json:
        print(report.to_json(indent=2))
    else:
        for key, value in report.to_dict().items():
            print(f"{key:30s} {value:.12g}" if isinstance(value, float) else f"{key:30s} {value}")
    return EXIT_OK


def _rows_to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([f"{row[c]:.17g}" for c in columns])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    if not 1.0 < args.r_min < args.r_max:
        raise _UsageError(f"need 1 < r-min < r-max, got {args.r_min}, {args.r_max}")
    if args.steps < 2:
        raise _UsageError("steps must be >= 2")
    try:
        rows = spheroid.sweep(args.r_min, args.r_max, args.steps)
    except WillmoreLabError as exc:
        return _fail(exc)
    atomic_write_text(args.out, _rows_to_csv(spheroid.SWEEP_COLUMNS, rows))
    worst = max(r["quadrature_check_abs_err"] for r in rows)
    print(f"wrote {args.out}: {len(rows)} rows, max quadrature check error {worst:.3e}")
    return EXIT_OK


def cmd_limit(args) -> int:
    if not 8 <= args.kmax <= 40:
        raise _UsageError("kmax must lie in [8, 40]")
    try:
        result = spheroid.deficit_ratio_limit(args.kmax)
    except PrecisionLoss as exc:
        print(f"error: PrecisionLoss: {exc}", file=sys.stderr)
        for r, q in exc.table:
            print(f"  r = {r:.17g}  ratio = {q:.17g}", file=sys.stderr)
        return EXIT_FAILURE
    if args.json:
        print(json.dumps(result.to_dict(), indent=2))
        return EXIT_OK
    print(f"{'r':>24s} {'deficit ratio':>24s} {'extrapolant':>24s}")
    for (r, q), e in zip(result.table, result.extrapolants):
        print(f"{r:24.17g} {q:24.17g} {e:24.17g}")
    print(f"extrapolated limit of (W - 4pi)/(I - I(S^2)):  {result.limit:.15g}")
    print(f"stated constant 6 (16 pi / 3)^(2/3):           {result.stated_constant:.15g}")
    print(f"plain ratio W/I at the sphere 4pi/(6 sqrt(pi))^(2/3): {result.continuous_ratio:.15g}")
    if result.stated_constant_discrepancy:
        print("note: the stated constant does not match the extrapolated deficit-ratio limit")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        config = VerifyConfig(
            samples=args.samples, c0=args.c0, seed=args.seed,
            lmax_range=(args.lmax_min, args.lmax_max), amp_range=(args.amp_min, args.amp_max),
            levels=tuple(args.levels), r_range=(args.r_min, args.r_max), spheroid_grid=args.grid,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    try:
        result = run_verify(config)
    except WillmoreLabError as exc:
        return _fail(exc)
    if not result.retained:
        print(f"error: all {result.drawn} samples exceed c0 = {config.c0}", file=sys.stderr)
        return EXIT_FAILURE
    atomic_write_text(args.out, result.to_csv())
    print(f"retained {result.retained} of {result.drawn} samples")
    print(f"C_emp = {result.c_emp:.12g}")
    print(f"volume C_emp = {result.volume_c_emp:.12g}")
    return EXIT_OK


def cmd_minimize(args) -> int:
    try:
        config = DescentConfig(
            max_steps=args.max_steps, initial_step=args.initial_step, armijo_c=args.armijo_c,
            backtrack_factor=args.backtrack_factor, grad_tol=args.grad_tol,
            sigma_target=args.sigma_target, penalty_weight=args.penalty_weight, fd_epsilon=args.fd_epsilon,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    try:
        mesh = load_mesh(args.path, args.format)
    except (ParseError, ValidationFailed, OSError) as exc:
        return _fail(exc)
    try:
        final, trace = minimize(mesh, config)
    except WillmoreLabError as exc:
        return _fail(exc)
    atomic_write_text(args.trace, trace.to_csv())
    save_mesh(final, args.out, args.out_format)
    first, last = trace.records[0], trace.records[-1]
    print(f"{trace.termination} after {len(trace.records) - 1} accepted steps")
    print(f"willmore {first.willmore:.12g} -> {last.willmore:.12g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="willmore-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a mesh")
    p.add_argument("--shape", choices=("icosphere", "spheroid", "bumpy"), required=True)
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--nu", type=int, default=64)
    p.add_argument("--nv", type=int, default=64)
    p.add_argument("--lmax", type=int, default=4)
    p.add_argument("--amp", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("off", "obj"))
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="print the functional report of a mesh file")
    p.add_argument("path")
    p.add_argument("--format", choices=("off", "obj"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="closed-form spheroid table as CSV")
    p.add_argument("--r-min", type=float, required=True)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("limit", help="extrapolate the deficit ratio as r -> 1")
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_limit)

    d = VerifyConfig()
    p = sub.add_parser("verify", help="empirical constant for I-deficit <= C * W-deficit")
    p.add_argument("--samples", type=int, default=d.samples)
    p.add_argument("--c0", type=float, default=d.c0)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--lmax-min", type=int, default=d.lmax_range[0])
    p.add_argument("--lmax-max", type=int, default=d.lmax_range[1])
    p.add_argument("--amp-min", type=float, default=d.amp_range[0])
    p.add_argument("--amp-max", type=float, default=d.amp_range[1])
    p.add_argument("--levels", type=int, nargs="+", default=list(d.levels))
    p.add_argument("--r-min", type=float, default=d.r_range[0])
    p.add_argument("--r-max", type=float, default=d.r_range[1])
    p.add_argument("--grid", type=int, default=d.spheroid_grid)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verify)

    d = DescentConfig()
    p = sub.add_parser("minimize", help="Willmore descent from a mesh file")
    p.add_argument("path")
    p.add_argument("--format", choices=("off", "obj"))
    p.add_argument("--max-steps", type=int, default=d.max_steps)
    p.add_argument("--initial-step", type=float, default=d.initial_step)
    p.add_argument("--armijo-c", type=float, default=d.armijo_c)
    p.add_argument("--backtrack-factor", type=float, default=d.backtrack_factor)
    p.add_argument("--grad-tol", type=float, default=d.grad_tol)
    p.add_argument("--sigma-target", type=float)
    p.add_argument("--penalty-weight", type=float, default=d.penalty_weight)
    p.add_argument("--fd-epsilon", type=float, default=d.fd_epsilon)
    p.add_argument("--trace", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--out-format", choices=("off", "obj"))
    p.set_defaults(func=cmd_minimize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (_UsageError, DomainError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
