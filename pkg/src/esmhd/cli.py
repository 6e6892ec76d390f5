"""Command line front end: ``esmhd run | convergence | entropy-test``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path

from . import io
from .apps import (CONVERGENCE_SCHEMES, EXIT_OK, EXIT_USAGE, RunOptions, convergence_table,
                   entropy_sweep, run_problem, write_convergence_csv)
from .flux import SOURCE_FORMS
from .kernels import BACKEND, FLUX_KINDS, INTEGRATORS
from .problems import PROBLEMS
from .reconstruction import KINDS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run(sub):
    p = sub.add_parser("run", help="run a preset problem")
    p.add_argument("--problem", choices=PROBLEMS)
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--nz", type=int)
    p.add_argument("--flux", choices=FLUX_KINDS)
    p.add_argument("--reconstruction", choices=KINDS)
    p.add_argument("--alpha", type=float, help="slope weight of linear reconstruction")
    p.add_argument("--integrator", choices=INTEGRATORS)
    p.add_argument("--cfl", type=float,
                   help="CFL coefficient (default 0.8 divided by the number of active dimensions)")
    p.add_argument("--dt", type=float, help="fixed time step")
    p.add_argument("--tend", type=float)
    p.add_argument("--out", help="output directory")
    p.add_argument("--snapshot-every", type=float, dest="snapshot_every")
    p.add_argument("--format", choices=("csv", "bin"))
    p.add_argument("--source-form", choices=SOURCE_FORMS, dest="source_form")
    p.add_argument("--max-steps", type=int, dest="max_steps")
    p.add_argument("--config", help="file of 'key = value' lines; flags take precedence")
    p.set_defaults(func=cmd_run)


def _add_convergence(sub):
    p = sub.add_parser("convergence", help="smooth Alfven wave error and EOC table")
    p.add_argument("--n", type=int, nargs="+", default=[8, 16, 32, 64])
    p.add_argument("--schemes", nargs="+", choices=CONVERGENCE_SCHEMES,
                   default=list(CONVERGENCE_SCHEMES))
    p.add_argument("--dt", type=float, default=1e-5)
    p.add_argument("--tend", type=float, default=1.0)
    p.add_argument("--flux", choices=FLUX_KINDS, default="kepes")
    p.add_argument("--integrator", choices=INTEGRATORS, default="ssprk2")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_convergence)


def _add_entropy(sub):
    p = sub.add_parser("entropy-test", help="entropy error vs fixed time step (KEPEC)")
    p.add_argument("--problem", choices=("briowu-entropy", "briowu2d"), default="briowu-entropy")
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--tend", type=float)
    p.add_argument("--integrators", nargs="+", choices=INTEGRATORS, default=list(INTEGRATORS))
    p.add_argument("--nsteps", type=int, nargs="+",
                   default=[10 * 2 ** k for k in range(8)])
    p.add_argument("--out", help="CSV path for the raw sweep")
    p.set_defaults(func=cmd_entropy)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="esmhd", description="Entropy-stable finite-volume ideal MHD solver")
    parser.add_argument("--version", action="version", version=f"esmhd ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_run(sub)
    _add_convergence(sub)
    _add_entropy(sub)
    return parser


def cmd_run(args) -> int:
    values = {}
    if args.config:
        values.update(io.read_config(args.config))
    names = {f.name for f in fields(RunOptions)}
    for k, v in vars(args).items():
        if k in names and v is not None:
            values[k] = v
    if "problem" not in values:
        print("esmhd run: --problem is required (flag or config file)", file=sys.stderr)
        return EXIT_USAGE
    try:
        opts = RunOptions.from_mapping(values)
        res = run_problem(opts, log=lambda m: print(m, file=sys.stderr))
    except ValueError as exc:
        print(f"esmhd run: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if res.status == "ok":
        print(f"completed {opts.problem}: t={res.t:.6g} steps={res.nsteps} "
              f"wall={res.wall:.2f}s")
    else:
        print(f"aborted {opts.problem} at t={res.t:.6g} after {res.nsteps} steps: "
              f"{type(res.error).__name__}: {res.error}", file=sys.stderr)
    return res.exit_code


def cmd_convergence(args) -> int:
    rows = convergence_table(args.n, args.schemes, args.dt, args.tend, args.flux,
                             args.integrator)
    if args.out:
        write_convergence_csv(args.out, rows)
    else:
        print("scheme,N,L1,L2,EOC_L1,EOC_L2")
        for s, n, e1, e2, o1, o2 in rows:
            print(f"{s},{n},{e1:.6e},{e2:.6e},{o1:.3f},{o2:.3f}")
    return EXIT_OK


def cmd_entropy(args) -> int:
    sweeps = entropy_sweep(args.problem, args.integrators, args.nsteps, args.nx, args.ny,
                           args.tend)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("integrator,dt,entropy_err\n")
            for sw in sweeps:
                for dt, e in zip(sw.dts, sw.signed):
                    fh.write(f"{sw.integrator},{dt:.17g},{e:.17g}\n")
    for sw in sweeps:
        print(f"{sw.integrator:7s} slope={sw.slope:6.3f} floor={sw.floor:.2e}  errors="
              + " ".join(f"{e:.2e}" for e in sw.errors))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
