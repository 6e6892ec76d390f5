"""Run driver and the convergence / entropy-conservation experiment harnesses.

Everything here is shared by the command line front end and the test suite.
"""
from __future__ import annotations

import math
import time as _time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import io
from .diagnostics import RunDiagnostics, alfven_error, eoc, total_entropy
from .eos import AdmissibilityError, GasModel, entropy_density, prim_to_cons
from .problems import BASE_CFL, alfven_exact, make_problem
from .reconstruction import ReconstructionScheme
from .solver import Solver, advance_periodic_line, field_from_prim, fill_ghosts

EXIT_OK, EXIT_USAGE, EXIT_ADMISSIBILITY = 0, 1, 2


@dataclass
class RunOptions:
    problem: str = "alfven"
    nx: Optional[int] = None
    ny: Optional[int] = None
    nz: Optional[int] = None
    flux: Optional[str] = None
    reconstruction: Optional[str] = None
    alpha: float = 0.5
    integrator: Optional[str] = None
    cfl: Optional[float] = None
    dt: Optional[float] = None
    tend: Optional[float] = None
    out: Optional[str] = None
    snapshot_every: Optional[float] = None
    format: str = "csv"
    source_form: str = "vector"
    max_steps: Optional[int] = None

    @classmethod
    def from_mapping(cls, values: dict) -> "RunOptions":
        """Build from string or typed values (config files give strings)."""
        kinds = {"nx": int, "ny": int, "nz": int, "max_steps": int, "alpha": float,
                 "cfl": float, "dt": float, "tend": float, "snapshot_every": float}
        known = {f.name for f in fields(cls)}
        kw = {}
        for key, val in values.items():
            if key not in known:
                raise ValueError(f"unknown option {key!r}")
            if val is None:
                continue
            kw[key] = kinds[key](val) if key in kinds else val
        return cls(**kw)


@dataclass
class RunResult:
    status: str                 # "ok" or "failed"
    t: float
    nsteps: int
    U: np.ndarray
    solver: Solver
    diagnostics: np.ndarray
    error: Optional[AdmissibilityError] = None
    options: dict = field(default_factory=dict)
    wall: float = 0.0

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.status == "ok" else EXIT_ADMISSIBILITY


def resolve(opts: RunOptions):
    """Fill unset options from the problem preset; returns ``(problem, options)``."""
    pc = make_problem(opts.problem, opts.nx, opts.ny, opts.nz)
    eff = RunOptions(**asdict(opts))
    eff.nx, eff.ny, eff.nz = pc.shape
    eff.flux = eff.flux or pc.defaults.get("flux", "kepes")
    eff.reconstruction = eff.reconstruction or pc.defaults.get("reconstruction", "minmod")
    eff.integrator = eff.integrator or pc.defaults.get("integrator", "ssprk2")
    if eff.cfl is None:
        eff.cfl = pc.defaults.get("cfl", BASE_CFL)
    if eff.tend is None:
        eff.tend = pc.t_end
    pc.t_end = eff.tend
    return pc, eff


def build(opts: RunOptions):
    pc, eff = resolve(opts)
    grid = pc.grid()
    gas = GasModel(pc.gamma)
    solver = Solver(grid, pc.bcs, gas, ReconstructionScheme(eff.reconstruction, eff.alpha),
                    eff.flux, eff.integrator, cfl=eff.cfl, dt_fixed=eff.dt,
                    source_form=eff.source_form)
    U = field_from_prim(pc.initial_prim(), grid, gas)
    fill_ghosts(U, grid, solver.bcs, gas)
    return pc, eff, solver, U


def run_problem(opts: RunOptions, log=None) -> RunResult:
    """Run a preset to its end time, optionally writing output files.

    With ``opts.out`` set, the directory receives ``config.txt`` (effective
    options), ``diagnostics.csv``, ``snap_NNNN.csv`` (or ``.bin``) at the
    requested interval plus the final state, and on an admissibility failure
    ``lastgood.*`` and ``failure.txt``.
    """
    pc, eff, solver, U = build(opts)
    grid, gas = solver.grid, solver.gas
    out = Path(eff.out) if eff.out else None
    diag = RunDiagnostics(grid, gas)
    writer = None
    nsnap = 0
    last_snap = None

    def snapshot(name, state, t):
        if out is not None:
            io.write_snapshot(out / f"{name}.{eff.format}", state, grid, gas, t, eff.format)

    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.txt").write_text(io.format_config(asdict(eff)))
        writer = io.DiagnosticsWriter(out / "diagnostics.csv")
    t, nsteps, err = 0.0, 0, None
    t0 = _time.perf_counter()
    try:
        row = diag.record(0.0, 0.0, U)
        if writer:
            writer.write(row)
        snapshot(f"snap_{nsnap:04d}", U, t)
        nsnap, last_snap = nsnap + 1, t
        next_snap = eff.snapshot_every if eff.snapshot_every else math.inf
        while t < eff.tend and (eff.max_steps is None or nsteps < eff.max_steps):
            dt = min(solver.compute_dt(U), eff.tend - t, next_snap - t)
            if dt <= 0.0:
                break
            try:
                U_new = solver.step(U, dt)
                fill_ghosts(U_new, grid, solver.bcs, gas)
                t_new = t + dt
                for target in (eff.tend, next_snap):
                    if math.isfinite(target) and abs(t_new - target) <= 1e-12 * max(1.0, abs(target)):
                        t_new = target
                row = diag.record(t_new, dt, U_new)
            except AdmissibilityError as exc:
                err = exc
                break
            U, t = U_new, t_new
            nsteps += 1
            if writer:
                writer.write(row)
            if t >= next_snap:
                snapshot(f"snap_{nsnap:04d}", U, t)
                nsnap, last_snap = nsnap + 1, t
                next_snap += eff.snapshot_every
            if log and nsteps % 100 == 0:
                log(f"step {nsteps} t={t:.6g} dt={dt:.3g}")
    finally:
        if writer:
            writer.close()
    wall = _time.perf_counter() - t0
    if err is not None:
        snapshot("lastgood", U, t)
        if out is not None:
            (out / "failure.txt").write_text(
                f"status = failed\nerror = {type(err).__name__}\nmessage = {err}\n"
                f"time = {float(t)!r}\nstep = {nsteps + 1}\ncell = {err.index}\n")
        status = "failed"
    else:
        if last_snap != t:
            snapshot(f"snap_{nsnap:04d}", U, t)
        status = "ok"
    return RunResult(status, t, nsteps, U, solver, diag.as_array(), err,
                     asdict(eff), wall)


# -- smooth Alfven convergence ----------------------------------------------

CONVERGENCE_SCHEMES = ("constant", "minmod", "linear")


def alfven_errors(n: int, scheme: str, dt: float = 1e-5, t_end: float = 1.0,
                  flux: str = "kepes", integrator: str = "ssprk2"):
    """L1 and L2 errors of B2 after advecting the Alfven wave to ``t_end``."""
    gamma = 5.0 / 3.0
    x = (np.arange(n) + 0.5) / n
    q = prim_to_cons(alfven_exact(x), GasModel(gamma))
    nsteps = int(round(t_end / dt))
    q = advance_periodic_line(q, 1.0 / n, t_end / nsteps, nsteps, integrator,
                              ReconstructionScheme(scheme), flux, gamma)
    B2 = q[6]
    return alfven_error(B2, x, t_end, "L1", 1.0 / n), alfven_error(B2, x, t_end, "L2", 1.0 / n)


def convergence_table(ns: Sequence[int] = (8, 16, 32, 64),
                      schemes: Sequence[str] = CONVERGENCE_SCHEMES, dt: float = 1e-5,
                      t_end: float = 1.0, flux: str = "kepes", integrator: str = "ssprk2"):
    """Rows ``(scheme, N, L1, L2, EOC_L1, EOC_L2)``; EOC is NaN on the coarsest grid."""
    rows = []
    for scheme in schemes:
        errs = np.array([alfven_errors(n, scheme, dt, t_end, flux, integrator) for n in ns])
        o1 = np.concatenate([[np.nan], eoc(errs[:, 0])])
        o2 = np.concatenate([[np.nan], eoc(errs[:, 1])])
        for k, n in enumerate(ns):
            rows.append((scheme, int(n), errs[k, 0], errs[k, 1], o1[k], o2[k]))
    return rows


def write_convergence_csv(path, rows):
    with open(path, "w") as fh:
        fh.write("scheme,N,L1,L2,EOC_L1,EOC_L2\n")
        for s, n, e1, e2, o1, o2 in rows:
            fh.write(f"{s},{n},{e1:.17g},{e2:.17g},{o1:.17g},{o2:.17g}\n")


# -- entropy conservation in time ------------------------------------------

ENTROPY_FIT_FLOOR = 1e-12   # errors below this are treated as round-off plateau


@dataclass
class EntropySweep:
    integrator: str
    dts: np.ndarray
    errors: np.ndarray          # |S(t_end) - S(0)|
    signed: np.ndarray

    @property
    def slope(self) -> float:
        return fit_slope(self.dts, self.errors)

    @property
    def floor(self) -> float:
        return float(self.errors[-1])


def fit_slope(dts, errors, floor: float = ENTROPY_FIT_FLOOR) -> float:
    """Least-squares slope of log(error) vs log(dt) over points above ``floor``."""
    dts, errors = np.asarray(dts, float), np.asarray(errors, float)
    keep = errors > floor
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(dts[keep]), np.log(errors[keep]), 1)[0])


def entropy_sweep(problem: str = "briowu-entropy", integrators=("euler", "ssprk2", "ssprk3"),
                  nsteps: Sequence[int] = tuple(10 * 2 ** k for k in range(8)),
                  nx: Optional[int] = None, ny: Optional[int] = None,
                  t_end: Optional[float] = None, flux: str = "kepec",
                  reconstruction: str = "constant"):
    """Total-entropy error at ``t_end`` for a family of fixed time steps."""
    pc = make_problem(problem, nx, ny)
    t_end = pc.t_end if t_end is None else t_end
    gas = GasModel(pc.gamma)
    scheme = ReconstructionScheme(reconstruction)
    grid = pc.grid()
    U0 = field_from_prim(pc.initial_prim(), grid, gas)
    S0 = total_entropy(U0, grid, gas)
    out = []
    for integ in integrators:
        dts, signed = [], []
        for m in nsteps:
            dt = t_end / m
            if grid.ndim == 1 and all(type(b).__name__ == "Periodic" for b in pc.bcs.values()):
                q = advance_periodic_line(U0[grid.interior()][:, :, 0, 0], grid.spacing[0],
                                          dt, m, integ, scheme, flux, pc.gamma)
                S = float(np.sum(entropy_density(q, gas))) * grid.cell_volume
            else:
                solver = Solver(grid, pc.bcs, gas, scheme, flux, integ, dt_fixed=dt)
                U, _, _ = solver.run(U0.copy(), t_end)
                S = total_entropy(U, grid, gas)
            dts.append(dt)
            signed.append(S - S0)
        signed = np.array(signed)
        out.append(EntropySweep(integ, np.array(dts), np.abs(signed), signed))
    return out
