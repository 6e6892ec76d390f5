"""Uniform Cartesian finite-volume solver.

A field is stored as a conserved-variable array of shape ``(8, NX, NY, NZ)``
where every active direction (extent > 1) carries two ghost layers on each
side and inactive directions have length 1. Fluxes are applied direction by
direction through the 1D pencil kernel after rotating the normal direction
onto x.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .eos import (AdmissibilityError, GasModel, MX, NVAR, VX, cons_to_prim,
                  prim_to_cons, wave_speeds_x)
from .reconstruction import GHOST, ReconstructionScheme

AXES = ("x", "y", "z")

# component permutation that swaps the normal direction onto x
_PERM = {
    0: np.arange(NVAR),
    1: np.array([0, 2, 1, 3, 4, 6, 5, 7]),
    2: np.array([0, 3, 2, 1, 4, 7, 6, 5]),
}


def rotate_to_x(q, axis):
    """Swap normal velocity and field components onto the x slots.

    ``axis`` is 0/1/2 or ``"x"/"y"/"z"``. The swap is its own inverse.
    """
    a = AXES.index(axis) if isinstance(axis, str) else int(axis)
    return np.asarray(q)[_PERM[a]]


rotate_from_x = rotate_to_x


# -- boundary conditions ---------------------------------------------------

@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class ZeroGradient:
    pass


@dataclass(frozen=True)
class Reflecting:
    pass


@dataclass(frozen=True)
class Inflow:
    """Fixed primitive state ``(rho, u, v, w, p, B1, B2, B3)``."""

    state: tuple


def parse_bc(spec):
    if not isinstance(spec, str):
        return spec
    table = {"periodic": Periodic(), "zero-gradient": ZeroGradient(),
             "outflow": ZeroGradient(), "reflecting": Reflecting()}
    if spec not in table:
        raise ValueError(f"unknown boundary condition {spec!r}")
    return table[spec]


@dataclass
class Grid:
    """Cell-centred uniform grid on ``[lo, hi]`` with an optional solid mask."""

    shape: tuple
    lo: tuple = (0.0, 0.0, 0.0)
    hi: tuple = (1.0, 1.0, 1.0)
    solid: Optional[np.ndarray] = None   # bool, interior shape, True = Solid

    def __post_init__(self):
        shape = tuple(int(n) for n in self.shape) + (1,) * (3 - len(self.shape))
        if any(n < 1 for n in shape):
            raise ValueError(f"grid extents must be >= 1, got {shape}")
        self.shape = shape
        self.lo = tuple(float(v) for v in self.lo) + (0.0,) * (3 - len(self.lo))
        self.hi = tuple(float(v) for v in self.hi) + (1.0,) * (3 - len(self.hi))
        if any(h <= l for l, h in zip(self.lo, self.hi)):
            raise ValueError("domain upper bounds must exceed lower bounds")
        if self.solid is not None:
            self.solid = np.asarray(self.solid, dtype=bool).reshape(self.shape)
            if not self.solid.any():
                self.solid = None

    @property
    def active(self) -> tuple:
        return tuple(a for a in range(3) if self.shape[a] > 1)

    @property
    def ndim(self) -> int:
        return len(self.active)

    @property
    def spacing(self) -> tuple:
        return tuple((h - l) / n for l, h, n in zip(self.lo, self.hi, self.shape))

    @property
    def cell_volume(self) -> float:
        return float(np.prod([self.spacing[a] for a in self.active])) if self.active else 1.0

    @property
    def padded_shape(self) -> tuple:
        return tuple(n + 2 * GHOST if n > 1 else 1 for n in self.shape)

    def centers(self, axis: int) -> np.ndarray:
        d = self.spacing[axis]
        return self.lo[axis] + d * (np.arange(self.shape[axis]) + 0.5)

    def mesh(self):
        return np.meshgrid(self.centers(0), self.centers(1), self.centers(2), indexing="ij")

    def interior(self) -> tuple:
        return (slice(None),) + tuple(slice(GHOST, -GHOST) if n > 1 else slice(None)
                                      for n in self.shape)

    @property
    def fluid(self) -> np.ndarray:
        if self.solid is None:
            return np.ones(self.shape, dtype=bool)
        return ~self.solid


def new_field(grid: Grid) -> np.ndarray:
    return np.zeros((NVAR,) + grid.padded_shape)


def field_from_prim(w, grid: Grid, gas: GasModel) -> np.ndarray:
    U = new_field(grid)
    U[grid.interior()] = prim_to_cons(w, gas)
    return U


def fill_ghosts(U: np.ndarray, grid: Grid, bcs: dict, gas: GasModel) -> None:
    """Fill the two ghost layers of every active direction in place.

    ``bcs`` maps face names ``"x-", "x+", "y-", ...`` to boundary objects.
    """
    for a in grid.active:
        n = grid.shape[a]
        ax = a + 1
        lo_bc, hi_bc = parse_bc(bcs[AXES[a] + "-"]), parse_bc(bcs[AXES[a] + "+"])
        if isinstance(lo_bc, Periodic) != isinstance(hi_bc, Periodic):
            raise ValueError(f"periodic boundary on {AXES[a]} must be paired on both faces")
        for side, bc in ((0, lo_bc), (1, hi_bc)):
            ghosts = [0, 1] if side == 0 else [n + 2, n + 3]
            if isinstance(bc, Periodic):
                src = [n, n + 1] if side == 0 else [2, 3]
            elif isinstance(bc, ZeroGradient):
                src = [2, 2] if side == 0 else [n + 1, n + 1]
            elif isinstance(bc, Reflecting):
                src = [3, 2] if side == 0 else [n + 1, n]
            elif isinstance(bc, Inflow):
                q = prim_to_cons(np.asarray(bc.state, dtype=float), gas)
                bshape = (NVAR,) + (1,) * (U.ndim - 2)
                for g in ghosts:
                    idx = [slice(None)] * U.ndim
                    idx[ax] = g
                    U[tuple(idx)] = q.reshape(bshape)
                continue
            else:
                raise ValueError(f"unsupported boundary {bc!r}")
            for g, s in zip(ghosts, src):
                dst = [slice(None)] * U.ndim
                srci = [slice(None)] * U.ndim
                dst[ax] = g
                srci[ax] = s
                U[tuple(dst)] = U[tuple(srci)]
            if isinstance(bc, Reflecting):
                for g in ghosts:
                    dst = [slice(None)] * U.ndim
                    dst[0] = MX + a
                    dst[ax] = g
                    U[tuple(dst)] *= -1.0


def _solid_gather(solid_line: np.ndarray):
    """Mirror map for one pencil: (source index, flip flag) for each ghosted slot."""
    n = solid_line.size
    m = n + 2 * GHOST
    src = np.arange(m)
    flip = np.zeros(m, dtype=bool)
    fluid = np.flatnonzero(~solid_line) + GHOST
    if fluid.size == 0:
        return src, flip
    for j in np.flatnonzero(solid_line) + GHOST:
        left = fluid[fluid < j]
        right = fluid[fluid > j]
        dl = j - left[-1] if left.size else np.inf
        dr = right[0] - j if right.size else np.inf
        if dl <= dr:
            k = int(left[-1])
            s = k - (int(dl) - 1)
            src[j] = s if GHOST <= s < n + GHOST and not solid_line[s - GHOST] else k
        else:
            k = int(right[0])
            s = k + (int(dr) - 1)
            src[j] = s if GHOST <= s < n + GHOST and not solid_line[s - GHOST] else k
        flip[j] = True
    return src, flip


@dataclass
class SweepPlan:
    axis: int
    other_shape: tuple
    rows: Optional[np.ndarray] = None     # pencils touching a solid cell
    src: Optional[np.ndarray] = None
    flip: Optional[np.ndarray] = None


@dataclass
class Solver:
    grid: Grid
    bcs: dict
    gas: GasModel = field(default_factory=GasModel)
    scheme: ReconstructionScheme = field(default_factory=ReconstructionScheme)
    flux: str = "kepes"
    integrator: str = "ssprk2"
    cfl: float = 0.8
    dt_fixed: Optional[float] = None
    source_form: str = "vector"

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        self.bcs = {k: parse_bc(v) for k, v in self.bcs.items()}
        self._flux = kernels.flux_code(self.flux)
        self._integ = kernels.integrator_code(self.integrator)
        self._source = kernels.source_code(self.source_form)
        self._plans = [self._plan(a) for a in self.grid.active]

    def _plan(self, a: int) -> SweepPlan:
        g = self.grid
        others = tuple(g.shape[b] for b in range(3) if b != a)
        plan = SweepPlan(axis=a, other_shape=others)
        if g.solid is None:
            return plan
        lines = np.moveaxis(g.solid, a, -1).reshape(-1, g.shape[a])
        rows = np.flatnonzero(lines.any(axis=1) & (~lines).any(axis=1))
        src = np.empty((rows.size, g.shape[a] + 2 * GHOST), dtype=np.intp)
        flip = np.empty(src.shape, dtype=bool)
        for i, r in enumerate(rows):
            src[i], flip[i] = _solid_gather(lines[r])
        plan.rows, plan.src, plan.flip = rows, src, flip
        return plan

    # -- spatial operator ----------------------------------------------------

    def rhs(self, U: np.ndarray) -> np.ndarray:
        """Semi-discrete time derivative of the interior cells (ghosts filled)."""
        g = self.grid
        dU = np.zeros((NVAR,) + g.shape)
        for plan in self._plans:
            a = plan.axis
            n = g.shape[a]
            sl = [slice(None)] + [slice(GHOST, -GHOST) if (g.shape[b] > 1 and b != a) else slice(None)
                                  for b in range(3)]
            sub = U[tuple(sl)]
            P = np.moveaxis(sub, (0, a + 1), (-1, -2)).reshape(-1, n + 2 * GHOST, NVAR)
            P = np.ascontiguousarray(P[..., _PERM[a]])
            if plan.rows is not None and plan.rows.size:
                lines = P[plan.rows]
                lines = np.take_along_axis(lines, plan.src[..., None], axis=1)
                lines[..., MX] = np.where(plan.flip, -lines[..., MX], lines[..., MX])
                P[plan.rows] = lines
            try:
                R = kernels.pencil_rhs(P, g.spacing[a], self.scheme.code, self.scheme.alpha,
                                       self._flux, self.gas.gamma, self._source)
            except AdmissibilityError as exc:
                raise self._relocate(exc, plan) from None
            R = R[..., _PERM[a]].reshape(plan.other_shape + (n, NVAR))
            dU += np.moveaxis(R, (-1, -2), (0, a + 1))
        if g.solid is not None:
            dU[:, g.solid] = 0.0
        return dU

    def _relocate(self, exc: AdmissibilityError, plan: SweepPlan):
        if exc.index is None:
            return exc
        pencil, j = exc.index
        others = [int(i) for i in np.unravel_index(int(pencil), plan.other_shape)]
        cell = others[:plan.axis] + [int(j) - GHOST] + others[plan.axis:]
        new = type(exc)(f"{exc} at cell {tuple(cell)}", index=tuple(cell), value=exc.value)
        return new

    # -- time step -----------------------------------------------------------

    def compute_dt(self, U: np.ndarray) -> float:
        if self.dt_fixed is not None:
            return float(self.dt_fixed)
        g = self.grid
        w = cons_to_prim(U[g.interior()], self.gas)
        fluid = g.fluid
        best = np.inf
        for a in g.active:
            wr = rotate_to_x(w, a)
            cf = wave_speeds_x(wr, self.gas)[2]
            lam = np.max((np.abs(wr[VX]) + cf)[fluid])
            if lam > 0.0:
                best = min(best, g.spacing[a] / lam)
        if not np.isfinite(best):
            raise ValueError("maximum wave speed is zero in every direction; cannot set dt")
        return self.cfl * best

    def increment(self, U: np.ndarray) -> np.ndarray:
        """Full-shape time derivative (zero in the ghost layers); fills ghosts of ``U``."""
        fill_ghosts(U, self.grid, self.bcs, self.gas)
        dU = np.zeros_like(U)
        dU[self.grid.interior()] = self.rhs(U)
        return dU

    def step(self, U: np.ndarray, dt: float) -> np.ndarray:
        """Advance one step with the configured SSP Runge-Kutta method."""
        return ssp_rk_step(U, dt, self.increment, self.integrator)

    def run(self, U: np.ndarray, t_end: float, t0: float = 0.0,
            callback: Optional[Callable] = None, max_steps: Optional[int] = None):
        """Integrate to ``t_end``; the last step is clipped to land on it.

        ``callback(t, dt, U)`` is called after every accepted step. Returns
        ``(U, t, nsteps)``.
        """
        t = float(t0)
        nsteps = 0
        while t < t_end and (max_steps is None or nsteps < max_steps):
            dt = self.compute_dt(U)
            if t + dt > t_end:
                dt = t_end - t
            if dt <= 0.0:
                break
            U = self.step(U, dt)
            t = t + dt
            if np.isfinite(t_end) and abs(t - t_end) <= 1e-14 * max(1.0, abs(t_end)):
                t = t_end
            nsteps += 1
            if callback is not None:
                callback(t, dt, U)
        return U, t, nsteps


def ssp_rk_step(u, dt: float, L: Callable, integrator: str = "ssprk3"):
    """One explicit Euler, SSPRK2 (Heun) or SSPRK3 (Shu-Osher) step of ``u' = L(u)``."""
    u1 = u + dt * L(u)
    if integrator == "euler":
        return u1
    if integrator == "ssprk2":
        return 0.5 * u + 0.5 * (u1 + dt * L(u1))
    if integrator == "ssprk3":
        u2 = 0.75 * u + 0.25 * (u1 + dt * L(u1))
        return u / 3.0 + 2.0 / 3.0 * (u2 + dt * L(u2))
    raise ValueError(f"unknown integrator {integrator!r}")


def periodic_bcs(ndim: int = 3) -> dict:
    return {f"{AXES[a]}{s}": Periodic() for a in range(ndim) for s in "-+"}


def uniform_bcs(kind, ndim: int = 3) -> dict:
    bc = parse_bc(kind)
    return {f"{AXES[a]}{s}": bc for a in range(ndim) for s in "-+"}


def advance_periodic_line(q, dx, dt, nsteps, integrator="ssprk3",
                          scheme: ReconstructionScheme = ReconstructionScheme(),
                          flux="kepes", gamma=5.0 / 3.0, source_form="vector"):
    """Fixed-step periodic 1D loop run entirely inside the kernel.

    ``q`` is ``(8, n)`` conserved; returns the advanced copy.
    """
    out = kernels.advance_periodic_1d(np.ascontiguousarray(np.asarray(q, dtype=float).T),
                                      dx, dt, int(nsteps), kernels.integrator_code(integrator),
                                      scheme.code, scheme.alpha, kernels.flux_code(flux), gamma,
                                      kernels.source_code(source_form))
    return np.ascontiguousarray(np.asarray(out).T)
