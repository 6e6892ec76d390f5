"""Conservation sums, entropy budget, divergence monitor and error norms.

Reductions flatten to a contiguous 1D array before ``np.sum`` so numpy's
pairwise summation is used in a fixed order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eos import BX, EN, GasModel, MX, NVAR, PRES, RHO, cons_to_prim, entropy_density
from .problems import alfven_exact
from .reconstruction import GHOST
from .solver import Grid

DIAG_COLUMNS = ("t", "dt", "mass", "momx", "momy", "momz", "energy", "entropy",
                "entropy_err", "divB_max", "rho_min", "p_min")


def _psum(a) -> float:
    return float(np.sum(np.ascontiguousarray(a, dtype=float).ravel()))


def _interior(U: np.ndarray, grid: Grid) -> np.ndarray:
    return U[grid.interior()]


def conserved_totals(U: np.ndarray, grid: Grid) -> np.ndarray:
    """Volume integrals of the 8 conserved components over Fluid cells."""
    Q = _interior(U, grid)
    fluid = grid.fluid
    return np.array([_psum(Q[k][fluid]) for k in range(NVAR)]) * grid.cell_volume


def total_entropy(U: np.ndarray, grid: Grid, gas: GasModel) -> float:
    """Sum of ``S * dV`` over Fluid cells (mathematical, decreasing convention)."""
    S = entropy_density(_interior(U, grid), gas)
    return _psum(S[grid.fluid]) * grid.cell_volume


def div_b_estimate(U: np.ndarray, grid: Grid):
    """Central-difference divergence of B on interior cells; ghosts must be filled.

    Returns ``(per-cell array, max |div B| over Fluid cells)``.
    """
    div = np.zeros(grid.shape)
    for a in grid.active:
        B = U[BX + a]
        lo = [slice(GHOST, -GHOST) if grid.shape[b] > 1 else slice(None) for b in range(3)]
        hi = list(lo)
        lo[a] = slice(GHOST - 1, -GHOST - 1)
        hi[a] = slice(GHOST + 1, None if GHOST == 1 else -GHOST + 1)
        div += (B[tuple(hi)] - B[tuple(lo)]) / (2.0 * grid.spacing[a])
    vals = np.abs(div)[grid.fluid]
    return div, float(vals.max()) if vals.size else 0.0


def alfven_error(B2, x, t: float, norm: str = "L1", dx: float | None = None) -> float:
    """L1 (sum |e| dx) or L2 (sqrt(sum e^2 dx)) error of B2 against the exact wave."""
    x = np.asarray(x, dtype=float)
    e = np.asarray(B2, dtype=float) - alfven_exact(x, t)[6]
    if dx is None:
        dx = 1.0 / x.size
    if norm == "L1":
        return _psum(np.abs(e)) * dx
    if norm == "L2":
        return float(np.sqrt(_psum(e * e) * dx))
    raise ValueError(f"norm must be 'L1' or 'L2', got {norm!r}")


def eoc(errors) -> np.ndarray:
    """Observed orders ``log2(e_k / e_{k+1})`` for a grid-doubling sequence."""
    e = np.asarray(errors, dtype=float)
    return np.log2(e[:-1] / e[1:])


@dataclass
class RunDiagnostics:
    """Time series of global monitors, one row per recorded step."""

    grid: Grid
    gas: GasModel
    rows: list = field(default_factory=list)
    entropy0: float | None = None

    def record(self, t: float, dt: float, U: np.ndarray) -> tuple:
        tot = conserved_totals(U, self.grid)
        S = total_entropy(U, self.grid, self.gas)
        if self.entropy0 is None:
            self.entropy0 = S
        w = cons_to_prim(_interior(U, self.grid), self.gas)
        fluid = self.grid.fluid
        _, divb = div_b_estimate(U, self.grid)
        row = (float(t), float(dt), tot[RHO], tot[MX], tot[MX + 1], tot[MX + 2], tot[EN], S,
               abs(S - self.entropy0), divb, float(w[RHO][fluid].min()),
               float(w[PRES][fluid].min()))
        if self.rows and not row[0] > self.rows[-1][0]:
            raise ValueError("diagnostic rows must be strictly increasing in t")
        self.rows.append(row)
        return row

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(-1, len(DIAG_COLUMNS))

    def column(self, name: str) -> np.ndarray:
        return self.as_array()[:, DIAG_COLUMNS.index(name)]
