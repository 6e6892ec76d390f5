"""Pointwise ideal-MHD state algebra for an ideal gas.

State vectors carry their 8 components on the leading axis, so every routine
accepts a single state of shape ``(8,)`` or a batch of shape ``(8, ...)``.

Conserved layout: ``(rho, rho*u, rho*v, rho*w, E, B1, B2, B3)``.
Primitive layout: ``(rho, u, v, w, p, B1, B2, B3)``.

Entropy follows the mathematical (decreasing) convention,
``S = -rho * s / (gamma - 1)`` with ``s = ln p - gamma ln rho``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NVAR = 8

# component slots shared by the conserved and primitive layouts
RHO, MX, MY, MZ, EN, BX, BY, BZ = range(NVAR)
VX, VY, VZ, PRES = MX, MY, MZ, EN


class AdmissibilityError(ValueError):
    """A state left the admissible set (rho > 0, p > 0, finite).

    ``index`` is the offending cell index (a tuple) when known, else None.
    """

    quantity = "state"

    def __init__(self, message: str, index=None, value=None):
        super().__init__(message)
        self.index = index
        self.value = value


class NonPositiveDensity(AdmissibilityError):
    quantity = "density"


class NonPositivePressure(AdmissibilityError):
    quantity = "pressure"


class NonFiniteState(AdmissibilityError):
    quantity = "finite"


@dataclass(frozen=True)
class GasModel:
    """Calorically perfect gas with adiabatic index ``gamma``."""

    gamma: float = 5.0 / 3.0

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma <= 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")


def _first_bad(mask: np.ndarray):
    idx = np.argwhere(mask)
    if idx.size == 0:
        return None
    return tuple(int(i) for i in idx[0])


def check_finite(a: np.ndarray) -> None:
    a = np.asarray(a, dtype=float)
    bad = ~np.isfinite(a)
    if bad.any():
        where = _first_bad(bad.any(axis=0)) if a.ndim > 1 else None
        raise NonFiniteState("non-finite state component", index=where)


def prim_to_cons(w, gas: GasModel) -> np.ndarray:
    """Primitive ``(rho, u, v, w, p, B)`` to conserved variables."""
    w = np.asarray(w, dtype=float)
    check_finite(w)
    rho = w[RHO]
    vel = w[VX:VZ + 1]
    B = w[BX:BZ + 1]
    q = np.empty_like(w)
    q[RHO] = rho
    q[MX:MZ + 1] = rho * vel
    q[EN] = (w[PRES] / (gas.gamma - 1.0) + 0.5 * rho * np.sum(vel * vel, axis=0)
             + 0.5 * np.sum(B * B, axis=0))
    q[BX:BZ + 1] = B
    return q


def pressure(q, gas: GasModel) -> np.ndarray:
    """Thermal pressure from conserved variables (no admissibility check)."""
    q = np.asarray(q, dtype=float)
    rho = q[RHO]
    mom = q[MX:MZ + 1]
    B = q[BX:BZ + 1]
    return (gas.gamma - 1.0) * (q[EN] - 0.5 * np.sum(mom * mom, axis=0) / rho
                                - 0.5 * np.sum(B * B, axis=0))


def cons_to_prim(q, gas: GasModel, index_offset=None) -> np.ndarray:
    """Conserved to primitive variables.

    Raises :class:`NonPositiveDensity` / :class:`NonPositivePressure` rather
    than flooring. ``index_offset`` is subtracted from the reported cell index
    so callers holding ghost-padded arrays can report interior coordinates.
    """
    q = np.asarray(q, dtype=float)
    check_finite(q)
    rho = q[RHO]
    bad = ~(rho > 0.0)
    if np.any(bad):
        where = _first_bad(bad) if q.ndim > 1 else None
        raise NonPositiveDensity("non-positive density",
                                 index=_shift(where, index_offset),
                                 value=float(np.min(rho)))
    w = np.empty_like(q)
    w[RHO] = rho
    w[VX:VZ + 1] = q[MX:MZ + 1] / rho
    w[PRES] = pressure(q, gas)
    w[BX:BZ + 1] = q[BX:BZ + 1]
    bad = ~(w[PRES] > 0.0)
    if np.any(bad):
        where = _first_bad(bad) if q.ndim > 1 else None
        raise NonPositivePressure("non-positive pressure",
                                  index=_shift(where, index_offset),
                                  value=float(np.min(w[PRES])))
    return w


def _shift(where, offset):
    if where is None or offset is None:
        return where
    return tuple(int(i) - int(o) for i, o in zip(where, offset))


def physical_flux_x(q, gas: GasModel) -> np.ndarray:
    """Ideal MHD flux in the x-direction."""
    w = cons_to_prim(q, gas)
    return physical_flux_x_prim(w, gas)


def physical_flux_x_prim(w, gas: GasModel) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    rho, u, v, ww, p = w[RHO], w[VX], w[VY], w[VZ], w[PRES]
    B1, B2, B3 = w[BX], w[BY], w[BZ]
    g = gas.gamma
    B2sum = B1 * B1 + B2 * B2 + B3 * B3
    usq = u * u + v * v + ww * ww
    f = np.empty_like(w)
    f[0] = rho * u
    f[1] = rho * u * u + p + 0.5 * B2sum - B1 * B1
    f[2] = rho * u * v - B1 * B2
    f[3] = rho * u * ww - B1 * B3
    f[4] = (0.5 * rho * u * usq + g * u * p / (g - 1.0)
            + u * (B2 * B2 + B3 * B3) - v * B1 * B2 - ww * B1 * B3)
    f[5] = 0.0
    f[6] = u * B2 - v * B1
    f[7] = u * B3 - ww * B1
    return f


def specific_entropy(rho, p, gas: GasModel):
    return np.log(p) - gas.gamma * np.log(rho)


def entropy_density(q, gas: GasModel) -> np.ndarray:
    """Mathematical entropy ``S = -rho s / (gamma - 1)``."""
    w = cons_to_prim(q, gas)
    return -w[RHO] * specific_entropy(w[RHO], w[PRES], gas) / (gas.gamma - 1.0)


def entropy_flux_x(q, gas: GasModel) -> np.ndarray:
    w = cons_to_prim(q, gas)
    S = -w[RHO] * specific_entropy(w[RHO], w[PRES], gas) / (gas.gamma - 1.0)
    return w[VX] * S


def entropy_potential_x(q, gas: GasModel) -> np.ndarray:
    """x-direction entropy potential ``v.f - F``."""
    w = cons_to_prim(q, gas)
    rho, u, p = w[RHO], w[VX], w[PRES]
    B = w[BX:BZ + 1]
    udotB = np.sum(w[VX:VZ + 1] * B, axis=0)
    return rho * u + rho / p * (0.5 * u * np.sum(B * B, axis=0) - w[BX] * udotB)


def entropy_variables(q, gas: GasModel) -> np.ndarray:
    """Gradient of ``S`` with respect to the conserved variables."""
    return entropy_variables_prim(cons_to_prim(q, gas), gas)


def entropy_variables_prim(w, gas: GasModel) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    g = gas.gamma
    rho, p = w[RHO], w[PRES]
    beta = 0.5 * rho / p
    vel = w[VX:VZ + 1]
    s = specific_entropy(rho, p, gas)
    v = np.empty_like(w)
    v[0] = (g - s) / (g - 1.0) - beta * np.sum(vel * vel, axis=0)
    v[1:4] = 2.0 * beta * vel
    v[4] = -2.0 * beta
    v[5:8] = 2.0 * beta * w[BX:BZ + 1]
    return v


def wave_speeds_x(w, gas: GasModel):
    """Alfven, slow, fast and sound speeds normal to x for primitive ``w``.

    Returns ``(c_a, c_s, c_f, a)``. The fast/slow pair uses the
    sum/difference-of-roots form, which never loses the slow speed to
    cancellation.
    """
    w = np.asarray(w, dtype=float)
    rho = w[RHO]
    a2 = gas.gamma * w[PRES] / rho
    b1sq = w[BX] ** 2 / rho
    bsq = (w[BX] ** 2 + w[BY] ** 2 + w[BZ] ** 2) / rho
    return _speeds(a2, b1sq, bsq)


def _speeds(a2, b1sq, bsq):
    ab1 = np.sqrt(a2 * b1sq)
    sp = np.sqrt(np.maximum(a2 + bsq + 2.0 * ab1, 0.0))
    sm = np.sqrt(np.maximum(a2 + bsq - 2.0 * ab1, 0.0))
    c_f = 0.5 * (sp + sm)
    c_s = np.maximum(0.5 * (sp - sm), 0.0)
    c_a = np.sqrt(b1sq)
    # roundoff can leave c_s a hair above c_a at the triple point
    c_s = np.minimum(c_s, c_a)
    c_f = np.maximum(c_f, c_a)
    return c_a, c_s, c_f, np.sqrt(a2)


def fast_speed_x(w, gas: GasModel) -> np.ndarray:
    return wave_speeds_x(w, gas)[2]


def entropy_jacobian(w, gas: GasModel) -> np.ndarray:
    """Continuous ``dq/dv`` at a single primitive state, as an 8x8 matrix."""
    w = np.asarray(w, dtype=float)
    g = gas.gamma
    rho, u, v, ww, p = (float(x) for x in w[:5])
    B = np.asarray(w[5:8], dtype=float)
    vel = np.array([u, v, ww])
    a2 = g * p / rho
    usq = float(vel @ vel)
    Bsq = float(B @ B)
    E = p / (g - 1.0) + 0.5 * rho * usq + 0.5 * Bsq
    h = a2 / (g - 1.0) + 0.5 * usq
    H = np.zeros((8, 8))
    H[0, 0] = rho
    H[0, 1:4] = rho * vel
    H[0, 4] = E - 0.5 * Bsq
    H[1:4, 1:4] = rho * np.outer(vel, vel) + p * np.eye(3)
    H[1:4, 4] = rho * h * vel
    H[4, 4] = rho * h * h - a2 * p / (g - 1.0) + a2 * Bsq / g
    H[4, 5:8] = p * B / rho
    H[5:8, 5:8] = p / rho * np.eye(3)
    iu = np.triu_indices(8, 1)
    H[(iu[1], iu[0])] = H[iu]
    return H
