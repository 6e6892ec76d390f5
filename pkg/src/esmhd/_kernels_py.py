"""Pure numpy implementation of the pencil kernels.

Mirrors the compiled extension one-to-one; :mod:`esmhd.kernels` picks
whichever is available.
"""
from __future__ import annotations

import numpy as np

from .dissipation import dissipation_term, eigensystem
from .eos import (NonPositiveDensity, NonPositivePressure, GasModel, PRES, RHO,
                  cons_to_prim, entropy_variables_prim)
from .flux import SOURCE_FORMS, janhunen_source_prim, kepec_flux_means
from .means import interface_means_prim
from .reconstruction import KINDS, ReconstructionScheme, reconstruct

FLUX_KINDS = ("kepec", "kepes", "kepes-naive")
INTEGRATORS = ("euler", "ssprk2", "ssprk3")


def _check_faces(W, side):
    for slot, exc, what in ((RHO, NonPositiveDensity, "density"),
                            (PRES, NonPositivePressure, "pressure")):
        bad = ~(W[slot] > 0.0)
        if bad.any():
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            # report the cell whose reconstruction produced the face value
            cell = idx[-1] + (1 if side == "left" else 2)
            raise exc(f"non-positive reconstructed {what}", index=idx[:-1] + (cell,),
                      value=float(W[slot][idx]))


def interface_fluxes(WL, WR, flux: int, gamma: float):
    """Numerical flux for primitive face states with components leading."""
    m = interface_means_prim(WL, WR, gamma)
    F = kepec_flux_means(m)
    if flux > 0:
        gas = GasModel(gamma)
        dv = entropy_variables_prim(WR, gas) - entropy_variables_prim(WL, gas)
        policy = "entropy" if flux == 1 else "naive"
        F -= 0.5 * dissipation_term(eigensystem(m, policy), dv)
    return F


def pencil_rhs(Q, dx: float, recon: int, alpha: float, flux: int, gamma: float,
               source: int = 0):
    """Semi-discrete update of every interior cell of a stack of pencils.

    ``Q`` holds conserved states with shape ``(npencil, n + 4, 8)`` (two
    ghost cells per side, already filled). Returns ``(npencil, n, 8)``.
    ``source`` indexes :data:`esmhd.flux.SOURCE_FORMS`.
    """
    Q = np.asarray(Q, dtype=float)
    gas = GasModel(gamma)
    W = cons_to_prim(np.moveaxis(Q, -1, 0), gas)
    scheme = ReconstructionScheme(KINDS[recon], alpha)
    WL, WR = reconstruct(W, scheme, axis=-1)
    if recon != 0:
        _check_faces(WL, "left")
        _check_faces(WR, "right")
    F = interface_fluxes(WL, WR, flux, gamma)
    S = janhunen_source_prim(WL, WR, dx, dx, SOURCE_FORMS[source])
    rhs = -(F[..., 1:] - F[..., :-1]) / dx + 0.5 * (S[..., 1:] + S[..., :-1])
    return np.ascontiguousarray(np.moveaxis(rhs, 0, -1))


def _wrap(q):
    return np.concatenate([q[-2:], q, q[:2]], axis=0)[None]


def advance_periodic_1d(q, dx: float, dt: float, nsteps: int, integrator: int,
                        recon: int, alpha: float, flux: int, gamma: float, source: int = 0):
    """Fixed-step time loop for a 1D periodic line of ``(n, 8)`` conserved states."""
    q = np.array(q, dtype=float)

    def L(u):
        return pencil_rhs(_wrap(u), dx, recon, alpha, flux, gamma, source)[0]

    for _ in range(int(nsteps)):
        if integrator == 0:
            q = q + dt * L(q)
        elif integrator == 1:
            q1 = q + dt * L(q)
            q = 0.5 * q + 0.5 * (q1 + dt * L(q1))
        else:
            q1 = q + dt * L(q)
            q2 = 0.75 * q + 0.25 * (q1 + dt * L(q1))
            q = q / 3.0 + 2.0 / 3.0 * (q2 + dt * L(q2))
    return q
