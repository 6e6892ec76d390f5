"""Kinetic-energy-preserving entropy-conservative flux and the interface
discretization of the divergence-cleaning source term."""
from __future__ import annotations

import numpy as np

from .eos import (BX, BZ, PRES, RHO, VX, GasModel, cons_to_prim,
                  entropy_variables_prim, NVAR)
from .means import InterfaceMeans, interface_means_prim

# relative size of <dx beta B_i> below which the source ratio falls back to 1/<dx>
SOURCE_DEGENERACY_TOL = 1.0e-12


def kepec_flux_means(m: InterfaceMeans) -> np.ndarray:
    """Entropy-conservative flux from precomputed interface averages."""
    g = m.gamma
    u, v, w = m.vel_avg
    B1, B2, B3 = m.B_avg
    B1B1, B1B2, B1B3 = m.B1B_avg
    uB1B1, vB1B2, wB1B3 = m.velB1B_avg
    Bsq_avg = np.sum(m.B_sq_avg, axis=0)
    p_hat = m.p_hat
    mass = m.rho_ln * u

    f = np.empty((NVAR,) + np.shape(u))
    f[0] = mass
    f[1] = mass * u + p_hat + 0.5 * Bsq_avg - B1B1
    f[2] = mass * v - B1B2
    f[3] = mass * w - B1B3
    f[4] = (0.5 * u * (m.rho_ln / (m.beta_ln * (g - 1.0)) + m.rho_avg / m.beta_avg)
            + 0.5 * mass * m.vel_sq_bar
            + 0.5 * u * (Bsq_avg + 2.0 * (B2 * B2 + B3 * B3))
            - u * B1B1 - v * B1B2 - w * B1B3
            - v * B1 * B2 - w * B1 * B3
            + uB1B1 + vB1B2 + wB1B3
            - 0.5 * np.sum(m.uB_sq_avg, axis=0))
    f[5] = 0.0
    f[6] = u * B2 - v * B1
    f[7] = u * B3 - w * B1
    return f


def kepec_flux(qL, qR, gas: GasModel) -> np.ndarray:
    wL, wR = cons_to_prim(qL, gas), cons_to_prim(qR, gas)
    return kepec_flux_means(interface_means_prim(wL, wR, gas.gamma))


SOURCE_FORMS = ("vector", "componentwise")


def janhunen_source_prim(wL, wR, dxL, dxR, form: str = "vector") -> np.ndarray:
    """Interface source contribution ``s_{i+1/2}`` for primitive states.

    Only the induction components are nonzero; each cell receives half of
    the source from each of its two faces. Both forms satisfy

        <dx v>.s = -2 [[B1]] <beta> <u>.<B>

    which is what cancels the magnetic part of the entropy potential jump.

    ``"componentwise"`` scales each component separately by
    ``<beta><B_i> / <dx beta B_i>``; this ratio is unbounded whenever a single
    field component changes sign across a jump in ``beta``.
    ``"vector"`` (default) uses ``<u>/<dx>`` plus the smallest correction
    along ``<dx beta B>`` that restores the identity, singular only when the
    whole averaged vector ``<dx beta B>`` vanishes. Both coincide when
    ``beta`` is continuous across the face.
    """
    wL = np.asarray(wL, dtype=float)
    wR = np.asarray(wR, dtype=float)
    dxL = np.asarray(dxL, dtype=float)
    dxR = np.asarray(dxR, dtype=float)
    bL = 0.5 * wL[RHO] / wL[PRES]
    bR = 0.5 * wR[RHO] / wR[PRES]
    BL, BR = wL[BX:BZ + 1], wR[BX:BZ + 1]
    beta_avg = 0.5 * (bL + bR)
    dx_avg = 0.5 * (dxL + dxR)
    vel_avg = 0.5 * (wL[VX:VX + 3] + wR[VX:VX + 3])
    B_avg = 0.5 * (BL + BR)
    dxbB = 0.5 * (dxL * bL * BL + dxR * bR * BR)
    s = np.zeros(np.shape(wL))
    dB1 = BR[0] - BL[0]
    if form == "componentwise":
        scale = SOURCE_DEGENERACY_TOL * dx_avg * beta_avg * np.maximum(
            np.maximum(np.abs(BL), np.abs(BR)), 1e-300)
        degenerate = np.abs(dxbB) <= scale
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(degenerate, 1.0 / dx_avg, beta_avg * B_avg / dxbB)
        s[BX:BZ + 1] = -dB1 * vel_avg * ratio
        return s
    if form != "vector":
        raise ValueError(f"unknown source form {form!r}; expected one of {SOURCE_FORMS}")
    norm2 = np.sum(dxbB * dxbB, axis=0)
    Bmax = np.maximum(np.sqrt(np.maximum(np.sum(BL * BL, axis=0), np.sum(BR * BR, axis=0))), 1e-300)
    degenerate = norm2 <= (SOURCE_DEGENERACY_TOL * dx_avg * beta_avg * Bmax) ** 2
    target = beta_avg * np.sum(vel_avg * B_avg, axis=0) - np.sum(vel_avg * dxbB, axis=0) / dx_avg
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(degenerate, 0.0, target / np.where(degenerate, 1.0, norm2))
    s[BX:BZ + 1] = -dB1 * (vel_avg / dx_avg + lam * dxbB)
    return s


def janhunen_source_interface(qL, qR, dxL, dxR, gas: GasModel, form: str = "vector") -> np.ndarray:
    return janhunen_source_prim(cons_to_prim(qL, gas), cons_to_prim(qR, gas), dxL, dxR, form)


def entropy_potential_prim(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    rho, u, p = w[RHO], w[VX], w[PRES]
    B = w[BX:BZ + 1]
    udotB = np.sum(w[VX:VX + 3] * B, axis=0)
    return rho * u + rho / p * (0.5 * u * np.sum(B * B, axis=0) - w[BX] * udotB)


def ec_condition_residual(qL, qR, dxL, dxR, gas: GasModel, flux=None,
                          form: str = "vector") -> np.ndarray:
    """Discrete entropy-conservation residual of an interface flux.

    Returns ``[[v]].f - [[phi]] + <dx v>.s`` where ``phi = v.f - F`` is the
    entropy potential and ``s`` the interface source. ``flux`` defaults to
    :func:`kepec_flux`; pass another callable ``(qL, qR, gas)`` to audit it.
    """
    wL, wR = cons_to_prim(qL, gas), cons_to_prim(qR, gas)
    vL = entropy_variables_prim(wL, gas)
    vR = entropy_variables_prim(wR, gas)
    fhat = (flux or kepec_flux)(qL, qR, gas)
    s = janhunen_source_prim(wL, wR, dxL, dxR, form)
    dv = vR - vL
    dphi = entropy_potential_prim(wR) - entropy_potential_prim(wL)
    dxv = 0.5 * (np.asarray(dxL) * vL + np.asarray(dxR) * vR)
    return np.sum(dv * fhat, axis=0) - dphi + np.sum(dxv * s, axis=0)
