"""Entropy-scaled dissipation operator and the entropy-stable flux.

The dissipation term is ``-1/2 R |Lambda| Z R^T [[v]]`` with the right
eigenvectors ``R``, diagonal scaling ``Z`` and eigenvalues ``Lambda`` all
evaluated from interface averages. Two averaging policies share the code:

``"entropy"``
    logarithmic/arithmetic mean combination that satisfies
    ``H = R Z R^T`` exactly with ``H`` the discrete entropy Jacobian.
``"naive"``
    every operator evaluated at the arithmetic mean of the primitive states.

Batched arrays keep the matrix indices in front: ``R`` has shape
``(8, 8, ...)`` and ``Z``/``lam`` have shape ``(8, ...)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eos import GasModel, NVAR, _speeds, cons_to_prim, entropy_variables_prim
from .flux import kepec_flux_means
from .means import InterfaceMeans, interface_means_prim

POLICIES = ("entropy", "naive")

# b_perp^2 below this fraction of max(a^2, b^2) counts as zero
PERP_DEGENERACY_TOL = 1.0e-28

# column slots of the eigenvector matrix
FAST_P, ALFVEN_P, SLOW_P, ENTROPY, DIVERGENCE, SLOW_M, ALFVEN_M, FAST_M = range(NVAR)

_RSQ2 = 1.0 / np.sqrt(2.0)


@dataclass
class MeanState:
    """The averaged quantities consumed by ``H``, ``R``, ``Z`` and ``Lambda``."""

    gamma: float
    rho: np.ndarray           # rho^ln (entropy) or <rho> (naive)
    rho_alfven: np.ndarray    # <rho> under the square root of the Alfven columns
    vel: np.ndarray           # (3, ...)
    vel_sq_bar: np.ndarray
    B: np.ndarray             # (3, ...)
    p_ln: np.ndarray
    p_hat: np.ndarray
    tau: np.ndarray           # 1 / (2 <beta>)
    # eigenvalue ingredients
    a2_eig: np.ndarray
    bsq_eig: np.ndarray       # (3, ...) squared Alfven components b_i^2

    @property
    def E_bar(self):
        return self.p_ln / (self.gamma - 1.0) + 0.5 * self.rho * self.vel_sq_bar


def mean_state(m: InterfaceMeans, policy: str = "entropy") -> MeanState:
    if policy == "entropy":
        return MeanState(
            gamma=m.gamma, rho=m.rho_ln, rho_alfven=m.rho_avg, vel=m.vel_avg,
            vel_sq_bar=m.vel_sq_bar, B=m.B_avg, p_ln=m.p_ln, p_hat=m.p_hat,
            tau=m.tau,
            a2_eig=m.gamma * m.p_avg * m.rho_inv_avg,
            bsq_eig=np.maximum(m.B_avg * m.B_over_rho_avg, 0.0),
        )
    if policy == "naive":
        rho = m.rho_avg
        p = m.p_avg
        return MeanState(
            gamma=m.gamma, rho=rho, rho_alfven=rho, vel=m.vel_avg,
            vel_sq_bar=np.sum(m.vel_avg ** 2, axis=0), B=m.B_avg, p_ln=p,
            p_hat=p, tau=p / rho,
            a2_eig=m.gamma * p / rho,
            bsq_eig=m.B_avg ** 2 / rho,
        )
    raise ValueError(f"unknown mean policy {policy!r}; expected one of {POLICIES}")


def discrete_entropy_jacobian(m: InterfaceMeans, policy: str = "entropy") -> np.ndarray:
    """Symmetric 8x8 matrix relating entropy-variable jumps to state jumps."""
    s = mean_state(m, policy)
    g = s.gamma
    rho, vel, B, tau, p_hat = s.rho, s.vel, s.B, s.tau, s.p_hat
    E_bar = s.E_bar
    H = np.zeros((NVAR, NVAR) + np.shape(rho))
    H[0, 0] = rho
    for i in range(3):
        H[0, 1 + i] = rho * vel[i]
        for j in range(3):
            H[1 + i, 1 + j] = rho * vel[i] * vel[j] + (p_hat if i == j else 0.0)
        H[1 + i, 4] = (E_bar + p_hat) * vel[i]
        H[4, 5 + i] = tau * B[i]
        H[5 + i, 5 + i] = tau
    H[0, 4] = E_bar
    H[4, 4] = ((s.p_ln ** 2 / (g - 1.0) + E_bar ** 2) / rho
               + p_hat * np.sum(vel ** 2, axis=0) + tau * np.sum(B ** 2, axis=0))
    for i in range(NVAR):
        for j in range(i):
            H[i, j] = H[j, i]
    return H


@dataclass
class EigenSystem:
    R: np.ndarray        # (8, 8, ...) columns ordered +f, +a, +s, E, D, -s, -a, -f
    Z: np.ndarray        # (8, ...)
    lam: np.ndarray      # (8, ...) matching the columns of R
    c_f: np.ndarray      # fast speed built from the eigenvector averages
    c_s: np.ndarray
    alpha_f: np.ndarray
    alpha_s: np.ndarray


def _alphas(a2, b1s, bps):
    """Fast/slow speeds and the rescaling parameters without cancellation."""
    bs = b1s + bps
    # t and d share the same rounding so that delta^2 - d^2 = 4 a2 bps holds
    # even when bps is below the resolution of b1s + bps
    t = a2 - b1s
    delta = np.sqrt(t * t + 2.0 * bps * (a2 + b1s) + bps * bps)
    cf2 = 0.5 * (a2 + bs + delta)
    cs2 = np.where(cf2 > 0.0, a2 * b1s / np.where(cf2 > 0.0, cf2, 1.0), 0.0)
    d = t - bps
    with np.errstate(divide="ignore", invalid="ignore"):
        # a^2 - c_s^2 and c_f^2 - a^2, each in the form free of cancellation
        num_f = np.where(d >= 0.0, 0.5 * (d + delta), 2.0 * a2 * bps / (delta - d))
        num_s = np.where(d <= 0.0, 0.5 * (delta - d), 2.0 * a2 * bps / (delta + d))
        degenerate = ~(delta > 1e-14 * (a2 + bs))
        af = np.where(degenerate, _RSQ2, np.sqrt(np.maximum(num_f, 0.0) / delta))
        as_ = np.where(degenerate, _RSQ2, np.sqrt(np.maximum(num_s, 0.0) / delta))
    return np.sqrt(cf2), np.sqrt(np.maximum(cs2, 0.0)), af, as_


def eigensystem(m: InterfaceMeans, policy: str = "entropy") -> EigenSystem:
    s = mean_state(m, policy)
    g = s.gamma
    rho = s.rho
    u, v, w = s.vel
    sq_rho = np.sqrt(rho)
    a2 = g * s.p_hat / rho
    a_ln = np.sqrt(g * s.p_ln / rho)
    a_beta = np.sqrt(g * s.tau)
    b = s.B / sq_rho
    b1s = b[0] ** 2
    bps = b[1] ** 2 + b[2] ** 2
    b_perp = np.sqrt(bps)
    perp_degenerate = bps <= PERP_DEGENERACY_TOL * np.maximum(a2, b1s + bps)
    with np.errstate(divide="ignore", invalid="ignore"):
        beta2 = np.where(perp_degenerate, _RSQ2, b[1] / b_perp)
        beta3 = np.where(perp_degenerate, _RSQ2, b[2] / b_perp)
    sig = np.where(b[0] >= 0.0, 1.0, -1.0)
    c_f, c_s, af, as_ = _alphas(a2, b1s, bps)

    usq2 = 0.5 * s.vel_sq_bar
    enth = a_ln ** 2 / (g - 1.0)
    vb = v * beta2 + w * beta3
    sq_ra = rho * np.sqrt(s.rho_alfven)

    R = np.zeros((NVAR, NVAR) + np.shape(rho))
    for col, pm in ((FAST_P, 1.0), (FAST_M, -1.0)):
        R[0, col] = af * rho
        R[1, col] = af * rho * (u + pm * c_f)
        R[2, col] = rho * (af * v - pm * as_ * c_s * beta2 * sig)
        R[3, col] = rho * (af * w - pm * as_ * c_s * beta3 * sig)
        R[4, col] = (af * rho * (usq2 + enth) + a_beta * as_ * rho * b_perp
                     + pm * af * c_f * rho * u - pm * as_ * c_s * rho * sig * vb)
        R[6, col] = as_ * a_beta * beta2 * sq_rho
        R[7, col] = as_ * a_beta * beta3 * sq_rho
    for col, pm in ((SLOW_P, 1.0), (SLOW_M, -1.0)):
        R[0, col] = as_ * rho
        R[1, col] = as_ * rho * (u + pm * c_s)
        R[2, col] = rho * (as_ * v + pm * af * c_f * beta2 * sig)
        R[3, col] = rho * (as_ * w + pm * af * c_f * beta3 * sig)
        R[4, col] = (as_ * rho * (usq2 + enth) - a_beta * af * rho * b_perp
                     + pm * as_ * c_s * rho * u + pm * af * c_f * rho * sig * vb)
        R[6, col] = -af * a_beta * beta2 * sq_rho
        R[7, col] = -af * a_beta * beta3 * sq_rho
    for col, pm in ((ALFVEN_P, 1.0), (ALFVEN_M, -1.0)):
        R[2, col] = pm * sq_ra * beta3
        R[3, col] = -pm * sq_ra * beta2
        R[4, col] = -pm * sq_ra * (beta2 * w - beta3 * v)
        R[6, col] = -rho * beta3
        R[7, col] = rho * beta2
    R[0, ENTROPY] = 1.0
    R[1, ENTROPY] = u
    R[2, ENTROPY] = v
    R[3, ENTROPY] = w
    R[4, ENTROPY] = usq2
    R[4, DIVERGENCE] = s.B[0]
    R[5, DIVERGENCE] = 1.0

    Z = np.empty((NVAR,) + np.shape(rho))
    Z[[FAST_P, SLOW_P, SLOW_M, FAST_M]] = 1.0 / (2.0 * g * rho)
    Z[[ALFVEN_P, ALFVEN_M]] = s.tau / (2.0 * rho ** 2)
    Z[ENTROPY] = rho * (g - 1.0) / g
    Z[DIVERGENCE] = s.tau

    # eigenvalues from separately averaged speeds
    ca_e, cs_e, cf_e, _ = _speeds(s.a2_eig, s.bsq_eig[0], np.sum(s.bsq_eig, axis=0))
    lam = np.empty_like(Z)
    lam[FAST_P] = u + cf_e
    lam[ALFVEN_P] = u + ca_e
    lam[SLOW_P] = u + cs_e
    lam[ENTROPY] = u
    lam[DIVERGENCE] = u
    lam[SLOW_M] = u - cs_e
    lam[ALFVEN_M] = u - ca_e
    lam[FAST_M] = u - cf_e
    return EigenSystem(R=R, Z=Z, lam=lam, c_f=c_f, c_s=c_s, alpha_f=af, alpha_s=as_)


def dissipation_term(es: EigenSystem, dv: np.ndarray, eps: float = 0.0) -> np.ndarray:
    """``R |Lambda| Z R^T dv`` for batched eigensystems."""
    absl = np.abs(es.lam)
    if eps > 0.0:
        absl = np.maximum(absl, eps)
    t = np.einsum("ji...,j...->i...", es.R, dv)
    t *= absl * es.Z
    return np.einsum("ij...,j...->i...", es.R, t)


def _pair(qL, qR, gas):
    wL, wR = cons_to_prim(qL, gas), cons_to_prim(qR, gas)
    m = interface_means_prim(wL, wR, gas.gamma)
    dv = entropy_variables_prim(wR, gas) - entropy_variables_prim(wL, gas)
    return m, dv


def kepes_flux(qL, qR, gas: GasModel, policy: str = "entropy", eps: float = 0.0) -> np.ndarray:
    """Entropy-conservative flux plus the matrix dissipation term."""
    m, dv = _pair(qL, qR, gas)
    return kepec_flux_means(m) - 0.5 * dissipation_term(eigensystem(m, policy), dv, eps)


def kepes_flux_naive(qL, qR, gas: GasModel) -> np.ndarray:
    return kepes_flux(qL, qR, gas, policy="naive")


def entropy_dissipation_rate(qL, qR, gas: GasModel, policy: str = "entropy") -> np.ndarray:
    """Entropy production ``-1/2 [[v]]^T R |Lambda| Z R^T [[v]]`` at an interface."""
    m, dv = _pair(qL, qR, gas)
    es = eigensystem(m, policy)
    t = np.einsum("ji...,j...->i...", es.R, dv)
    return -0.5 * np.sum(np.abs(es.lam) * es.Z * t * t, axis=0)
