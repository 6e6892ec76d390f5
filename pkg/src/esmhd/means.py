"""Two-state averages: jumps, arithmetic means and the logarithmic mean.

All the averages that the entropy-conservative flux, the interface source and
the dissipation operator consume are computed once per interface and packed
into an :class:`InterfaceMeans`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eos import BX, BZ, PRES, RHO, VX, VZ, GasModel, cons_to_prim

# below this value of f^2 the truncated series is accurate to < 1.2e-17
_SERIES_SWITCH = 1.0e-4
# above this value (ratio > 3) atanh near +-1 loses digits; the plain
# difference of logarithms is well conditioned there
_DIRECT_SWITCH = 0.25


def log_mean(a, b):
    """Logarithmic mean ``(a - b) / (ln a - ln b)`` of positive numbers.

    Evaluated through ``f = (a - b) / (a + b)``:
    the mean is ``(a + b) / 2 / F`` with ``F = atanh(f) / f``, replaced by its
    four-term series when ``f`` is small. Ratios beyond 3 use the definition
    directly.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~(a > 0.0)) or np.any(~(b > 0.0)):
        raise ValueError("log_mean requires strictly positive arguments")
    f = (a - b) / (a + b)
    u = f * f
    small = u < _SERIES_SWITCH
    with np.errstate(divide="ignore", invalid="ignore"):
        F_direct = np.arctanh(f) / f
    F_series = 1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0
    F = np.where(small, F_series, F_direct)
    out = 0.5 * (a + b) / F
    wide = u >= _DIRECT_SWITCH
    if np.any(wide):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(wide, (a - b) / (np.log(a) - np.log(b)), out)
    return out if out.ndim else float(out)


def jump(xL, xR):
    return np.asarray(xR) - np.asarray(xL)


def avg(xL, xR):
    return 0.5 * (np.asarray(xL) + np.asarray(xR))


def jump_properties_check(a, b):
    """Residuals of the product and square rules of the jump operator.

    ``a`` and ``b`` are ``(left, right)`` pairs. Returns
    ``([[ab]] - (<a>[[b]] + <b>[[a]]), [[a^2]] - 2<a>[[a]])``.
    """
    aL, aR = (np.asarray(x, dtype=float) for x in a)
    bL, bR = (np.asarray(x, dtype=float) for x in b)
    r_prod = (aR * bR - aL * bL) - (avg(aL, aR) * jump(bL, bR) + avg(bL, bR) * jump(aL, aR))
    r_sq = (aR * aR - aL * aL) - 2.0 * avg(aL, aR) * jump(aL, aR)
    return r_prod, r_sq


@dataclass
class InterfaceMeans:
    """Averages of a left/right primitive pair (arrays broadcast over interfaces).

    Vector-valued entries carry their 3 components on the leading axis.
    """

    gamma: float
    rho_avg: np.ndarray
    rho_jump: np.ndarray
    rho_ln: np.ndarray
    vel_avg: np.ndarray          # <u>, <v>, <w>
    vel_jump: np.ndarray
    vel_sq_avg: np.ndarray       # <u^2>, <v^2>, <w^2>
    beta_avg: np.ndarray
    beta_jump: np.ndarray
    beta_ln: np.ndarray
    beta_sq_avg: np.ndarray
    B_avg: np.ndarray            # <B1>, <B2>, <B3>
    B_jump: np.ndarray
    B_sq_avg: np.ndarray         # <B1^2>, <B2^2>, <B3^2>
    B1B_avg: np.ndarray          # <B1 B1>, <B1 B2>, <B1 B3>
    uB_sq_avg: np.ndarray        # <u B1^2>, <u B2^2>, <u B3^2>
    velB1B_avg: np.ndarray       # <u B1 B1>, <v B1 B2>, <w B1 B3>
    betaB_avg: np.ndarray        # <beta B_i>
    p_avg: np.ndarray            # arithmetic mean of the pressure
    rho_inv_avg: np.ndarray      # <1/rho>
    B_over_rho_avg: np.ndarray   # <B_i / rho>

    @property
    def p_ln(self):
        return self.rho_ln / (2.0 * self.beta_ln)

    @property
    def p_hat(self):
        """``<rho> / (2 <beta>)``, the pressure average of the momentum flux."""
        return self.rho_avg / (2.0 * self.beta_avg)

    @property
    def tau(self):
        return 1.0 / (2.0 * self.beta_avg)

    @property
    def vel_sq_bar(self):
        """``2 |<u>|^2 - <|u|^2>``."""
        return 2.0 * np.sum(self.vel_avg ** 2, axis=0) - np.sum(self.vel_sq_avg, axis=0)

    @property
    def beta_sq_bar(self):
        return 2.0 * self.beta_avg ** 2 - self.beta_sq_avg

    @property
    def E_bar(self):
        return self.p_ln / (self.gamma - 1.0) + 0.5 * self.rho_ln * self.vel_sq_bar


def interface_means_prim(wL, wR, gamma: float) -> InterfaceMeans:
    wL = np.asarray(wL, dtype=float)
    wR = np.asarray(wR, dtype=float)
    rL, rR = wL[RHO], wR[RHO]
    bL = 0.5 * rL / wL[PRES]
    bR = 0.5 * rR / wR[PRES]
    vL, vR = wL[VX:VZ + 1], wR[VX:VZ + 1]
    BL, BR = wL[BX:BZ + 1], wR[BX:BZ + 1]
    return InterfaceMeans(
        gamma=float(gamma),
        rho_avg=avg(rL, rR),
        rho_jump=rR - rL,
        rho_ln=log_mean(rL, rR),
        vel_avg=avg(vL, vR),
        vel_jump=vR - vL,
        vel_sq_avg=avg(vL * vL, vR * vR),
        beta_avg=avg(bL, bR),
        beta_jump=bR - bL,
        beta_ln=log_mean(bL, bR),
        beta_sq_avg=avg(bL * bL, bR * bR),
        B_avg=avg(BL, BR),
        B_jump=BR - BL,
        B_sq_avg=avg(BL * BL, BR * BR),
        B1B_avg=avg(BL[0] * BL, BR[0] * BR),
        uB_sq_avg=avg(vL[0] * BL * BL, vR[0] * BR * BR),
        velB1B_avg=avg(vL * BL[0] * BL, vR * BR[0] * BR),
        betaB_avg=avg(bL * BL, bR * BR),
        p_avg=avg(wL[PRES], wR[PRES]),
        rho_inv_avg=avg(1.0 / rL, 1.0 / rR),
        B_over_rho_avg=avg(BL / rL, BR / rR),
    )


def interface_means(qL, qR, gas: GasModel) -> InterfaceMeans:
    """All averages for a pair of conserved states."""
    return interface_means_prim(cons_to_prim(qL, gas), cons_to_prim(qR, gas), gas.gamma)
