import numpy as np
import pytest

from esmhd.eos import GasModel, cons_to_prim, entropy_variables_prim, prim_to_cons
from esmhd.flux import entropy_potential_prim, janhunen_source_prim, kepec_flux


def random_prim(rng, n, ratio=1e3, bscale=1.0):
    """Admissible primitive states; density and pressure spread over ``ratio``."""
    w = np.empty((8, n))
    lo, hi = -0.5 * np.log10(ratio), 0.5 * np.log10(ratio)
    w[0] = 10.0 ** rng.uniform(lo, hi, n)
    w[4] = 10.0 ** rng.uniform(lo, hi, n)
    w[1:4] = rng.normal(size=(3, n))
    w[5:8] = bscale * rng.normal(size=(3, n))
    return w


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def gas():
    return GasModel(5.0 / 3.0)


@pytest.fixture
def random_pairs(rng, gas):
    def make(n, ratio=1e3, bscale=1.0):
        wL = random_prim(rng, n, ratio, bscale)
        wR = random_prim(rng, n, ratio, bscale)
        return prim_to_cons(wL, gas), prim_to_cons(wR, gas)
    return make


def ec_scale(qL, qR, dxL, dxR, gas, form="vector"):
    """Magnitude of the terms that cancel in the entropy conservation residual."""
    wL, wR = cons_to_prim(qL, gas), cons_to_prim(qR, gas)
    vL, vR = entropy_variables_prim(wL, gas), entropy_variables_prim(wR, gas)
    f = kepec_flux(qL, qR, gas)
    s = janhunen_source_prim(wL, wR, dxL, dxR, form)
    return (np.sum(np.abs((vR - vL) * f), axis=0) + np.abs(entropy_potential_prim(wL))
            + np.abs(entropy_potential_prim(wR))
            + np.sum(np.abs(0.5 * (dxL * vL + dxR * vR) * s), axis=0))


def rzr(es):
    return np.einsum("ik...,k...,jk...->ij...", es.R, es.Z, es.R)


def relative_gap(H, es):
    gap = np.abs(H - rzr(es)).max(axis=(0, 1))
    return gap / np.abs(H).max(axis=(0, 1))


def degenerate_pairs(rng, gas, n, kind):
    wL, wR = random_prim(rng, n, ratio=10.0), random_prim(rng, n, ratio=10.0)
    if kind == "B=0":
        wL[5:8] = wR[5:8] = 0.0
    elif kind == "bperp=0":
        wL[6:8] = wR[6:8] = 0.0
    elif kind == "tiny-bperp":
        wL[6:8] *= 1e-9
        wR[6:8] *= 1e-9
    elif kind == "b1=0":
        wL[5] = wR[5] = 0.0
    elif kind == "near-triple":
        # distinct states close to a = |b1| with a very small transverse field
        wR[:] = wL * (1.0 + 1e-3 * rng.normal(size=wL.shape))
        scale = 10.0 ** rng.uniform(-8, -6, n)
        wL[6:8] *= scale
        wR[6:8] *= scale
        wL[5] = np.sqrt(gas.gamma * wL[4])
        wR[5] = np.sqrt(gas.gamma * wR[4])
    elif kind == "triple":
        # identical states with a^2 = b1^2 and no transverse field
        wR[:] = wL
        wL[6:8] = wR[6:8] = 0.0
        wL[5] = wR[5] = np.sqrt(gas.gamma * wL[4])
    return prim_to_cons(wL, gas), prim_to_cons(wR, gas)


# -- acceptance report -------------------------------------------------------

_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line, print it, then assert it."""
    def record(number, title, ok, detail):
        _ACCEPTANCE[number] = (title, bool(ok), detail)
        print(f"acceptance {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")
        assert ok, f"criterion {number} ({title}): {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(
            f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")
