import numpy as np
import pytest

from esmhd.eos import (GasModel, NonFiniteState, NonPositiveDensity, NonPositivePressure,
                       cons_to_prim, entropy_density, entropy_flux_x, entropy_jacobian,
                       entropy_variables, physical_flux_x, prim_to_cons, wave_speeds_x)

from conftest import random_prim


def test_gamma_must_exceed_one():
    with pytest.raises(ValueError):
        GasModel(1.0)


def test_prim_cons_round_trip(rng, gas):
    w = random_prim(rng, 500)
    back = cons_to_prim(prim_to_cons(w, gas), gas)
    assert np.allclose(back, w, rtol=1e-12, atol=1e-12)


def test_total_energy_example(gas):
    w = np.array([1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0])
    q = prim_to_cons(w, gas)
    # p/(gamma-1) + rho|u|^2/2 + |B|^2/2
    assert q[4] == pytest.approx(1.5 + 0.5 + 0.5)


@pytest.mark.parametrize("slot, exc", [(0, NonPositiveDensity), (4, NonPositivePressure)])
def test_inadmissible_states_report_index(gas, slot, exc):
    w = np.tile(np.array([1.0, 0, 0, 0, 1.0, 0, 0, 0])[:, None], (1, 5))
    w[slot, 3] = -1.0 if slot == 0 else 1.0
    q = prim_to_cons(w, gas)
    if slot == 4:
        q[4, 3] = -1.0
    with pytest.raises(exc) as info:
        cons_to_prim(q, gas)
    assert info.value.index == (3,)


def test_nan_is_rejected(gas):
    q = prim_to_cons(np.array([1.0, 0, 0, 0, 1.0, 0, 0, 0]), gas)
    q[2] = np.nan
    with pytest.raises(NonFiniteState):
        cons_to_prim(q, gas)


def test_entropy_variables_are_gradient_of_entropy(rng, gas):
    # central finite differences of S(q) as the oracle
    q = prim_to_cons(random_prim(rng, 1, ratio=10.0)[:, 0], gas)
    v = entropy_variables(q, gas)
    h = 1e-6
    fd = np.array([(entropy_density(q + h * e, gas) - entropy_density(q - h * e, gas)) / (2 * h)
                   for e in np.eye(8)])
    assert np.allclose(v, fd, rtol=1e-7, atol=1e-7)


def test_entropy_jacobian_is_dq_dv(rng, gas):
    # H = dq/dv = (d^2 S/dq^2)^{-1}; oracle: finite differences of v(q)
    w = random_prim(rng, 1, ratio=10.0)[:, 0]
    q = prim_to_cons(w, gas)
    h = 1e-6
    J = np.array([(entropy_variables(q + h * e, gas) - entropy_variables(q - h * e, gas)) / (2 * h)
                  for e in np.eye(8)]).T
    H = entropy_jacobian(w, gas)
    assert np.allclose(H, H.T, atol=1e-12)
    assert np.allclose(H @ J, np.eye(8), atol=1e-5)


def test_entropy_uniform_unit_state_is_zero(gas):
    q = prim_to_cons(np.array([1.0, 0.3, 0, 0, 1.0, 0.2, 0, 0]), gas)
    assert entropy_density(q, gas) == pytest.approx(0.0, abs=1e-15)
    assert entropy_flux_x(q, gas) == pytest.approx(0.0, abs=1e-15)


def test_physical_flux_mass_component(rng, gas):
    w = random_prim(rng, 20)
    f = physical_flux_x(prim_to_cons(w, gas), gas)
    assert np.allclose(f[0], w[0] * w[1])
    assert np.allclose(f[5], 0.0)


def test_wave_speeds_ordering_and_alfven(rng, gas):
    w = random_prim(rng, 1000)
    c_a, c_s, c_f, a = wave_speeds_x(w, gas)
    assert np.all(c_s <= c_a + 1e-14) and np.all(c_a <= c_f + 1e-14)
    assert np.allclose(c_a, np.abs(w[5]) / np.sqrt(w[0]))
    # c_f^2 + c_s^2 = a^2 + |b|^2 and c_f c_s = a |b1|
    bsq = np.sum(w[5:8] ** 2, axis=0) / w[0]
    assert np.allclose(c_f ** 2 + c_s ** 2, a ** 2 + bsq, rtol=1e-12)
    assert np.allclose(c_f * c_s, a * c_a, rtol=1e-10, atol=1e-14)


def test_wave_speeds_hydro_limit(gas):
    w = np.array([1.4, 3.0, 0, 0, 1.0, 0, 0, 0])
    c_a, c_s, c_f, a = wave_speeds_x(w, GasModel(1.4))
    assert (c_a, c_s) == (0.0, 0.0)
    assert c_f == pytest.approx(1.0) and a == pytest.approx(1.0)
