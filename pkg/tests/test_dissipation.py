import numpy as np
import pytest

from esmhd.dissipation import (ALFVEN_M, ALFVEN_P, DIVERGENCE, ENTROPY, FAST_M, FAST_P,
                               SLOW_M, SLOW_P, discrete_entropy_jacobian, dissipation_term,
                               eigensystem, entropy_dissipation_rate, kepes_flux,
                               kepes_flux_naive)
from esmhd.eos import (cons_to_prim, entropy_jacobian, entropy_variables_prim, prim_to_cons,
                       wave_speeds_x)
from esmhd.flux import kepec_flux
from esmhd.means import interface_means

from conftest import degenerate_pairs, random_prim, relative_gap


@pytest.mark.parametrize("kind", ["generic", "B=0", "bperp=0", "tiny-bperp", "b1=0", "near-triple",
                                  "triple"])
def test_scaled_eigenvectors_reproduce_H(rng, gas, kind):
    qL, qR = degenerate_pairs(rng, gas, 500, kind)
    m = interface_means(qL, qR, gas)
    H = discrete_entropy_jacobian(m)
    assert np.max(relative_gap(H, eigensystem(m))) < 1e-10


def test_H_is_symmetric_positive_definite(random_pairs, gas):
    qL, qR = random_pairs(200)
    H = discrete_entropy_jacobian(interface_means(qL, qR, gas))
    Hs = np.moveaxis(H, -1, 0)
    assert np.allclose(Hs, np.swapaxes(Hs, 1, 2))
    np.linalg.cholesky(Hs)


def test_H_matches_continuous_jacobian_for_equal_states(rng, gas):
    w = random_prim(rng, 5)
    q = prim_to_cons(w, gas)
    H = discrete_entropy_jacobian(interface_means(q, q, gas))
    for k in range(5):
        ref = entropy_jacobian(w[:, k], gas)
        assert np.allclose(H[..., k], ref, rtol=1e-12, atol=1e-12 * np.abs(ref).max())


def test_jump_relation_all_but_energy(random_pairs, gas):
    qL, qR = random_pairs(1000)
    m = interface_means(qL, qR, gas)
    H = discrete_entropy_jacobian(m)
    dv = entropy_variables_prim(cons_to_prim(qR, gas), gas) - \
        entropy_variables_prim(cons_to_prim(qL, gas), gas)
    Hdv = np.einsum("ij...,j...->i...", H, dv)
    dq = qR - qL
    scale = np.abs(np.einsum("ij...,j...->i...", np.abs(H), np.abs(dv))) + np.abs(dq)
    others = [0, 1, 2, 3, 5, 6, 7]
    assert np.max(np.abs(Hdv - dq)[others] / scale[others]) < 1e-12


def test_energy_component_of_jump_relation_is_second_order(rng, gas):
    w0 = random_prim(rng, 50, ratio=4.0)
    dw = 0.2 * random_prim(rng, 50, ratio=4.0) * np.array([1, 1, 1, 1, 1, 1, 1, 1.0])[:, None]
    res = []
    for h in (1.0, 0.5, 0.25):
        wL, wR = w0 - 0.5 * h * dw * w0 / np.abs(w0 + 1e-300), w0 + 0.5 * h * dw * w0 / np.abs(w0 + 1e-300)
        wL[[0, 4]] = w0[[0, 4]] * np.exp(-0.5 * h * 0.3)
        wR[[0, 4]] = w0[[0, 4]] * np.exp(0.5 * h * 0.3)
        qL, qR = prim_to_cons(wL, gas), prim_to_cons(wR, gas)
        m = interface_means(qL, qR, gas)
        dv = entropy_variables_prim(wR, gas) - entropy_variables_prim(wL, gas)
        r = np.einsum("ij...,j...->i...", discrete_entropy_jacobian(m), dv)[4] - (qR - qL)[4]
        res.append(np.max(np.abs(r)))
    orders = np.log2(np.array(res[:-1]) / np.array(res[1:]))
    assert np.all(orders > 1.8)


def test_dissipation_rate_non_positive(random_pairs, gas):
    qL, qR = random_pairs(10000)
    rate = entropy_dissipation_rate(qL, qR, gas)
    assert np.all(rate <= 0.0)
    assert np.all(rate < 0.0)     # distinct random states: strictly dissipative


def test_dissipation_rate_zero_for_equal_states(rng, gas):
    q = prim_to_cons(random_prim(rng, 10), gas)
    assert np.all(entropy_dissipation_rate(q, q, gas) == 0.0)


def test_dissipation_rate_quadratic_in_jump(rng, gas):
    w0, dw = random_prim(rng, 20, ratio=3.0), 0.01 * rng.normal(size=(8, 20))
    r = []
    for h in (1.0, 0.5):
        qL, qR = prim_to_cons(w0, gas), prim_to_cons(w0 + h * dw, gas)
        r.append(entropy_dissipation_rate(qL, qR, gas))
    assert np.allclose(r[0] / r[1], 4.0, rtol=0.05)


def test_eigenvalues_match_continuous_speeds(rng, gas):
    w = random_prim(rng, 100)
    q = prim_to_cons(w, gas)
    lam = eigensystem(interface_means(q, q, gas)).lam
    c_a, c_s, c_f, _ = wave_speeds_x(w, gas)
    u = w[1]
    expect = {FAST_P: u + c_f, ALFVEN_P: u + c_a, SLOW_P: u + c_s, ENTROPY: u, DIVERGENCE: u,
              SLOW_M: u - c_s, ALFVEN_M: u - c_a, FAST_M: u - c_f}
    for k, v in expect.items():
        assert np.allclose(lam[k], v, rtol=1e-12, atol=1e-12)


def test_kepes_reduces_to_kepec_for_equal_states(rng, gas):
    q = prim_to_cons(random_prim(rng, 50), gas)
    assert np.allclose(kepes_flux(q, q, gas), kepec_flux(q, q, gas), rtol=1e-14, atol=1e-14)


def test_naive_variant_differs_but_is_consistent(random_pairs, gas):
    qL, qR = random_pairs(50)
    assert not np.allclose(kepes_flux_naive(qL, qR, gas), kepes_flux(qL, qR, gas))
    assert np.allclose(kepes_flux_naive(qL, qL, gas), kepec_flux(qL, qL, gas))


def test_epsilon_floor_is_off_by_default_and_adds_dissipation(random_pairs, gas):
    qL, qR = random_pairs(20)
    m = interface_means(qL, qR, gas)
    es = eigensystem(m)
    dv = entropy_variables_prim(cons_to_prim(qR, gas), gas) - \
        entropy_variables_prim(cons_to_prim(qL, gas), gas)
    assert np.array_equal(dissipation_term(es, dv), dissipation_term(es, dv, eps=0.0))
    big = dissipation_term(es, dv, eps=1e3)
    assert np.all(np.sum(dv * big, axis=0) >= np.sum(dv * dissipation_term(es, dv), axis=0))
