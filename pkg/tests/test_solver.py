import numpy as np
import pytest

from esmhd.eos import AdmissibilityError, GasModel, prim_to_cons
from esmhd.problems import WINDTUNNEL_INFLOW, briowu_1d
from esmhd.reconstruction import ReconstructionScheme
from esmhd.solver import (Grid, Inflow, Periodic, Reflecting, Solver, ZeroGradient,
                          advance_periodic_line, field_from_prim, fill_ghosts, periodic_bcs,
                          rotate_from_x, rotate_to_x, ssp_rk_step)

from conftest import random_prim


def test_rotation_x_is_identity():
    q = np.arange(8.0)
    assert np.array_equal(rotate_to_x(q, "x"), q)


def test_rotation_y_swaps_normal_components():
    q = np.array([1.0, 1.0, 2.0, 3.0, 9.0, 4.0, 5.0, 6.0])
    assert np.array_equal(rotate_to_x(q, "y"), [1.0, 2.0, 1.0, 3.0, 9.0, 5.0, 4.0, 6.0])


def test_rotation_z_swaps_normal_components():
    q = np.array([1.0, 1.0, 2.0, 3.0, 9.0, 4.0, 5.0, 6.0])
    assert np.array_equal(rotate_to_x(q, 2), [1.0, 3.0, 2.0, 1.0, 9.0, 6.0, 5.0, 4.0])


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_rotation_is_an_involution(axis, rng):
    q = rng.normal(size=(8, 5))
    assert np.array_equal(rotate_from_x(rotate_to_x(q, axis), axis), q)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid((0, 4))
    with pytest.raises(ValueError):
        Grid((4,), lo=(1.0,), hi=(0.0,))
    g = Grid((10, 5), (0.0, 0.0), (2.0, 1.0))
    assert g.shape == (10, 5, 1) and g.ndim == 2
    assert g.spacing[:2] == (0.2, 0.2)
    assert g.padded_shape == (14, 9, 1)


def _line(n=4):
    grid = Grid((n,))
    U = np.zeros((8, n + 4, 1, 1))
    for k in range(8):
        U[k, 2:-2, 0, 0] = 10.0 * k + np.arange(1, n + 1)
    U[0, 2:-2] += 1.0
    U[4, 2:-2] += 100.0
    return grid, U


def test_periodic_ghosts_wrap():
    grid, U = _line()
    fill_ghosts(U, grid, {"x-": Periodic(), "x+": Periodic()}, GasModel())
    # ghost just left of cell 0 holds cell 3, the one just right of cell 3 holds cell 0
    assert np.array_equal(U[:, 1], U[:, 5])
    assert np.array_equal(U[:, 0], U[:, 4])
    assert np.array_equal(U[:, 6], U[:, 2])
    assert np.array_equal(U[:, 7], U[:, 3])


def test_zero_gradient_ghosts_copy_nearest():
    grid, U = _line()
    fill_ghosts(U, grid, {"x-": ZeroGradient(), "x+": "outflow"}, GasModel())
    assert np.array_equal(U[:, 0], U[:, 2]) and np.array_equal(U[:, 1], U[:, 2])
    assert np.array_equal(U[:, 6], U[:, 5]) and np.array_equal(U[:, 7], U[:, 5])


def test_reflecting_ghosts_mirror_and_flip_normal_velocity():
    grid, U = _line()
    fill_ghosts(U, grid, {"x-": Reflecting(), "x+": Reflecting()}, GasModel())
    for ghost, mirror in ((1, 2), (0, 3), (6, 5), (7, 4)):
        assert U[1, ghost] == -U[1, mirror]
        keep = [0, 2, 3, 4, 5, 6, 7]
        assert np.array_equal(U[keep, ghost], U[keep, mirror])


def test_inflow_ghosts_hold_fixed_state():
    grid, U = _line()
    gas = GasModel(1.4)
    fill_ghosts(U, grid, {"x-": Inflow(WINDTUNNEL_INFLOW), "x+": ZeroGradient()}, gas)
    q = prim_to_cons(np.array(WINDTUNNEL_INFLOW), gas)
    assert np.array_equal(U[:, 0, 0, 0], q) and np.array_equal(U[:, 1, 0, 0], q)


def test_unpaired_periodic_is_rejected():
    grid, U = _line()
    with pytest.raises(ValueError):
        fill_ghosts(U, grid, {"x-": Periodic(), "x+": ZeroGradient()}, GasModel())


def _windtunnel_solver(nx, ny, cfl=0.8, dt_fixed=None):
    grid = Grid((nx, ny), (0.0, 0.0), (3.0, 1.0))
    gas = GasModel(1.4)
    bcs = {"x-": Inflow(WINDTUNNEL_INFLOW), "x+": ZeroGradient(), "y-": Reflecting(),
           "y+": Reflecting()}
    U = field_from_prim(np.broadcast_to(np.array(WINDTUNNEL_INFLOW)[:, None, None, None],
                                        (8,) + grid.shape), grid, gas)
    return Solver(grid, bcs, gas, cfl=cfl, dt_fixed=dt_fixed), U


def test_compute_dt_wind_tunnel_inflow():
    # u = 3, fast speed = sound speed = 1, dx = 3/240 = 0.0125
    s, U = _windtunnel_solver(240, 80)
    assert s.compute_dt(U) == pytest.approx(0.0025, rel=1e-13)


def test_compute_dt_halves_with_resolution():
    s1, U1 = _windtunnel_solver(120, 40)
    s2, U2 = _windtunnel_solver(240, 80)
    assert s2.compute_dt(U2) == pytest.approx(0.5 * s1.compute_dt(U1), rel=1e-13)


def test_fixed_dt_is_returned_verbatim():
    s, U = _windtunnel_solver(24, 8, dt_fixed=1.234e-3)
    U[:] = np.nan
    assert s.compute_dt(U) == 1.234e-3


def test_cfl_must_lie_in_unit_interval():
    with pytest.raises(ValueError):
        Solver(Grid((8,)), periodic_bcs(1), cfl=1.5)


@pytest.mark.parametrize("flux", ["kepec", "kepes", "kepes-naive"])
def test_uniform_state_is_a_fixed_point(flux):
    grid = Grid((6, 5, 4))
    gas = GasModel()
    w = np.array([1.3, 0.4, -0.2, 0.7, 2.0, 0.8, -0.5, 0.3])
    U = field_from_prim(np.broadcast_to(w[:, None, None, None], (8,) + grid.shape), grid, gas)
    s = Solver(grid, periodic_bcs(3), gas, ReconstructionScheme("minmod"), flux)
    dU = s.increment(U)
    assert np.max(np.abs(dU)) <= 1e-13
    U1 = s.step(U, s.compute_dt(U))
    assert np.max(np.abs(U1[grid.interior()] - U[grid.interior()])) <= 1e-13


@pytest.mark.parametrize("flux", ["kepec", "kepes", "kepes-naive"])
@pytest.mark.parametrize("recon", ["constant", "minmod", "linear"])
def test_hydro_components_telescope(flux, recon, rng, gas):
    n = 32
    grid = Grid((n,))
    # unlimited slopes need mild data to keep reconstructed states admissible
    w = random_prim(rng, n, ratio=2.0 if recon == "linear" else 10.0,
                    bscale=0.2 if recon == "linear" else 1.0)
    if recon == "linear":
        w[1:4] *= 0.2
    U = field_from_prim(w.reshape(8, n, 1, 1), grid, gas)
    s = Solver(grid, periodic_bcs(1), gas, ReconstructionScheme(recon), flux)
    R = s.increment(U)[grid.interior()].reshape(8, n)
    scale = np.max(np.abs(R), axis=1)
    total = R.sum(axis=1)
    assert np.all(np.abs(total[:5]) <= 1e-12 * scale[:5])


@pytest.mark.parametrize("integrator,order", [("euler", 1), ("ssprk2", 2), ("ssprk3", 3)])
def test_integrator_order_on_linear_ode(integrator, order):
    errs = []
    dts = [0.1 / 2 ** k for k in range(5)]
    for dt in dts:
        u = np.array([1.0])
        for _ in range(int(round(1.0 / dt))):
            u = ssp_rk_step(u, dt, lambda v: -v, integrator)
        errs.append(abs(u[0] - np.exp(-1.0)))
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert abs(slope - order) <= 0.1


def test_zero_rhs_leaves_state_unchanged(rng):
    u = rng.normal(size=(8, 5))
    for integ in ("euler", "ssprk2", "ssprk3"):
        assert np.allclose(ssp_rk_step(u, 0.1, np.zeros_like, integ), u, rtol=1e-15, atol=0)
    with pytest.raises(ValueError):
        ssp_rk_step(u, 0.1, np.zeros_like, "rk4")


def test_run_lands_on_end_time():
    grid = Grid((32,))
    gas = GasModel(2.0)
    x = grid.centers(0)
    U = field_from_prim(briowu_1d(x).reshape(8, 32, 1, 1), grid, gas)
    s = Solver(grid, periodic_bcs(1), gas, ReconstructionScheme("minmod"), cfl=0.8)
    times = []
    U, t, n = s.run(U, 0.05, callback=lambda t, dt, V: times.append(t))
    assert t == 0.05 and times[-1] == 0.05 and n == len(times)
    assert np.all(np.diff(times) > 0)


def test_conservation_with_periodic_kepes(gas):
    n = 64
    grid = Grid((n, n))
    x, y, _ = grid.mesh()
    w = np.zeros((8,) + grid.shape)
    w[0] = 1.0 + 0.3 * np.sin(2 * np.pi * (x + y))
    w[1] = 0.5 * np.cos(2 * np.pi * y)
    w[2] = -0.4 * np.sin(2 * np.pi * x)
    w[4] = 1.0
    w[5] = 0.3 * np.cos(2 * np.pi * y)
    w[6] = 0.7
    U = field_from_prim(w, grid, gas)
    s = Solver(grid, periodic_bcs(2), gas, ReconstructionScheme("minmod"), "kepes", cfl=0.4)
    tot0 = U[grid.interior()][:5].sum(axis=(1, 2, 3))
    U, _, _ = s.run(U, 0.05)
    tot1 = U[grid.interior()][:5].sum(axis=(1, 2, 3))
    scale = np.maximum(np.abs(tot0), np.abs(U[grid.interior()][:5]).sum(axis=(1, 2, 3)))
    assert np.all(np.abs(tot1 - tot0) <= 1e-12 * scale)


def test_solid_cells_have_zero_rhs_and_stay_fixed():
    s, U = _windtunnel_solver(30, 10, cfl=0.4)
    grid = s.grid
    X, Y, _ = grid.mesh()
    grid.solid = (X > 0.6) & (Y < 0.2)
    s = Solver(grid, s.bcs, s.gas, ReconstructionScheme("minmod"), cfl=0.4)
    dU = s.increment(U)[grid.interior()]
    assert np.all(dU[:, grid.solid] == 0.0)
    # the step face is a wall: no mass crosses it, so the cells in front of it
    # gain exactly the incoming mass flux rho*u/dx
    front = (np.abs(X - 0.55) < 0.01) & (Y < 0.2)
    assert np.allclose(dU[0][front], 1.4 * 3.0 / 0.1, rtol=1e-12)


def test_admissibility_error_carries_cell_coordinates(gas):
    grid = Grid((8, 6))
    w = np.zeros((8,) + grid.shape)
    w[0] = 1.0
    w[4] = 1.0
    U = field_from_prim(w, grid, gas)
    fill_ghosts(U, grid, periodic_bcs(2), gas)
    s = Solver(grid, periodic_bcs(2), gas)
    U[0, 2 + 5, 2 + 3, 0] = -1.0
    with pytest.raises(AdmissibilityError) as info:
        s.rhs(U)
    assert info.value.index == (5, 3, 0)


def test_kernel_loop_matches_generic_solver(gas):
    n = 40
    grid = Grid((n,))
    x = grid.centers(0)
    g2 = GasModel(2.0)
    w = briowu_1d(x)
    U = field_from_prim(w.reshape(8, n, 1, 1), grid, g2)
    scheme = ReconstructionScheme("minmod")
    s = Solver(grid, periodic_bcs(1), g2, scheme, "kepes", "ssprk3", dt_fixed=1e-3)
    V, _, _ = s.run(U.copy(), 0.02)
    q = advance_periodic_line(U[grid.interior()].reshape(8, n), 1.0 / n, 1e-3, 20, "ssprk3",
                              scheme, "kepes", 2.0)
    assert np.max(np.abs(V[grid.interior()].reshape(8, n) - q)) <= 1e-12


def test_run_without_end_time_uses_step_budget():
    grid = Grid((16,))
    gas = GasModel(2.0)
    U = field_from_prim(briowu_1d(grid.centers(0)).reshape(8, 16, 1, 1), grid, gas)
    s = Solver(grid, periodic_bcs(1), gas)
    _, t, n = s.run(U, np.inf, max_steps=7)
    assert n == 7 and np.isfinite(t) and t > 0
