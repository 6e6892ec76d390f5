"""Initial conditions and run presets for the standard test problems."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .eos import NVAR
from .solver import Grid, Inflow, Periodic, Reflecting, ZeroGradient, AXES

SQRT_4PI = np.sqrt(4.0 * np.pi)

PROBLEMS = ("alfven", "briowu1d", "briowu2d", "briowu-entropy", "orszag-tang",
            "rotor", "blast2d", "blast3d", "windtunnel")


@dataclass
class ProblemConfig:
    name: str
    shape: tuple
    lo: tuple
    hi: tuple
    bcs: dict
    gamma: float
    t_end: float
    init: Callable          # (x, y, z) mesh arrays -> primitive array (8, ...)
    mask: Optional[Callable] = None   # (x, y, z) -> bool Solid array
    defaults: dict = field(default_factory=dict)   # suggested solver settings

    @property
    def grid_ndim(self) -> int:
        return sum(1 for n in self.shape if n > 1)

    def grid(self) -> Grid:
        solid = None
        if self.mask is not None:
            solid = self.mask(*self._mesh())
        return Grid(self.shape, self.lo, self.hi, solid=solid)

    def _mesh(self):
        return Grid(self.shape, self.lo, self.hi).mesh()

    def initial_prim(self) -> np.ndarray:
        return self.init(*self._mesh())


def _prim(shape):
    return np.zeros((NVAR,) + np.shape(shape))


def _all(bc, ndim):
    return {f"{AXES[a]}{s}": bc for a in range(ndim) for s in "-+"}


def alfven_exact(x, t=0.0):
    """Circularly polarised Alfven wave (unit speed along x) at phase ``x - t``."""
    x = np.asarray(x, dtype=float)
    phase = 2.0 * np.pi * (x - t)
    w = _prim(x)
    w[0] = 1.0
    w[4] = 0.1
    w[2] = 0.1 * np.sin(phase)
    w[3] = 0.1 * np.cos(phase)
    w[5] = 1.0
    w[6] = w[2]
    w[7] = w[3]
    return w


BRIOWU_LEFT = (1.0, 0.0, 0.0, 0.0, 1.0, 0.75, 1.0, 0.0)
BRIOWU_RIGHT = (0.125, 0.0, 0.0, 0.0, 0.1, 0.75, -1.0, 0.0)


def briowu_1d(x, y=None, z=None, x_shock=0.5):
    left = np.asarray(x) < x_shock
    w = _prim(x)
    for k in range(NVAR):
        w[k] = np.where(left, BRIOWU_LEFT[k], BRIOWU_RIGHT[k])
    return w


def briowu_2d(x, y, z=None):
    """Shock tube along the diagonal, fields rotated by 45 degrees.

    The left state fills ``frac(x + y) < 0.5``, so the data is periodic on the
    unit square and every interface is a diagonal line (normal field continuous).
    """
    xi = np.mod(np.asarray(x) + np.asarray(y), 1.0)
    w1 = briowu_1d(xi, x_shock=0.5)
    c = s = 1.0 / np.sqrt(2.0)
    w = w1.copy()
    # normal (1, 1)/sqrt2, tangent (-1, 1)/sqrt2
    w[1] = c * w1[1] - s * w1[2]
    w[2] = s * w1[1] + c * w1[2]
    w[5] = c * w1[5] - s * w1[6]
    w[6] = s * w1[5] + c * w1[6]
    return w


def orszag_tang(x, y, z=None, gamma=5.0 / 3.0):
    w = _prim(x)
    w[0] = 1.0
    w[4] = 1.0 / gamma
    w[1] = -np.sin(2.0 * np.pi * y)
    w[2] = np.sin(2.0 * np.pi * x)
    w[5] = -np.sin(2.0 * np.pi * y) / gamma
    w[6] = np.sin(4.0 * np.pi * x) / gamma
    return w


def _taper(r, r0, r1):
    """1 inside ``r0``, 0 outside ``r1``, linear in between."""
    return np.clip((r1 - r) / (r1 - r0), 0.0, 1.0)


def rotor(x, y, z=None, r0=0.1, r1=0.115):
    dx = np.asarray(x) - 0.5
    dy = np.asarray(y) - 0.5
    r = np.sqrt(dx * dx + dy * dy)
    f = _taper(r, r0, r1)
    w = _prim(x)
    w[0] = 1.0 + 9.0 * f
    w[4] = 1.0
    w[1] = -20.0 * f * dy
    w[2] = 20.0 * f * dx
    w[5] = 5.0 / SQRT_4PI
    return w


def blast(x, y, z=None, r0=0.09, r1=0.1, spherical=False):
    r2 = np.asarray(x) ** 2 + np.asarray(y) ** 2
    if spherical:
        r2 = r2 + np.asarray(z) ** 2
    f = _taper(np.sqrt(r2), r0, r1)
    w = _prim(x)
    w[0] = 1.0
    w[4] = 0.1 + 999.9 * f
    w[5] = 100.0 / SQRT_4PI
    return w


WINDTUNNEL_INFLOW = (1.4, 3.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0)


def windtunnel_mask(x, y, z=None):
    """Solid step occupying ``x > 0.6``, ``y < 0.2``."""
    return (np.asarray(x) > 0.6) & (np.asarray(y) < 0.2)


def windtunnel(x, y, z=None):
    w = _prim(x)
    for k in range(NVAR):
        w[k] = WINDTUNNEL_INFLOW[k]
    return w


# CFL coefficient for the unsplit multi-dimensional update: the time step
# takes the minimum over directions, so the Courant numbers of all active
# directions add up and the coefficient is divided by their count.
BASE_CFL = 0.8


def make_problem(name: str, nx: Optional[int] = None, ny: Optional[int] = None,
                 nz: Optional[int] = None) -> ProblemConfig:
    """Preset for ``name`` with optional resolution overrides."""
    pc = _make_problem(name, nx, ny, nz)
    pc.defaults.setdefault("cfl", BASE_CFL / pc.grid_ndim)
    return pc


def _make_problem(name, nx, ny, nz) -> ProblemConfig:
    def res(default):
        given = (nx, ny, nz)
        return tuple(g if g is not None else d for g, d in zip(given, default))

    if name == "alfven":
        return ProblemConfig(name, res((64, 1, 1)), (0.0,), (1.0,), _all(Periodic(), 1),
                             5.0 / 3.0, 1.0, lambda x, y, z: alfven_exact(x),
                             defaults={"reconstruction": "linear", "flux": "kepes"})
    if name in ("briowu1d", "briowu-entropy"):
        t_end = 0.1 if name == "briowu1d" else 0.001
        default = (256, 1, 1) if name == "briowu1d" else (64, 1, 1)
        d = {"flux": "kepes", "reconstruction": "minmod"}
        if name == "briowu-entropy":
            d = {"flux": "kepec", "reconstruction": "constant"}
        return ProblemConfig(name, res(default), (0.0,), (1.0,), _all(Periodic(), 1), 2.0,
                             t_end, lambda x, y, z: briowu_1d(x), defaults=d)
    if name == "briowu2d":
        return ProblemConfig(name, res((128, 128, 1)), (0.0, 0.0), (1.0, 1.0),
                             _all(Periodic(), 2), 2.0, 0.001, lambda x, y, z: briowu_2d(x, y),
                             defaults={"flux": "kepec", "reconstruction": "constant"})
    if name == "orszag-tang":
        return ProblemConfig(name, res((128, 128, 1)), (0.0, 0.0), (1.0, 1.0),
                             _all(Periodic(), 2), 5.0 / 3.0, 0.5,
                             lambda x, y, z: orszag_tang(x, y),
                             defaults={"flux": "kepes", "reconstruction": "minmod"})
    if name == "rotor":
        return ProblemConfig(name, res((128, 128, 1)), (0.0, 0.0), (1.0, 1.0),
                             _all(ZeroGradient(), 2), 1.4, 0.15, lambda x, y, z: rotor(x, y),
                             defaults={"flux": "kepes", "reconstruction": "minmod"})
    if name == "blast2d":
        return ProblemConfig(name, res((128, 128, 1)), (-0.5, -0.5), (0.5, 0.5),
                             _all(Periodic(), 2), 1.4, 0.01, lambda x, y, z: blast(x, y),
                             defaults={"flux": "kepes", "reconstruction": "minmod"})
    if name == "blast3d":
        return ProblemConfig(name, res((64, 64, 64)), (-0.5, -0.5, -0.5), (0.5, 0.5, 0.5),
                             _all(Periodic(), 3), 1.4, 0.01,
                             lambda x, y, z: blast(x, y, z, spherical=True),
                             defaults={"flux": "kepes", "reconstruction": "minmod"})
    if name == "windtunnel":
        bcs = {"x-": Inflow(WINDTUNNEL_INFLOW), "x+": ZeroGradient(),
               "y-": Reflecting(), "y+": Reflecting()}
        return ProblemConfig(name, res((240, 80, 1)), (0.0, 0.0), (3.0, 1.0), bcs, 1.4, 1.0,
                             windtunnel, mask=windtunnel_mask,
                             defaults={"flux": "kepes", "reconstruction": "minmod",
                                       "integrator": "ssprk2"})
    raise ValueError(f"unknown problem {name!r}; expected one of {PROBLEMS}")
