"""Compare the compiled and numpy pencil kernels.

    python benchmarks/bench_kernels.py [--n 64 128] [--pencils 64] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from esmhd import _kernels_py
from esmhd.eos import GasModel, prim_to_cons
from esmhd.kernels import FLUX_KINDS, flux_code
from esmhd.reconstruction import ReconstructionScheme

try:
    from esmhd import _ext
except ImportError:
    _ext = None


def pencils(npen, n, gamma, seed=0):
    rng = np.random.default_rng(seed)
    x = (np.arange(n + 4) - 1.5) / n
    ph = rng.uniform(0, 2 * np.pi, size=(npen, 1))
    w = np.zeros((8, npen, n + 4))
    w[0] = 1.0 + 0.3 * np.sin(2 * np.pi * x + ph)
    w[1] = 0.2 * np.cos(2 * np.pi * x + ph)
    w[2] = 0.1
    w[4] = 1.0 + 0.2 * np.cos(4 * np.pi * x + ph)
    w[5] = 0.75
    w[6] = np.sin(2 * np.pi * x + ph)
    w[7] = 0.2
    return np.ascontiguousarray(np.moveaxis(prim_to_cons(w, GasModel(gamma)), 0, -1))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[64, 256])
    ap.add_argument("--pencils", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--reconstruction", default="minmod")
    args = ap.parse_args()
    gamma = 5.0 / 3.0
    recon = ReconstructionScheme(args.reconstruction).code
    print(f"{'flux':12s} {'n':>5s} {'numpy [s]':>11s} {'cython [s]':>11s} {'speedup':>8s} {'max rel diff':>13s}")
    for flux in FLUX_KINDS:
        for n in args.n:
            Q = pencils(args.pencils, n, gamma)
            call = (Q, 1.0 / n, recon, 0.5, flux_code(flux), gamma)
            t_py = min(timeit.repeat(lambda: _kernels_py.pencil_rhs(*call), number=1,
                                     repeat=args.repeat))
            if _ext is None:
                print(f"{flux:12s} {n:5d} {t_py:11.4e} {'n/a':>11s}")
                continue
            t_c = min(timeit.repeat(lambda: _ext.pencil_rhs(*call), number=1,
                                    repeat=args.repeat))
            a, b = _kernels_py.pencil_rhs(*call), _ext.pencil_rhs(*call)
            diff = np.abs(a - b).max() / np.abs(a).max()
            print(f"{flux:12s} {n:5d} {t_py:11.4e} {t_c:11.4e} {t_py / t_c:8.1f} {diff:13.2e}")


if __name__ == "__main__":
    main()
