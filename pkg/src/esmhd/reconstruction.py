"""Piecewise constant, linear and minmod-limited interface reconstruction.

Reconstruction works on primitive variables along one axis of an array that
carries two ghost cells on each side of that axis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GHOST = 2
KINDS = ("constant", "linear", "minmod")


@dataclass(frozen=True)
class ReconstructionScheme:
    kind: str = "constant"
    alpha: float = 0.5   # backward-difference weight, linear only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown reconstruction {self.kind!r}; expected one of {KINDS}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    @property
    def code(self) -> int:
        return KINDS.index(self.kind)


def minmod(a, b):
    """``a`` if ``|a| < |b|``, ``b`` if ``|a| >= |b|``, zero on sign disagreement."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.where(np.abs(a) < np.abs(b), a, b)
    out = np.where(a * b > 0.0, out, 0.0)
    return out if out.ndim else float(out)


def slopes(W, scheme: ReconstructionScheme, axis: int = -1):
    """Undivided slopes (slope times cell width) for cells 1..n+2 of a ghosted line."""
    W = np.moveaxis(np.asarray(W, dtype=float), axis, -1)
    back = W[..., 1:-1] - W[..., :-2]
    fwd = W[..., 2:] - W[..., 1:-1]
    if scheme.kind == "constant":
        d = np.zeros_like(back)
    elif scheme.kind == "linear":
        d = scheme.alpha * back + (1.0 - scheme.alpha) * fwd
    else:
        d = minmod(back, fwd)
    return np.moveaxis(d, -1, axis)


def reconstruct(W, scheme: ReconstructionScheme, axis: int = -1):
    """Left/right states at the ``n + 1`` faces of the ``n`` interior cells.

    ``W`` has ``n + 4`` entries along ``axis``. Face ``k`` separates interior
    cells ``k - 1`` and ``k``; the left state is the right-edge value of the
    cell to its left and vice versa.
    """
    W = np.asarray(W, dtype=float)
    n_total = W.shape[axis]
    if n_total < 2 * GHOST + 1:
        raise ValueError(f"need {GHOST} ghost cells per side and at least one interior cell")
    Wm = np.moveaxis(W, axis, -1)
    d = np.moveaxis(slopes(W, scheme, axis), axis, -1)   # cells 1..n+2
    left = Wm[..., 1:-2] + 0.5 * d[..., :-1]
    right = Wm[..., 2:-1] - 0.5 * d[..., 1:]
    return np.moveaxis(left, -1, axis), np.moveaxis(right, -1, axis)
