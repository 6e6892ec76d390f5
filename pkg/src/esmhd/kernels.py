"""Kernel backend selection.

The compiled extension is used when it imports; setting
``ESMHD_PURE_PYTHON=1`` forces the numpy implementation.
"""
from __future__ import annotations

import os

from . import _kernels_py
from .flux import SOURCE_FORMS

FLUX_KINDS = _kernels_py.FLUX_KINDS
INTEGRATORS = _kernels_py.INTEGRATORS

_impl = _kernels_py
BACKEND = "numpy"
if os.environ.get("ESMHD_PURE_PYTHON") != "1":
    try:
        from . import _ext as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

pencil_rhs = _impl.pencil_rhs
advance_periodic_1d = _impl.advance_periodic_1d


def flux_code(name: str) -> int:
    if name not in FLUX_KINDS:
        raise ValueError(f"unknown flux {name!r}; expected one of {FLUX_KINDS}")
    return FLUX_KINDS.index(name)


def integrator_code(name: str) -> int:
    if name not in INTEGRATORS:
        raise ValueError(f"unknown integrator {name!r}; expected one of {INTEGRATORS}")
    return INTEGRATORS.index(name)


def source_code(name: str) -> int:
    if name not in SOURCE_FORMS:
        raise ValueError(f"unknown source form {name!r}; expected one of {SOURCE_FORMS}")
    return SOURCE_FORMS.index(name)
