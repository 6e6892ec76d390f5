"""Entropy-stable finite-volume solver for the ideal MHD equations."""
from .eos import (AdmissibilityError, GasModel, NonFiniteState, NonPositiveDensity,
                  NonPositivePressure, cons_to_prim, prim_to_cons)
from .flux import ec_condition_residual, kepec_flux
from .dissipation import entropy_dissipation_rate, kepes_flux, kepes_flux_naive
from .reconstruction import ReconstructionScheme
from .solver import Grid, Solver, fill_ghosts, field_from_prim
from .problems import PROBLEMS, make_problem
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError", "GasModel", "NonFiniteState", "NonPositiveDensity",
    "NonPositivePressure", "cons_to_prim", "prim_to_cons", "ec_condition_residual",
    "kepec_flux", "entropy_dissipation_rate", "kepes_flux", "kepes_flux_naive",
    "ReconstructionScheme", "Grid", "Solver", "fill_ghosts", "field_from_prim",
    "PROBLEMS", "make_problem", "BACKEND",
]
