"""
Asymptotic solver package

Deterministic scalar problems for the source, hard-transfer and
soft-transfer estimators, with error predictions built on their
solutions.
"""

from src.core.spectra import spectral_T

from .api import (
    SolverContext,
    copy_limit,
    solve_hard,
    solve_no_transfer,
    solve_soft,
    solve_source,
    solve_target,
    transfer_constants,
)
from .metrics import gen_error_by_quadrature, predict_gen_error, predict_train_error
from .saddle import SaddlePointSolver

__all__ = [
    "SaddlePointSolver",
    "SolverContext",
    "copy_limit",
    "gen_error_by_quadrature",
    "predict_gen_error",
    "predict_train_error",
    "solve_hard",
    "solve_no_transfer",
    "solve_soft",
    "solve_source",
    "solve_target",
    "spectral_T",
    "transfer_constants",
]
