"""Finite-size simulation of source and transfer estimators"""

from .data import Dataset, TeacherPair, gen_dataset, gen_teachers, sample_count
from .erm import ErmResult, Frozen, Penalty, erm_objective, fit_erm, operator_norm
from .rng import stream, trial_seed
from .trials import (
    fresh_sample_gen_error,
    overlaps,
    run_source,
    run_transfer_trial,
    run_trials,
    summarize,
)

__all__ = [
    "Dataset",
    "ErmResult",
    "Frozen",
    "Penalty",
    "TeacherPair",
    "erm_objective",
    "fit_erm",
    "fresh_sample_gen_error",
    "gen_dataset",
    "gen_teachers",
    "operator_norm",
    "overlaps",
    "run_source",
    "run_transfer_trial",
    "run_trials",
    "sample_count",
    "stream",
    "summarize",
    "trial_seed",
]
