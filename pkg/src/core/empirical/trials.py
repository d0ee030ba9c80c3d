"""
Monte Carlo Trials

One trial runs the whole pipeline (teachers, source fit, target data,
target fit) and records the empirical overlaps and errors; batches of
trials are summarized by mean and standard error.
"""

import logging
from concurrent.futures import Executor
from functools import partial
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from src.config.app_config import AppConfig, get_app_config
from src.core.activations import ActivationFactory
from src.core.errors import TrialFailedError
from src.core.losses import LossFactory
from src.core.solver import predict_gen_error
from src.models.schemas import TaskSpec, TransferMode, TrialRecord, TrialSummary

from .data import Dataset, TeacherPair, gen_dataset, gen_teachers, sample_count
from .erm import ErmResult, Frozen, Penalty, fit_erm
from .rng import stream, trial_seed

logger = logging.getLogger(__name__)

SUMMARY_FIELDS = ("q_hat", "r_hat", "train_error", "gen_error")


def overlaps(w: np.ndarray, teacher: np.ndarray) -> Tuple[float, float]:
    """(q, r): projection on the teacher and norm of the orthogonal remainder"""
    q = float(teacher @ w)
    r = float(np.linalg.norm(w - q * teacher))
    return q, r


def train_error(spec: TaskSpec, dataset: Dataset, w: np.ndarray, penalty: Optional[Penalty] = None) -> float:
    """(1/p) sum of losses plus the soft-transfer penalty, without ridge"""
    loss = LossFactory.create_loss(spec.loss)
    value = float(np.sum(loss.value(dataset.labels, dataset.features @ w))) / dataset.p
    if penalty is not None:
        value += 0.5 * float(np.sum((penalty.diag * (w - penalty.w_ref)) ** 2))
    return value


def fresh_sample_gen_error(spec: TaskSpec, w: np.ndarray, teacher: np.ndarray, n_test: int, rng_seed: int) -> float:
    """Test error of w on n_test new Gaussian inputs"""
    data = gen_dataset(n_test, w.size, teacher, spec.phi, rng_seed, stream_name="test")
    predictor = ActivationFactory.create(spec.phi_hat)
    residual = data.labels - predictor(data.features @ w)
    return float(np.mean(residual**2)) / 4.0**spec.upsilon


def _staged(seed: int, stage: str, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except TrialFailedError:
        raise
    except Exception as exc:
        raise TrialFailedError(seed, stage, exc) from exc


def _record(seed: int, spec: TaskSpec, dataset: Dataset, teacher: np.ndarray, fit: ErmResult,
            penalty: Optional[Penalty] = None, **extra) -> TrialRecord:
    q, r = overlaps(fit.weights, teacher)
    return TrialRecord(
        seed=seed,
        q_hat=q,
        r_hat=r,
        train_error=train_error(spec, dataset, fit.weights, penalty),
        gen_error=predict_gen_error(spec, q, r),
        solver_iters=fit.iterations,
        kkt_residual=fit.kkt_residual,
        **extra,
    )


def _source(spec: TaskSpec, p: int, rng_seed: int, teachers: TeacherPair,
            config: AppConfig) -> Tuple[np.ndarray, TrialRecord]:
    n_s = sample_count(spec.alpha_s, p)
    if n_s < 1:
        raise ValueError("empty dataset")
    data = gen_dataset(n_s, p, teachers.xi_s, spec.phi, rng_seed, stream_name="source")
    fit = fit_erm(spec.loss, data, spec.lam, settings=config.erm)
    q_cross, _ = overlaps(fit.weights, teachers.xi_t)
    record = _record(rng_seed, spec, data, teachers.xi_s, fit, q_hat_cross=q_cross)
    return fit.weights, record


def run_source(spec: TaskSpec, p: int, rng_seed: int,
               config: Optional[AppConfig] = None) -> Tuple[np.ndarray, TrialRecord]:
    """
    Fit the source task; the record holds overlaps against xi_s and, as
    q_hat_cross, the projection on xi_t
    """
    config = config or get_app_config()
    teachers = _staged(rng_seed, "teachers", gen_teachers, p, spec.rho, rng_seed)
    return _staged(rng_seed, "source", _source, spec, p, rng_seed, teachers, config)


def _target_constraints(spec: TaskSpec, p: int, rng_seed: int, w_s: np.ndarray):
    """
    Frozen mask and penalty for the target fit; every mode goes through
    the same fit so the reductions to no transfer are exact
    """
    mask = np.zeros(p, dtype=bool)
    diag = np.zeros(p)
    if spec.mode == TransferMode.HARD:
        mask = stream(rng_seed, "mask").random(p) < spec.transfer.delta
    elif spec.mode == TransferMode.SOFT:
        diag = spec.transfer.spectrum.sample_diag(p, stream(rng_seed, "spectrum"))
    return Frozen(mask=mask, values=w_s), Penalty(diag=diag, w_ref=w_s)


def run_transfer_trial(spec: TaskSpec, p: int, rng_seed: int, config: Optional[AppConfig] = None) -> TrialRecord:
    """One full pipeline: teachers, source fit, target data, target fit"""
    config = config or get_app_config()
    teachers = _staged(rng_seed, "teachers", gen_teachers, p, spec.rho, rng_seed)
    w_s, source_record = _staged(rng_seed, "source", _source, spec, p, rng_seed, teachers, config)

    n_t = sample_count(spec.alpha_t, p)
    if n_t < 1:
        raise TrialFailedError(rng_seed, "target", ValueError("empty dataset"))
    data = _staged(rng_seed, "target data", gen_dataset, n_t, p, teachers.xi_t, spec.phi, rng_seed)

    frozen, penalty = _target_constraints(spec, p, rng_seed, w_s)
    fit = _staged(rng_seed, "target fit", fit_erm, spec.loss, data, spec.lam,
                  penalty=penalty, frozen=frozen, settings=config.erm)

    realized = float(frozen.mask.mean()) if spec.mode == TransferMode.HARD else None
    return _staged(
        rng_seed, "record", _record, rng_seed, spec, data, teachers.xi_t, fit, penalty,
        q_hat_source=source_record.q_hat,
        r_hat_source=source_record.r_hat,
        realized_fraction=realized,
    )


def summarize(records) -> TrialSummary:
    frame = pd.DataFrame([record.model_dump() for record in records])
    means = {name: float(frame[name].mean()) for name in SUMMARY_FIELDS}
    std_errors = None
    if len(records) > 1:
        std_errors = {name: float(frame[name].sem()) for name in SUMMARY_FIELDS}
    return TrialSummary(n_trials=len(records), means=means, std_errors=std_errors, records=list(records))


def run_trials(
    spec: TaskSpec,
    p: int,
    n_trials: int,
    master_seed: int,
    config: Optional[AppConfig] = None,
    executor: Optional[Executor] = None,
) -> TrialSummary:
    """
    Trials with seeds master_seed + i; a failing trial aborts the batch
    with a TrialFailedError carrying its seed
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    config = config or get_app_config()
    seeds = [trial_seed(master_seed, i) for i in range(n_trials)]
    trial = partial(run_transfer_trial, spec, p, config=config)

    if executor is None:
        records = [trial(seed) for seed in seeds]
    else:
        records = list(executor.map(trial, seeds))

    summary = summarize(records)
    logger.info(
        "%d trials at p=%d: gen_error %.6g, q_hat %.6g",
        n_trials, p, summary.means["gen_error"], summary.means["q_hat"],
    )
    return summary
