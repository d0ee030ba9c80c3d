"""
Sweep Rows

Picklable per-grid-point workers shared by the sweep services, and the
column layout of every result table. Each row echoes the resolved task
specification and carries an `error` column that is empty on success.
"""

import json
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from src.config.app_config import AppConfig
from src.core.empirical import run_trials
from src.core.errors import TransferLabError
from src.core.phase import phase_row
from src.core.solver import predict_gen_error, predict_train_error, solve_source, solve_target
from src.models.schemas import (
    HardTransfer,
    NoTransfer,
    SaddleSolution,
    SimSettings,
    TaskSpec,
    TransferMode,
)

logger = logging.getLogger(__name__)

SPEC_COLUMNS = [
    "alpha_s",
    "alpha_t",
    "rho",
    "lambda",
    "loss",
    "phi",
    "phi_hat",
    "upsilon",
    "transfer_mode",
    "delta",
    "spectrum",
]

PREDICT_COLUMNS = (
    ["sweep_axis", "x", "curve"]
    + SPEC_COLUMNS
    + ["q_s", "r_s", "q_t", "r_t", "sigma", "e_train_pred", "e_test_pred", "error"]
)

SIM_COLUMNS = [
    "p",
    "n_trials",
    "master_seed",
    "q_hat_emp",
    "q_hat_se",
    "r_hat_emp",
    "r_hat_se",
    "e_train_emp",
    "e_train_se",
    "e_test_emp",
    "e_test_se",
    "z_score",
]

SIMULATE_COLUMNS = PREDICT_COLUMNS[:-1] + SIM_COLUMNS + ["error"]

PHASE_COLUMNS = (
    ["sweep_axis", "x", "curve"]
    + SPEC_COLUMNS
    + [
        "delta_star",
        "e_test_star",
        "e_test_none",
        "e_test_full",
        "rho_c",
        "g_threshold",
        "sufficiency_gap",
        "error",
    ]
)


@dataclass
class ResultTable:
    frame: pd.DataFrame
    failed: int = 0

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass(frozen=True)
class SourceOutcome:
    solution: Optional[SaddleSolution] = None
    error: str = ""


def spec_columns(spec: TaskSpec) -> Dict[str, Any]:
    transfer = spec.transfer
    return {
        "alpha_s": spec.alpha_s,
        "alpha_t": spec.alpha_t,
        "rho": spec.rho,
        "lambda": spec.lam,
        "loss": spec.loss.value,
        "phi": spec.phi.value,
        "phi_hat": spec.phi_hat.value,
        "upsilon": spec.upsilon,
        "transfer_mode": transfer.mode,
        "delta": transfer.delta if transfer.mode == "hard" else math.nan,
        "spectrum": json.dumps(transfer.spectrum.model_dump(mode="json"), sort_keys=True)
        if transfer.mode == "soft"
        else "",
    }


def curves(spec: TaskSpec) -> List[Tuple[str, TaskSpec]]:
    """The base curve plus no-transfer and full-transfer baselines for hard transfer"""
    if spec.mode == TransferMode.HARD:
        return [
            ("hard", spec),
            ("none", spec.with_transfer(NoTransfer())),
            ("full", spec.with_transfer(HardTransfer(delta=1.0))),
        ]
    return [(spec.mode.value, spec)]


def failure_row(columns: List[str], base: Dict[str, Any], error: str) -> Dict[str, Any]:
    row = {column: math.nan for column in columns}
    row.update(base)
    row["error"] = error
    return row


def solve_source_task(task: Tuple[TaskSpec, AppConfig]) -> SourceOutcome:
    spec, config = task
    try:
        return SourceOutcome(solution=solve_source(spec, config))
    except (TransferLabError, ValueError) as exc:
        return SourceOutcome(error=str(exc))


PointTask = Tuple[str, float, str, TaskSpec, SourceOutcome, AppConfig]


def _prediction(spec: TaskSpec, source: SaddleSolution, config: AppConfig) -> Dict[str, Any]:
    target = solve_target(spec, source, config)
    return {
        "q_s": source.q,
        "r_s": source.r,
        "q_t": target.q,
        "r_t": target.r,
        "sigma": target.sigma,
        "e_train_pred": predict_train_error(spec, target),
        "e_test_pred": predict_gen_error(spec, target.q, target.r),
        "error": "",
    }


def predict_point(task: PointTask) -> Dict[str, Any]:
    axis, x, label, spec, source, config = task
    base = {"sweep_axis": axis, "x": x, "curve": label, **spec_columns(spec)}
    if source.solution is None:
        return failure_row(PREDICT_COLUMNS, base, f"source: {source.error}")
    try:
        return {**base, **_prediction(spec, source.solution, config)}
    except (TransferLabError, ValueError) as exc:
        return failure_row(PREDICT_COLUMNS, base, str(exc))


SimTask = Tuple[str, float, str, TaskSpec, SourceOutcome, AppConfig, SimSettings]


def simulate_point(task: SimTask) -> Dict[str, Any]:
    axis, x, label, spec, source, config, sim = task
    base = {
        "sweep_axis": axis,
        "x": x,
        "curve": label,
        **spec_columns(spec),
        "p": sim.p,
        "n_trials": sim.n_trials,
        "master_seed": sim.master_seed,
    }
    if source.solution is None:
        return failure_row(SIMULATE_COLUMNS, base, f"source: {source.error}")
    try:
        prediction = _prediction(spec, source.solution, config)
        summary = run_trials(spec, sim.p, sim.n_trials, sim.master_seed, config)
    except (TransferLabError, ValueError) as exc:
        return failure_row(SIMULATE_COLUMNS, base, str(exc))

    se = summary.std_errors or {}
    mean = summary.means
    e_test_se = se.get("gen_error", math.nan)
    z_score = math.nan
    if e_test_se and math.isfinite(e_test_se):
        z_score = (mean["gen_error"] - prediction["e_test_pred"]) / e_test_se
    return {
        **base,
        **prediction,
        "q_hat_emp": mean["q_hat"],
        "q_hat_se": se.get("q_hat", math.nan),
        "r_hat_emp": mean["r_hat"],
        "r_hat_se": se.get("r_hat", math.nan),
        "e_train_emp": mean["train_error"],
        "e_train_se": se.get("train_error", math.nan),
        "e_test_emp": mean["gen_error"],
        "e_test_se": e_test_se,
        "z_score": z_score,
        "error": "",
    }


PhaseTask = Tuple[str, TaskSpec, float, float, float, int, AppConfig]


def phase_point(task: PhaseTask) -> Dict[str, Any]:
    axis, template, alpha_t, alpha_s, rho, resolution, config = task
    spec = template.model_copy(update={"alpha_t": alpha_t, "alpha_s": alpha_s, "rho": rho})
    base = {
        "sweep_axis": axis,
        "x": rho if axis == "rho" else alpha_t,
        "curve": f"alpha_t={alpha_t:g}_alpha_s={alpha_s:g}" if axis == "rho" else f"rho={rho:g}",
        **spec_columns(spec.with_transfer(HardTransfer(delta=0.0))),
    }
    base["delta"] = math.nan
    try:
        row = phase_row(template, alpha_t, alpha_s, rho, resolution, config)
    except (TransferLabError, ValueError) as exc:
        return failure_row(PHASE_COLUMNS, base, str(exc))
    values = row.model_dump()
    for name in ("alpha_t", "alpha_s", "rho"):
        values.pop(name)
    for name in ("rho_c", "g_threshold"):
        if values[name] is None:
            values[name] = math.nan
    return {**base, **values, "error": ""}


def to_table(rows: List[Dict[str, Any]], columns: List[str]) -> ResultTable:
    frame = pd.DataFrame(rows, columns=columns)
    failed = int((frame["error"].fillna("") != "").sum()) if len(frame) else 0
    for _, row in frame[frame["error"].fillna("") != ""].iterrows():
        logger.warning("row %s=%s (%s) failed: %s", row["sweep_axis"], row["x"], row["curve"], row["error"])
    return ResultTable(frame=frame, failed=failed)
