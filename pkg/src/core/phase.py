"""
Phase Map

Analytic phase boundaries of hard transfer (regression critical
similarity, classification sufficient threshold and cubic), numerical
optimal-rate curves, and the phase-diagram sweep built on them.
"""

import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.config.app_config import AppConfig
from src.core.activations import moments
from src.core.errors import TransferLabError, UnsupportedConfigurationError
from src.core.solver import predict_gen_error, solve_hard, solve_source
from src.core.solver.closed_form import source_solution
from src.models.schemas import (
    ActivationKind,
    ClassCubic,
    DeltaCurve,
    HardTransfer,
    LossKind,
    PhaseBoundary,
    PhaseRow,
    RegressionDecision,
    SaddleSolution,
    TaskSpec,
)

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-12


def _require_ratios(alpha_s: float, alpha_t: float) -> None:
    if alpha_s <= 1.0 or alpha_t <= 1.0:
        raise UnsupportedConfigurationError("phase formulas need alpha_s > 1 and alpha_t > 1")


def _require_closed_form(spec: TaskSpec) -> None:
    if spec.loss != LossKind.SQUARED or spec.lam != 0.0:
        raise UnsupportedConfigurationError("analytic phase results need squared loss and lambda = 0")
    _require_ratios(spec.alpha_s, spec.alpha_t)


def rho_c(phi: ActivationKind, alpha_s: float, alpha_t: float) -> PhaseBoundary:
    """Critical similarity above which full transfer beats no transfer"""
    _require_ratios(alpha_s, alpha_t)
    m = moments(phi)
    spread = (m.v - m.c**2) / (2.0 * m.c**2)
    value = 1.0 - spread * (1.0 / (alpha_t - 1.0) - 1.0 / (alpha_s - 1.0))
    return PhaseBoundary(rho_c=value)


def delta_star_regression(spec: TaskSpec) -> RegressionDecision:
    """
    Optimal hard-transfer rate for squared loss without ridge and an
    identity predictor: 0 below the critical similarity, 1 above it,
    None within BOUNDARY_TOL of it
    """
    _require_closed_form(spec)
    if spec.phi_hat != ActivationKind.IDENTITY:
        raise UnsupportedConfigurationError("the regression decision needs an identity predictor")

    m = moments(spec.phi)
    source = source_solution(m, spec.alpha_s)
    beta1 = spec.rho * source.q
    beta2 = (1.0 - spec.rho**2) * source.q**2 + source.r**2
    z_t = (spec.alpha_t - 1.0) * ((m.c - beta1) ** 2 + beta2) - (m.v - m.c**2)
    critical = rho_c(spec.phi, spec.alpha_s, spec.alpha_t).rho_c

    if abs(spec.rho - critical) <= BOUNDARY_TOL:
        delta_star = None
    else:
        delta_star = 1.0 if z_t < 0 else 0.0
    return RegressionDecision(delta_star=delta_star, z_t=z_t, rho_c=critical)


def g_threshold(alpha_t: float, alpha_s: float) -> float:
    """Sufficient similarity for some hard transfer to help sign-sign classification"""
    _require_ratios(alpha_s, alpha_t)
    k = 1.0 - 2.0 / math.pi
    numerator = k * alpha_t * (alpha_s - alpha_t)
    denominator = (alpha_s - 1.0) * (
        (4.0 / math.pi) * (alpha_t - 1.0) * alpha_t + 2.0 * k * (alpha_t - 1.0)
    )
    return 1.0 - numerator / denominator


def class_cubic(spec: TaskSpec) -> ClassCubic:
    """Constants of the sign-sign error curve in delta and its derivative cubic"""
    _require_closed_form(spec)
    if spec.phi != ActivationKind.SIGN or spec.phi_hat != ActivationKind.SIGN:
        raise UnsupportedConfigurationError("the classification cubic needs sign teacher and predictor")

    m = moments(spec.phi)
    c, v, rho = m.c, m.v, spec.rho
    at, as_ = spec.alpha_t, spec.alpha_s

    a = rho * c - c
    k1 = -2.0 * c * c + 2.0 * c * c * rho
    k2 = at * (v - c * c) / (as_ - 1.0) + 4.0 * c * c - 2.0 * c * c * rho - v
    k3 = (at - 2.0) * c * c + v

    return ClassCubic(
        a_coef=a,
        K1=k1,
        K2=k2,
        K3=k3,
        Z1=a * k1,
        Z2=2.0 * a * k2 - c * k1,
        Z3=3.0 * a * k3 + a * (at - 1.0) * k2 - 2.0 * c * (at - 1.0) * k1,
        Z4=(2.0 * (at - 1.0) * a + c) * k3 - c * (at - 1.0) * k2,
        c=c,
        alpha_t=at,
    )


def delta_grid(resolution: int = 201) -> np.ndarray:
    if resolution < 2:
        raise ValueError("delta resolution must be at least 2")
    return np.linspace(0.0, 1.0, resolution)


def delta_star_numeric(
    spec: TaskSpec,
    source: SaddleSolution,
    resolution: int = 201,
    config: Optional[AppConfig] = None,
) -> DeltaCurve:
    """Grid argmin of the predicted test error over delta; ties go to the smaller delta"""
    deltas = delta_grid(resolution)
    errors: List[float] = []
    for delta in deltas:
        point = spec.with_transfer(HardTransfer(delta=float(delta)))
        try:
            solution = solve_hard(point, source, config)
            errors.append(predict_gen_error(point, solution.q, solution.r))
        except TransferLabError as exc:
            exc.args = (f"delta={delta:.6g}: {exc}",) + exc.args[1:]
            raise
    # np.argmin returns the first occurrence
    best = int(np.argmin(errors))
    return DeltaCurve(
        delta_star=float(deltas[best]),
        deltas=[float(d) for d in deltas],
        errors=errors,
    )


def _analytic_columns(spec: TaskSpec) -> Tuple[Optional[float], Optional[float]]:
    """(rho_c, g) where the closed-form analysis applies"""
    if spec.loss != LossKind.SQUARED or spec.lam != 0.0:
        return None, None
    if spec.alpha_s <= 1.0 or spec.alpha_t <= 1.0:
        return None, None
    if spec.phi_hat == ActivationKind.IDENTITY:
        return rho_c(spec.phi, spec.alpha_s, spec.alpha_t).rho_c, None
    if spec.phi == ActivationKind.SIGN:
        return None, g_threshold(spec.alpha_t, spec.alpha_s)
    return None, None


def phase_row(
    template: TaskSpec,
    alpha_t: float,
    alpha_s: float,
    rho: float,
    resolution: int = 201,
    config: Optional[AppConfig] = None,
) -> PhaseRow:
    """One phase-diagram point"""
    spec = template.model_copy(update={"alpha_t": alpha_t, "alpha_s": alpha_s, "rho": rho})
    source = solve_source(spec, config)
    curve = delta_star_numeric(spec, source, resolution, config)
    rho_crit, g = _analytic_columns(spec)
    return PhaseRow(
        alpha_t=alpha_t,
        alpha_s=alpha_s,
        rho=rho,
        delta_star=curve.delta_star,
        e_test_star=min(curve.errors),
        e_test_none=curve.errors[0],
        e_test_full=curve.errors[-1],
        rho_c=rho_crit,
        g_threshold=g,
        sufficiency_gap=g is not None and rho > g and curve.delta_star == 0.0,
    )


def boundary_sweep(
    template: TaskSpec,
    rho_grid: Sequence[float],
    alpha_grid: Iterable[Tuple[float, float]],
    resolution: int = 201,
    config: Optional[AppConfig] = None,
) -> List[PhaseRow]:
    """
    Phase-diagram table over (alpha_t, alpha_s) pairs and similarities,
    rows ordered by pair then rho
    """
    rows = []
    for alpha_t, alpha_s in alpha_grid:
        for rho in rho_grid:
            rows.append(phase_row(template, alpha_t, alpha_s, float(rho), resolution, config))
        logger.info("phase sweep finished alpha_t=%g alpha_s=%g", alpha_t, alpha_s)
    return rows
