"""
Asymptotic Solver API

solve_source, solve_hard and solve_soft turn a TaskSpec into the
limiting overlaps of the corresponding estimator.
"""

import logging
import math
from typing import List, Optional

import numpy as np

from src.config.app_config import AppConfig, get_app_config
from src.core.activations import ActivationFactory, moments
from src.core.errors import UnsupportedConfigurationError
from src.core.losses import LossFactory
from src.core.quadrature import GaussianPlane
from src.models.schemas import LossKind, Moments, SaddleSolution, TaskSpec, TransferMode

from . import closed_form
from .problems import HardFormProblem, ScalarProblem, SoftProblem
from .saddle import SaddlePointSolver

logger = logging.getLogger(__name__)

_METHODS = ("auto", "numeric", "closed_form")


class SolverContext:
    """Loss, labels on the quadrature grid and moments for one spec"""

    def __init__(self, spec: TaskSpec, config: Optional[AppConfig] = None):
        self.config = config or get_app_config()
        self.spec = spec
        self.loss = LossFactory.create_loss(spec.loss)
        activation = ActivationFactory.create(spec.phi)
        quad = self.config.quadrature
        self.plane = GaussianPlane(quad.order, activation.kink, quad.truncation)
        self.labels = activation(self.plane.s)
        self.moments: Moments = moments(spec.phi)
        self.solver = SaddlePointSolver(self.config.solver)

    def starts(self, problem: ScalarProblem) -> List[np.ndarray]:
        points = []
        for q0, r0 in self.config.solver.starts:
            if q0 < 0 or r0 < 0:
                q0, r0 = self.moments.c, math.sqrt(self.moments.v)
            points.append(np.array([max(q0, 0.0), max(r0, 0.0)]))
        return points

    def hard_problem(self, alpha: float, delta: float = 0.0, beta1: float = 0.0, beta2: float = 0.0,
                     source_scale: bool = False) -> HardFormProblem:
        return HardFormProblem(
            self.loss, self.labels, self.plane, alpha, self.spec.lam,
            delta=delta, beta1=beta1, beta2=beta2, source_scale=source_scale,
        )

    def soft_problem(self, beta1: float, beta2: float) -> SoftProblem:
        return SoftProblem(
            self.loss, self.labels, self.plane, self.spec.alpha_t, self.spec.lam,
            spectrum=self.spec.transfer.spectrum, beta1=beta1, beta2=beta2,
            spectrum_order=self.config.quadrature.spectrum_order,
        )

    def solve(self, problem: ScalarProblem) -> SaddleSolution:
        return self.solver.solve(problem, self.starts(problem))


def transfer_constants(spec: TaskSpec, source: SaddleSolution):
    """beta1 = rho q_s, beta2 = (1 - rho^2) q_s^2 + r_s^2"""
    beta1 = spec.rho * source.q
    beta2 = (1.0 - spec.rho**2) * source.q**2 + source.r**2
    return beta1, beta2


def _closed_form_available(spec: TaskSpec, alpha: float) -> bool:
    return spec.loss == LossKind.SQUARED and spec.lam == 0.0 and alpha > 1.0


def _choose(spec: TaskSpec, alpha: float, method: str) -> bool:
    """True for the closed form, False for the numeric path"""
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}")
    available = _closed_form_available(spec, alpha)
    if method == "closed_form":
        if not available:
            raise UnsupportedConfigurationError(
                "closed forms need squared loss, lambda = 0 and alpha > 1"
            )
        return True
    if method == "auto" and available:
        return True
    if spec.lam == 0.0:
        if spec.loss != LossKind.SQUARED:
            raise UnsupportedConfigurationError(
                f"lambda = 0 is not supported for {spec.loss.value} loss"
            )
        if alpha <= 1.0:
            raise UnsupportedConfigurationError(
                "squared loss without ridge needs alpha > 1 for a unique solution"
            )
    return False


def solve_source(spec: TaskSpec, config: Optional[AppConfig] = None, method: str = "auto") -> SaddleSolution:
    """Limiting overlaps (q_s, r_s) of the source estimator"""
    if _choose(spec, spec.alpha_s, method):
        return closed_form.source_solution(moments(spec.phi), spec.alpha_s)
    context = SolverContext(spec, config)
    problem = context.hard_problem(spec.alpha_s, source_scale=True)
    solution = context.solve(problem)
    logger.debug("source solution %s", solution)
    return solution


def solve_no_transfer(spec: TaskSpec, config: Optional[AppConfig] = None, method: str = "auto") -> SaddleSolution:
    """Target-only estimator (no source information)"""
    if _choose(spec, spec.alpha_t, method):
        return _target_closed_form(spec, 0.0, 0.0, 0.0)
    context = SolverContext(spec, config)
    return context.solve(context.hard_problem(spec.alpha_t))


def _target_closed_form(spec: TaskSpec, delta: float, beta1: float, beta2: float) -> SaddleSolution:
    return closed_form.hard_solution(moments(spec.phi), spec.alpha_t, delta, beta1, beta2)


def copy_limit(spec: TaskSpec, source: SaddleSolution, config: Optional[AppConfig] = None) -> SaddleSolution:
    """delta = 1: the target estimator is the source estimator"""
    beta1, beta2 = transfer_constants(spec, source)
    q, r = beta1, math.sqrt(beta2)
    context = SolverContext(spec, config)
    risk = context.plane.expect(
        lambda h, s: context.loss.value(context.labels, r * h + q * s)
    )
    return SaddleSolution(
        q=q,
        r=r,
        sigma=0.0,
        objective=0.5 * spec.lam * (q * q + r * r) + spec.alpha_t * risk,
        method="copy_limit",
    )


def solve_hard(spec: TaskSpec, source: SaddleSolution, config: Optional[AppConfig] = None,
               method: str = "auto") -> SaddleSolution:
    """Limiting overlaps of the hard-transfer estimator with frozen fraction delta"""
    if spec.mode != TransferMode.HARD:
        raise ValueError("solve_hard needs a hard-transfer spec")
    delta = spec.transfer.delta
    if delta == 1.0:
        return copy_limit(spec, source, config)
    beta1, beta2 = transfer_constants(spec, source)
    if _choose(spec, spec.alpha_t, method):
        return _target_closed_form(spec, delta, beta1, beta2)
    context = SolverContext(spec, config)
    return context.solve(context.hard_problem(spec.alpha_t, delta, beta1, beta2))


def solve_soft(spec: TaskSpec, source: SaddleSolution, config: Optional[AppConfig] = None) -> SaddleSolution:
    """Limiting overlaps of the soft-transfer estimator"""
    if spec.mode != TransferMode.SOFT:
        raise ValueError("solve_soft needs a soft-transfer spec")
    _choose(spec, spec.alpha_t, "numeric")
    context = SolverContext(spec, config)
    if spec.transfer.spectrum.is_zero():
        # no penalty: the problem is the target-only one
        return context.solve(context.hard_problem(spec.alpha_t))
    beta1, beta2 = transfer_constants(spec, source)
    return context.solve(context.soft_problem(beta1, beta2))


def solve_target(spec: TaskSpec, source: SaddleSolution, config: Optional[AppConfig] = None,
                 method: str = "auto") -> SaddleSolution:
    """Dispatch on the transfer mode"""
    if spec.mode == TransferMode.HARD:
        return solve_hard(spec, source, config, method)
    if spec.mode == TransferMode.SOFT:
        return solve_soft(spec, source, config)
    return solve_no_transfer(spec, config, method)
