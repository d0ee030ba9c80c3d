"""
Saddle-Point Solver

Inner sup over sigma by a bracketed root search on the monotone
sigma-derivative; outer min over the nonnegative orthant by L-BFGS-B
with envelope-theorem gradients, from several starting points.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize

from src.config.app_config import SolverConfig
from src.core.errors import ConvergenceError, InnerBracketError, OuterConvergenceError
from src.models.schemas import SaddleSolution

from .problems import Evaluation, ScalarProblem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InnerResult:
    sigma: float
    evaluation: Evaluation
    at_bound: bool


def projected_gradient(u: np.ndarray, grad: np.ndarray) -> float:
    """Norm of the gradient projected onto the nonnegative orthant"""
    pg = np.where(u > 0, grad, np.minimum(grad, 0.0))
    return float(np.linalg.norm(pg))


class SaddlePointSolver:
    """Solves min over u >= 0 of sup over sigma for a ScalarProblem"""

    def __init__(self, settings: Optional[SolverConfig] = None):
        self.settings = settings or SolverConfig()

    def maximize_sigma(self, problem: ScalarProblem, u: np.ndarray) -> InnerResult:
        settings = self.settings
        lo, hi = math.log(settings.sigma_min), math.log(settings.sigma_max)

        def d_sigma(t: float) -> float:
            return problem.evaluate(u, problem.sigma_from_t(t)).d_sigma

        def finish(t: float, at_bound: bool) -> InnerResult:
            sigma = problem.sigma_from_t(t)
            return InnerResult(sigma=sigma, evaluation=problem.evaluate(u, sigma), at_bound=at_bound)

        t0 = min(max(problem.t_guess, lo), hi)
        a, b = max(lo, t0 - 1.0), min(hi, t0 + 1.0)
        fa, fb = d_sigma(a), None

        step = 1.0
        while fa <= 0.0:
            if a <= lo:
                logger.debug("inner sup at lower bracket end for u=%s", u)
                return finish(lo, at_bound=True)
            b, fb = a, fa
            step *= 2.0
            a = max(lo, a - step)
            fa = d_sigma(a)

        if fb is None:
            fb = d_sigma(b)
        step = 1.0
        while fb >= 0.0:
            if b >= hi:
                logger.debug("inner sup at upper bracket end for u=%s", u)
                return finish(hi, at_bound=True)
            a, fa = b, fb
            step *= 2.0
            b = min(hi, b + step)
            fb = d_sigma(b)

        t = brentq(d_sigma, a, b, xtol=settings.inner_xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
        problem.t_guess = t
        return finish(t, at_bound=False)

    def value_at(self, problem: ScalarProblem, q: float, r: float) -> float:
        """
        Outer objective at overlaps (q, r); +inf where the inner sup is
        infinite. An inner maximum past the bracket is capped at the value
        at the bracket end.
        """
        if q < 0 or r < 0:
            return math.inf
        u = problem.from_qr(q, r)
        if u is None:
            return math.inf
        return self.maximize_sigma(problem, u).evaluation.value

    def _run_start(self, problem: ScalarProblem, u0: np.ndarray):
        def fun(u):
            inner = self.maximize_sigma(problem, np.maximum(u, 0.0))
            return inner.evaluation.value, inner.evaluation.grad

        result = minimize(
            fun,
            u0,
            jac=True,
            method="L-BFGS-B",
            bounds=[(0.0, None), (0.0, None)],
            options={
                "maxiter": self.settings.max_iter,
                "gtol": self.settings.outer_gtol,
                "ftol": 1e-15,
            },
        )
        inner = self.maximize_sigma(problem, result.x)
        grad_norm = projected_gradient(result.x, inner.evaluation.grad)
        logger.debug(
            "start %s -> u=%s value=%.12g |pg|=%.2e (%s)",
            u0, result.x, inner.evaluation.value, grad_norm, result.message,
        )
        return result.x, inner, grad_norm

    def solve(self, problem: ScalarProblem, starts: Sequence[np.ndarray]) -> SaddleSolution:
        candidates: List[Tuple[float, np.ndarray, InnerResult, float]] = []
        best_residual = math.inf
        for u0 in starts:
            try:
                u, inner, grad_norm = self._run_start(problem, np.asarray(u0, dtype=float))
            except ConvergenceError as exc:
                logger.debug("start %s failed: %s", u0, exc)
                continue
            best_residual = min(best_residual, grad_norm)
            if grad_norm <= self.settings.outer_accept and np.isfinite(inner.evaluation.value):
                candidates.append((inner.evaluation.value, u, inner, grad_norm))

        if not candidates:
            raise OuterConvergenceError(
                "no start reached the outer tolerance",
                residual=best_residual,
                iterations=self.settings.max_iter,
            )

        value, u, inner, grad_norm = min(candidates, key=lambda item: item[0])
        if inner.at_bound:
            raise InnerBracketError(
                "inner maximizer sits at the sigma bracket end",
                residual=abs(inner.evaluation.d_sigma),
            )

        q, r = problem.to_qr(u)
        return SaddleSolution(
            q=q,
            r=r,
            sigma=problem.report_sigma(inner.sigma, q, r),
            objective=value,
            method="numeric",
            inner_residual=abs(inner.evaluation.d_sigma),
            grad_norm=grad_norm,
        )

    def certificate(self, problem: ScalarProblem, solution: SaddleSolution) -> Dict[str, float]:
        """
        Inner residual and the smallest objective change under +/- step
        perturbations of q and r
        """
        step = self.settings.certificate_step
        changes = []
        for dq, dr in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            q, r = solution.q + dq, solution.r + dr
            if q < 0 or r < 0:
                continue
            changes.append(self.value_at(problem, q, r) - solution.objective)
        return {
            "inner_residual": solution.inner_residual,
            "min_increase": min(changes) if changes else 0.0,
        }
