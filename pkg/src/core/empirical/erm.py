"""
Finite-Size ERM

Solves

    min_w (1/p) sum_i l(y_i; a_i^T w) + lam/2 |w|^2 + 1/2 |D (w - w_ref)|^2

over the coordinates not frozen by a hard-transfer mask. Frozen
coordinates are folded into a per-sample offset. Squared loss goes
through conjugate gradients on the normal equations; logistic and hinge
losses through a primal-dual (Chambolle-Pock) iteration whose dual step
uses the scalar prox of the loss via the Moreau identity.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from src.config.app_config import ErmConfig, get_app_config
from src.core.errors import ErmConvergenceError
from src.core.losses import Loss, LossFactory
from src.models.schemas import LossKind

from .data import Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Penalty:
    """Soft transfer: diagonal of Sigma and the reference (source) weights"""

    diag: np.ndarray
    w_ref: np.ndarray


@dataclass(frozen=True)
class Frozen:
    """Hard transfer: coordinates under `mask` are pinned to `values`"""

    mask: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class ErmResult:
    weights: np.ndarray
    iterations: int
    kkt_residual: float


@dataclass
class _FreeProblem:
    """The ERM restricted to free coordinates"""

    loss: Loss
    A: np.ndarray
    y: np.ndarray
    offset: np.ndarray
    lam: float
    d2: np.ndarray
    w_ref: np.ndarray
    p: int

    def grad_penalty(self, w: np.ndarray) -> np.ndarray:
        return self.lam * w + self.d2 * (w - self.w_ref)

    def kkt_residual(self, w: np.ndarray, z: np.ndarray) -> float:
        """Relative stationarity and dual-feasibility residual of (w, z)"""
        u = self.A @ w + self.offset
        grad = self.grad_penalty(w)
        atz = self.A.T @ z
        stationarity = np.linalg.norm(grad + atz) / (1.0 + np.linalg.norm(grad) + np.linalg.norm(atz))
        proj = self.loss.prox(self.y, u + self.p * z, 1.0)
        feasibility = np.linalg.norm(u - proj) / (1.0 + np.linalg.norm(u))
        return float(max(stationarity, feasibility))

    def dual_from_primal(self, w: np.ndarray) -> np.ndarray:
        return self.loss.derivative(self.y, self.A @ w + self.offset) / self.p


def _as_loss(loss: Union[Loss, LossKind, str]) -> Loss:
    return loss if isinstance(loss, Loss) else LossFactory.create_loss(loss)


def erm_objective(
    loss: Union[Loss, LossKind, str],
    dataset: Dataset,
    lam: float,
    w: np.ndarray,
    penalty: Optional[Penalty] = None,
) -> float:
    loss = _as_loss(loss)
    value = float(np.sum(loss.value(dataset.labels, dataset.features @ w))) / dataset.p
    value += 0.5 * lam * float(w @ w)
    if penalty is not None:
        value += 0.5 * float(np.sum((penalty.diag * (w - penalty.w_ref)) ** 2))
    return value


def operator_norm(A: np.ndarray, iterations: int = 50) -> float:
    """Largest singular value by power iteration on A^T A"""
    x = np.full(A.shape[1], 1.0 / math.sqrt(A.shape[1]))
    norm = 0.0
    for _ in range(iterations):
        x = A.T @ (A @ x)
        norm = float(np.linalg.norm(x))
        if norm == 0.0:
            return 0.0
        x /= norm
    return math.sqrt(norm)


def _solve_squared(problem: _FreeProblem, settings: ErmConfig) -> ErmResult:
    A, p = problem.A, problem.p
    diag = problem.lam + problem.d2
    k = A.shape[1]

    def matvec(x):
        return A.T @ (A @ x) / p + diag * x

    operator = LinearOperator((k, k), matvec=matvec, dtype=float)
    rhs = A.T @ (problem.y - problem.offset) / p + problem.d2 * problem.w_ref

    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    w, info = cg(operator, rhs, rtol=settings.cg_tol, atol=0.0, maxiter=settings.max_iter, callback=count)
    if info != 0:
        residual = float(np.linalg.norm(matvec(w) - rhs) / max(np.linalg.norm(rhs), 1e-300))
        raise ErmConvergenceError("conjugate gradients stopped early", residual=residual, iterations=iterations)

    residual = problem.kkt_residual(w, problem.dual_from_primal(w))
    return ErmResult(weights=w, iterations=iterations, kkt_residual=residual)


def _hinge_active_set(
    problem: _FreeProblem, w: np.ndarray, band: float, max_rounds: int = 25, eps: float = 1e-12
):
    """
    Exact hinge solution for the margin partition guessed from w.

    Samples strictly inside the margin get s = 1, samples strictly outside
    get s = 0 and the rest sit on the margin, where y u = 1 pins their dual
    weight. Misclassified samples move between sets until the partition is
    consistent. Returns (w, z) or None when no consistent partition is found.
    """
    A, y, offset, p = problem.A, problem.y, problem.offset, problem.p
    diag = problem.lam + problem.d2
    rhs_base = problem.d2 * problem.w_ref

    margin = y * (A @ w + offset)
    inside = margin < 1.0 - band
    on = np.abs(margin - 1.0) <= band

    for _ in range(max_rounds):
        # w = diag^-1 (b + A^T (y s) / p)
        base = (rhs_base + A[inside].T @ y[inside] / p) / diag
        t = np.zeros(0)
        if on.any():
            A_on = A[on]
            gram = (A_on / diag) @ A_on.T / p
            t = np.linalg.lstsq(gram, y[on] - offset[on] - A_on @ base, rcond=None)[0]
            w = base + (A_on.T @ t) / (p * diag)
        else:
            w = base

        s_on = y[on] * t
        margin = y * (A @ w + offset)
        outside = ~inside & ~on

        leave_low = np.zeros_like(on)
        leave_high = np.zeros_like(on)
        leave_low[on] = s_on < -eps
        leave_high[on] = s_on > 1.0 + eps
        enter_from_inside = inside & (margin > 1.0 + eps)
        enter_from_outside = outside & (margin < 1.0 - eps)

        if not (leave_low.any() or leave_high.any() or enter_from_inside.any() or enter_from_outside.any()):
            s = inside.astype(float)
            s[on] = np.clip(s_on, 0.0, 1.0)
            return w, -y * s / p

        inside = (inside & ~enter_from_inside) | leave_high
        on = (on & ~leave_low & ~leave_high) | enter_from_inside | enter_from_outside

    return None


def _solve_primal_dual(problem: _FreeProblem, settings: ErmConfig) -> ErmResult:
    """
    Chambolle-Pock with the strongly convex penalty as the primal term.
    Smooth losses make the dual term strongly convex too and get the
    linearly convergent step rule. Hinge runs with fixed steps until the
    margin partition settles, then finishes with an exact active-set solve.
    """
    A, y, offset, p = problem.A, problem.y, problem.offset, problem.p
    loss = problem.loss
    n, k = A.shape

    norm = operator_norm(A, settings.power_iters)
    gamma = problem.lam + float(np.min(problem.d2))
    smooth = loss.curvature_bound is not None

    if smooth:
        dual_convexity = p / loss.curvature_bound
        mu = 0.99 * 2.0 * math.sqrt(gamma * dual_convexity) / norm
        tau = mu / (2.0 * gamma)
        kappa = mu / (2.0 * dual_convexity)
        theta = 1.0 / (1.0 + mu)
    else:
        # balance the primal scale O(1) against the dual scale O(sqrt(n)/p)
        balance = math.sqrt(p / math.sqrt(n))
        tau = 0.99 / (norm * balance)
        kappa = 0.99 * balance / norm
        theta = 1.0

    w = np.zeros(k)
    w_bar = w
    z = np.zeros(n)
    residual = math.inf
    next_polish = settings.polish_start

    for iteration in range(1, settings.max_iter + 1):
        v = z + kappa * (A @ w_bar)
        z = v - kappa * (loss.prox(y, v / kappa + offset, 1.0 / (kappa * p)) - offset)

        step = w - tau * (A.T @ z)
        w_new = (step / tau + problem.d2 * problem.w_ref) / (1.0 / tau + problem.lam + problem.d2)

        w_bar = w_new + theta * (w_new - w)
        w = w_new

        if iteration % settings.check_every == 0:
            residual = problem.kkt_residual(w, z)
            if residual <= settings.kkt_tol:
                logger.debug("primal-dual converged in %d iterations (kkt %.2e)", iteration, residual)
                return ErmResult(weights=w, iterations=iteration, kkt_residual=residual)

            if not smooth and residual <= next_polish:
                next_polish = 0.5 * residual
                exact = _hinge_active_set(problem, w, band=max(math.sqrt(residual), 1e-10))
                if exact is not None:
                    polished = problem.kkt_residual(*exact)
                    if polished <= settings.kkt_tol:
                        logger.debug("hinge active set exact after %d iterations (kkt %.2e)", iteration, polished)
                        return ErmResult(weights=exact[0], iterations=iteration, kkt_residual=polished)

    raise ErmConvergenceError(
        f"{loss.get_name()} ERM did not converge",
        residual=residual,
        iterations=settings.max_iter,
    )


def fit_erm(
    loss: Union[Loss, LossKind, str],
    dataset: Dataset,
    lam: float,
    penalty: Optional[Penalty] = None,
    frozen: Optional[Frozen] = None,
    settings: Optional[ErmConfig] = None,
) -> ErmResult:
    """
    Minimize the regularized empirical risk; lam = 0 is run at
    settings.lambda_floor
    """
    settings = settings or get_app_config().erm
    loss = _as_loss(loss)
    A, p = dataset.features, dataset.p

    mask = np.zeros(p, dtype=bool) if frozen is None else np.asarray(frozen.mask, dtype=bool)
    pinned = np.zeros(p) if frozen is None else np.asarray(frozen.values, dtype=float)
    free = ~mask

    if not free.any():
        return ErmResult(weights=pinned.copy(), iterations=0, kkt_residual=0.0)

    if penalty is None:
        d2, w_ref = np.zeros(p), np.zeros(p)
    else:
        d2, w_ref = np.asarray(penalty.diag, dtype=float) ** 2, np.asarray(penalty.w_ref, dtype=float)

    problem = _FreeProblem(
        loss=loss,
        A=A[:, free],
        y=dataset.labels,
        offset=A[:, mask] @ pinned[mask],
        lam=lam if lam > 0 else settings.lambda_floor,
        d2=d2[free],
        w_ref=w_ref[free],
        p=p,
    )

    if loss.kind == LossKind.SQUARED:
        result = _solve_squared(problem, settings)
    else:
        result = _solve_primal_dual(problem, settings)

    weights = np.where(mask, pinned, 0.0)
    weights[free] = result.weights
    logger.debug(
        "%s ERM: p=%d free=%d iterations=%d kkt=%.2e",
        loss.get_name(), p, int(free.sum()), result.iterations, result.kkt_residual,
    )
    return ErmResult(weights=weights, iterations=result.iterations, kkt_residual=result.kkt_residual)
