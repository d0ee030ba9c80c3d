"""
Error Predictions

Training error from the optimal value, generalization error from the
overlaps (closed forms for the supported link pairs, quadrature over the
bivariate Gaussian otherwise).
"""

import math

import numpy as np

from src.core.activations import ActivationFactory, moments
from src.core.quadrature import rule, split_nodes
from src.models.schemas import ActivationKind, SaddleSolution, TaskSpec


def predict_train_error(spec: TaskSpec, solution: SaddleSolution) -> float:
    """C* - lam/2 (q^2 + r^2)"""
    return solution.objective - 0.5 * spec.lam * (solution.q**2 + solution.r**2)


def predict_gen_error(spec: TaskSpec, q: float, r: float) -> float:
    if r < 0:
        raise ValueError("r must be non-negative")
    if spec.phi_hat == ActivationKind.IDENTITY:
        m = moments(spec.phi)
        return m.v - 2.0 * m.c * q + q * q + r * r
    if spec.phi == ActivationKind.SIGN and spec.phi_hat == ActivationKind.SIGN:
        norm = math.hypot(q, r)
        if norm == 0.0:
            raise ValueError("classification error undefined at q = r = 0")
        return math.acos(min(1.0, max(-1.0, q / norm))) / math.pi
    return gen_error_by_quadrature(spec, q, r)


def gen_error_by_quadrature(spec: TaskSpec, q: float, r: float, order: int = 60) -> float:
    """
    4^-upsilon E[(phi(nu1) - phi_hat(nu2))^2] with nu1 = S, nu2 = q S + r H,
    i.e. the Cholesky factor of [[1, q], [q, q^2 + r^2]]. Both variables are
    integrated with rules split at the kinks of their links.
    """
    phi = ActivationFactory.create(spec.phi)
    phi_hat = ActivationFactory.create(spec.phi_hat)
    s, s_weights = split_nodes(phi.kink if phi.kink is not None else 0.0, order)
    target = phi(s)

    if r == 0.0:
        inner = (target - phi_hat(q * s)) ** 2
    elif phi_hat.kink is None:
        gh = rule(order)
        pred = phi_hat(q * s[:, None] + r * gh.nodes[None, :])
        inner = ((target[:, None] - pred) ** 2) @ gh.weights
    else:
        h, h_weights = split_nodes((phi_hat.kink - q * s) / r, order)
        pred = phi_hat(q * s[:, None] + r * h)
        inner = np.sum(h_weights * (target[:, None] - pred) ** 2, axis=1)

    return float(np.dot(s_weights, inner)) / 4.0**spec.upsilon
