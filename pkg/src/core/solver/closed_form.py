"""
Closed Forms

Squared loss without ridge (alpha > 1): explicit overlaps, the explicit
max-form objectives, and the copy limit of hard transfer.
"""

import math
from typing import Tuple

from src.models.schemas import Moments, SaddleSolution


def source_objective(m: Moments, alpha: float, lam: float, q: float, r: float) -> float:
    """1/2 max{-r + sqrt(alpha (q^2 + r^2 + v - 2 q c)), 0}^2 + lam/2 (q^2 + r^2)"""
    mse = q * q + r * r + m.v - 2.0 * q * m.c
    return 0.5 * max(-r + math.sqrt(alpha * mse), 0.0) ** 2 + 0.5 * lam * (q * q + r * r)


def hard_objective(
    m: Moments, alpha: float, lam: float, delta: float, beta1: float, beta2: float, q: float, r: float
) -> Tuple[float, float]:
    """
    Squared-loss hard-transfer objective after the inner sup, and the
    maximizing sigma; (inf, nan) where the inner sup diverges
    """
    keep = 1.0 - delta
    mse = q * q + r * r + m.v - 2.0 * q * m.c
    if keep == 0.0:
        return 0.5 * lam * (q * q + r * r) + 0.5 * alpha * mse, 0.0
    x2 = r * r - delta * beta2 - delta / keep * (q - beta1) ** 2
    if x2 < 0:
        return math.inf, math.nan
    x = math.sqrt(x2)
    root = math.sqrt(alpha * mse * keep)
    sigma = math.inf if x == 0 else max(root / x - keep, 0.0)
    value = 0.5 * max(math.sqrt(alpha * mse) - x * math.sqrt(keep), 0.0) ** 2
    return value + 0.5 * lam * (q * q + r * r), sigma


def source_solution(m: Moments, alpha_s: float) -> SaddleSolution:
    """q_s = c, r_s = sqrt(v - c^2)/sqrt(alpha_s - 1)"""
    r = math.sqrt((m.v - m.c**2) / (alpha_s - 1.0))
    return SaddleSolution(
        q=m.c,
        r=r,
        sigma=(alpha_s - 1.0) * r,
        objective=0.5 * (alpha_s - 1.0) * (m.v - m.c**2),
        method="closed_form",
    )


def hard_overlaps(m: Moments, alpha_t: float, delta: float, beta1: float, beta2: float) -> Tuple[float, float]:
    c, v = m.c, m.v
    q = (1.0 - delta) * c + delta * beta1
    r2 = (
        (1.0 - delta)
        / (alpha_t + delta - 1.0)
        * ((delta - 1.0) * c * c + delta * beta1 * beta1 + delta * beta2 + v - 2.0 * delta * beta1 * c)
        + delta * beta2
        + delta * (1.0 - delta) * (c - beta1) ** 2
    )
    return q, math.sqrt(max(r2, 0.0))


def hard_solution(m: Moments, alpha_t: float, delta: float, beta1: float, beta2: float) -> SaddleSolution:
    q, r = hard_overlaps(m, alpha_t, delta, beta1, beta2)
    objective, sigma = hard_objective(m, alpha_t, 0.0, delta, beta1, beta2, q, r)
    return SaddleSolution(q=q, r=r, sigma=sigma, objective=objective, method="closed_form")


def regression_test_error(m: Moments, alpha_t: float, delta: float, beta1: float, beta2: float) -> float:
    """alpha_t/(alpha_t + delta - 1) (delta{(c - beta1)^2 + beta2} + v - c^2)"""
    c, v = m.c, m.v
    return alpha_t / (alpha_t + delta - 1.0) * (delta * ((c - beta1) ** 2 + beta2) + v - c * c)
