"""
Logistic Loss

Prox by safeguarded Newton on the shift d = c - a, which keeps full
relative precision when the step b is tiny.
"""

import numpy as np
from scipy.special import expit

from src.core.errors import ProxConvergenceError
from src.models.schemas import LossKind

from .base import Loss, check_step


class LogisticLoss(Loss):
    """l(y; x) = log(1 + exp(-y x))"""

    kind = LossKind.LOGISTIC
    curvature_bound = 0.25

    def __init__(self, max_iter: int = 100, tol: float = 1e-12):
        self.max_iter = max_iter
        self.tol = tol

    def value(self, y, x):
        return np.logaddexp(0.0, -np.asarray(y, dtype=float) * np.asarray(x, dtype=float))

    def derivative(self, y, x):
        y = np.asarray(y, dtype=float)
        return -y * expit(-y * np.asarray(x, dtype=float))

    def _prox(self, y, a, b):
        return a + self._shift(y, a, b)

    def gap(self, y, a, b):
        b = check_step(b)
        y, a, b = np.broadcast_arrays(
            np.asarray(y, dtype=float), np.asarray(a, dtype=float), b
        )
        return -self._shift(y, a, b)

    def _shift(self, y: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Root d of g(d) = -y expit(-y (a + d)) + d / b"""
        bound = b * np.abs(y)
        lo = -bound
        hi = bound.copy()
        d = np.zeros_like(a)

        for _ in range(self.max_iter):
            s = expit(-y * (a + d))
            g = -y * s + d / b
            collapsed = (hi - lo) <= 4.0 * np.finfo(float).eps * np.maximum(np.abs(d), 1e-300)
            active = (np.abs(g) > self.tol) & ~collapsed
            if not active.any():
                return d

            hi = np.where(g > 0, d, hi)
            lo = np.where(g < 0, d, lo)
            slope = y * y * s * (1.0 - s) + 1.0 / b
            newton = d - g / slope
            inside = (newton > lo) & (newton < hi)
            candidate = np.where(inside, newton, 0.5 * (lo + hi))
            d = np.where(active, candidate, d)

        s = expit(-y * (a + d))
        residual = float(np.max(np.abs(-y * s + d / b)))
        if residual <= self.tol:
            return d
        raise ProxConvergenceError(
            "logistic prox did not converge", residual=residual, iterations=self.max_iter
        )
