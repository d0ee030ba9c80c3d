import numpy as np

from src.models.schemas import LossKind

from .base import Loss


class SquaredLoss(Loss):
    """l(y; x) = (y - x)^2 / 2"""

    kind = LossKind.SQUARED
    curvature_bound = 1.0

    def value(self, y, x):
        return 0.5 * (np.asarray(y, dtype=float) - np.asarray(x, dtype=float)) ** 2

    def derivative(self, y, x):
        return np.asarray(x, dtype=float) - np.asarray(y, dtype=float)

    def _prox(self, y, a, b):
        return (a + b * y) / (1.0 + b)

    def gap(self, y, a, b):
        b = np.asarray(b, dtype=float)
        return b * (np.asarray(a, dtype=float) - np.asarray(y, dtype=float)) / (1.0 + b)
