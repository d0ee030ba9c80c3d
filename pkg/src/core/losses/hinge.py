import numpy as np

from src.models.schemas import LossKind

from .base import Loss


class HingeLoss(Loss):
    """l(y; x) = max(0, 1 - y x) for labels y in {-1, +1}"""

    kind = LossKind.HINGE
    curvature_bound = None

    def value(self, y, x):
        return np.maximum(0.0, 1.0 - np.asarray(y, dtype=float) * np.asarray(x, dtype=float))

    def derivative(self, y, x):
        y = np.asarray(y, dtype=float)
        return np.where(y * np.asarray(x, dtype=float) < 1.0, -y, 0.0)

    def _prox(self, y, a, b):
        if not np.all(np.abs(y) == 1.0):
            raise ValueError("hinge loss needs labels in {-1, +1}")
        margin = y * a
        # inactive / shifted / pinned at the hinge
        return np.where(margin >= 1.0, a, np.where(margin <= 1.0 - b, a + b * y, y))
