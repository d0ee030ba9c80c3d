"""
Loss Base

Common interface of the convex losses: pointwise value, proximal
operator and Moreau envelope with its derivative in the anchor.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.models.schemas import LossForm, LossKind

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class EnvelopeEval:
    """Moreau envelope M(a; b) = min_c l(y; c) + (c - a)^2 / (2 b)"""

    value: ArrayLike
    prox: ArrayLike
    d_da: ArrayLike


def check_step(b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if not np.all(b > 0):
        raise ValueError("Moreau step b must be positive")
    return b


class Loss(ABC):
    """Abstract base class for scalar losses l(y; x)"""

    kind: LossKind
    # Upper bound on d^2 l / dx^2 for unit labels; None for non-smooth losses
    curvature_bound: Optional[float] = None

    @property
    def form(self) -> LossForm:
        return self.kind.form

    @abstractmethod
    def value(self, y: ArrayLike, x: ArrayLike) -> np.ndarray:
        """Pointwise loss"""

    @abstractmethod
    def derivative(self, y: ArrayLike, x: ArrayLike) -> np.ndarray:
        """A (sub)gradient in x"""

    @abstractmethod
    def _prox(self, y: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Minimizer of l(y; c) + (c - a)^2 / (2 b); inputs already broadcast"""

    def prox(self, y: ArrayLike, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        b = check_step(b)
        y, a, b = np.broadcast_arrays(
            np.asarray(y, dtype=float), np.asarray(a, dtype=float), b
        )
        return self._prox(y, a, b)

    def gap(self, y: ArrayLike, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        """a - prox(a); overridden where it can be computed without cancellation"""
        return np.asarray(a, dtype=float) - self.prox(y, a, b)

    def moreau(self, y: ArrayLike, a: ArrayLike, b: ArrayLike) -> EnvelopeEval:
        b = check_step(b)
        gap = self.gap(y, a, b)
        c = np.asarray(a, dtype=float) - gap
        value = self.value(y, c) + gap**2 / (2.0 * b)
        return EnvelopeEval(value=_scalar(value), prox=_scalar(c), d_da=_scalar(gap / b))

    def get_name(self) -> str:
        return self.kind.value


def _scalar(x: np.ndarray) -> ArrayLike:
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x
