"""
Activations

Teacher links and predictor links, with the Gaussian moments
c = E[z phi(z)] and v = E[phi(z)^2] that enter every closed form.
"""

import math
from abc import ABC, abstractmethod
from typing import Dict, Optional, Type

import numpy as np

from src.models.schemas import ActivationKind, Moments


class Activation(ABC):
    """Abstract base class for scalar link functions"""

    kind: ActivationKind
    kink: Optional[float] = None

    @abstractmethod
    def __call__(self, z):
        """Apply the link elementwise"""

    @abstractmethod
    def moments(self) -> Moments:
        """Analytic (c, v)"""

    def get_name(self) -> str:
        return self.kind.value


class IdentityActivation(Activation):
    kind = ActivationKind.IDENTITY

    def __call__(self, z):
        return np.asarray(z, dtype=float)

    def moments(self) -> Moments:
        return Moments(c=1.0, v=1.0)


class ReluActivation(Activation):
    kind = ActivationKind.RELU
    kink = 0.0

    def __call__(self, z):
        return np.maximum(np.asarray(z, dtype=float), 0.0)

    def moments(self) -> Moments:
        return Moments(c=0.5, v=0.5)


class SignActivation(Activation):
    """sign with sign(0) = +1"""

    kind = ActivationKind.SIGN
    kink = 0.0

    def __call__(self, z):
        return np.where(np.asarray(z, dtype=float) >= 0.0, 1.0, -1.0)

    def moments(self) -> Moments:
        return Moments(c=math.sqrt(2.0 / math.pi), v=1.0)


class ActivationFactory:
    """Factory class for creating activations"""

    _activations: Dict[ActivationKind, Type[Activation]] = {
        ActivationKind.IDENTITY: IdentityActivation,
        ActivationKind.RELU: ReluActivation,
        ActivationKind.SIGN: SignActivation,
    }

    @classmethod
    def create(cls, kind: ActivationKind) -> Activation:
        kind = ActivationKind(kind)
        if kind not in cls._activations:
            raise ValueError(
                f"Unknown activation: {kind}. Available: {[k.value for k in cls._activations]}"
            )
        return cls._activations[kind]()

    @classmethod
    def get_available_activations(cls) -> list:
        return [k.value for k in cls._activations]


def moments(phi: ActivationKind) -> Moments:
    """Analytic Gaussian moments of phi"""
    return ActivationFactory.create(phi).moments()


def moments_by_quadrature(phi: ActivationKind, order: int = 60) -> Moments:
    """Quadrature cross-check of moments(), split at the kink"""
    from src.core.quadrature import expect_split

    activation = ActivationFactory.create(phi)
    kink = activation.kink if activation.kink is not None else 0.0
    c = expect_split(lambda s: s * activation(s), kink, order)
    v = expect_split(lambda s: activation(s) ** 2, kink, order)
    return Moments(c=c, v=v)
