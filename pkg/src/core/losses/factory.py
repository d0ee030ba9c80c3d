from typing import Dict, Type

from src.models.schemas import LossKind

from .base import Loss
from .hinge import HingeLoss
from .logistic import LogisticLoss
from .squared import SquaredLoss


class LossFactory:
    """Factory class for creating losses"""

    _losses: Dict[LossKind, Type[Loss]] = {
        LossKind.SQUARED: SquaredLoss,
        LossKind.LOGISTIC: LogisticLoss,
        LossKind.HINGE: HingeLoss,
    }

    @classmethod
    def create_loss(cls, kind: LossKind = LossKind.SQUARED) -> Loss:
        """
        Create a loss by kind

        Args:
            kind: 'squared', 'logistic' or 'hinge'

        Returns:
            Loss instance
        """
        kind = LossKind(kind)
        if kind not in cls._losses:
            raise ValueError(
                f"Unknown loss: {kind}. Available: {cls.get_available_losses()}"
            )
        return cls._losses[kind]()

    @classmethod
    def get_available_losses(cls) -> list:
        """Get list of available loss names"""
        return [k.value for k in cls._losses]

    @classmethod
    def register_loss(cls, kind: LossKind, loss_class: Type[Loss]):
        """Register a new loss implementation"""
        cls._losses[kind] = loss_class
