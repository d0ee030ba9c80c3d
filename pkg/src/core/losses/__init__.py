"""Convex losses, proximal operators and Moreau envelopes"""

from .base import EnvelopeEval, Loss
from .factory import LossFactory


def prox(loss, y, a, b):
    """Proximal point of loss(y, .) at anchor a with step b"""
    result = LossFactory.create_loss(loss).prox(y, a, b)
    return float(result) if result.ndim == 0 else result


def moreau(loss, y, a, b) -> EnvelopeEval:
    """Moreau envelope of loss(y, .) at anchor a with step b"""
    return LossFactory.create_loss(loss).moreau(y, a, b)


__all__ = ["EnvelopeEval", "Loss", "LossFactory", "prox", "moreau"]
