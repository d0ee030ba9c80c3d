"""
Specification Validation

Collects every violated constraint of a TaskSpec rather than stopping
at the first one.
"""

from typing import List

from src.core.errors import SpecValidationError
from src.models.schemas import ActivationKind, LossForm, TaskSpec

_SUPPORTED_PAIRS = {
    (ActivationKind.IDENTITY, ActivationKind.IDENTITY),
    (ActivationKind.RELU, ActivationKind.IDENTITY),
    (ActivationKind.SIGN, ActivationKind.SIGN),
}


def check_spec(spec: TaskSpec) -> List[str]:
    """Return the list of violated constraints (empty when valid)"""
    errors: List[str] = []

    if not spec.alpha_s > 0:
        errors.append("alpha_s must be positive")
    if not spec.alpha_t > 0:
        errors.append("alpha_t must be positive")
    if not -1.0 <= spec.rho <= 1.0:
        errors.append("rho out of range")
    if spec.lam < 0:
        errors.append("lambda must be non-negative")

    if spec.upsilon not in (0, 1):
        errors.append("upsilon must be 0 or 1")
    elif spec.upsilon == 1 and spec.phi_hat != ActivationKind.SIGN:
        errors.append("upsilon = 1 requires phi_hat = sign")
    elif spec.upsilon == 0 and spec.phi_hat != ActivationKind.IDENTITY:
        errors.append("upsilon = 0 requires phi_hat = identity")

    if (spec.phi, spec.phi_hat) not in _SUPPORTED_PAIRS:
        errors.append(
            f"unsupported activation pair ({spec.phi.value}, {spec.phi_hat.value})"
        )
    if spec.loss.form == LossForm.CLASSIFICATION and spec.phi != ActivationKind.SIGN:
        errors.append(f"{spec.loss.value} loss requires sign labels")

    transfer = spec.transfer
    if transfer.mode == "hard" and not 0.0 <= transfer.delta <= 1.0:
        errors.append("delta out of range")
    if transfer.mode == "soft":
        errors.extend(transfer.spectrum.violations())

    return errors


def validate_spec(spec: TaskSpec) -> TaskSpec:
    """Return the spec unchanged, or raise SpecValidationError listing every violation"""
    errors = check_spec(spec)
    if errors:
        raise SpecValidationError(errors)
    return spec


validate = validate_spec
