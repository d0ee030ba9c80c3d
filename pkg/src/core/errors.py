"""
Error Types

Exception hierarchy shared by the solvers, the simulation lab and the
sweep services. Each error subclasses the builtin a caller would expect
(ValueError for bad input, RuntimeError for numerical failure).
"""

from typing import Iterable, List, Optional


class TransferLabError(Exception):
    """Base class for every error raised by this package"""


class SpecValidationError(TransferLabError, ValueError):
    """A task specification violates one or more constraints"""

    def __init__(self, violations: Iterable[str]):
        self.violations: List[str] = list(violations)
        super().__init__("; ".join(self.violations) or "invalid specification")


class UnsupportedConfigurationError(TransferLabError, ValueError):
    """A valid specification that the requested computation does not cover"""


class QuadratureError(TransferLabError, ValueError):
    """An integrand produced a non-finite value on the node grid"""


class ConvergenceError(TransferLabError, RuntimeError):
    """An iterative method stopped without meeting its tolerance"""

    def __init__(
        self,
        message: str,
        residual: Optional[float] = None,
        iterations: Optional[int] = None,
    ):
        self.residual = residual
        self.iterations = iterations
        details = []
        if residual is not None:
            details.append(f"residual={residual:.3e}")
        if iterations is not None:
            details.append(f"iterations={iterations}")
        if details:
            message = f"{message} ({', '.join(details)})"
        super().__init__(message)


class ProxConvergenceError(ConvergenceError):
    """Scalar proximal Newton iteration hit its cap"""


class InnerBracketError(ConvergenceError):
    """The inner maximization over sigma has no root inside the bracket"""


class OuterConvergenceError(ConvergenceError):
    """The outer minimization over (q, r) did not reach its tolerance"""


class ErmConvergenceError(ConvergenceError):
    """The finite-size ERM solver hit its iteration cap"""


class TrialFailedError(TransferLabError, RuntimeError):
    """A Monte Carlo trial failed; carries the seed needed to replay it"""

    def __init__(self, seed: int, stage: str, cause: Exception):
        self.seed = seed
        self.stage = stage
        self.cause = cause
        super().__init__(f"trial seed={seed} failed during {stage}: {cause}")
