"""
Schemas

Immutable value types shared across the solvers, the simulation lab and
the sweep services. Everything serializes to JSON with lower_snake_case
keys; the ridge strength is exposed as "lambda".
"""

import math
from enum import Enum
from typing import Annotated, Any, ClassVar, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.spectra import PointMass, SpectralDist


class ActivationKind(str, Enum):
    IDENTITY = "identity"
    RELU = "relu"
    SIGN = "sign"


class LossForm(str, Enum):
    REGRESSION = "regression"
    CLASSIFICATION = "classification"


class LossKind(str, Enum):
    SQUARED = "squared"
    LOGISTIC = "logistic"
    HINGE = "hinge"

    @property
    def form(self) -> LossForm:
        if self is LossKind.SQUARED:
            return LossForm.REGRESSION
        return LossForm.CLASSIFICATION


class TransferMode(str, Enum):
    NONE = "none"
    HARD = "hard"
    SOFT = "soft"


class NoTransfer(BaseModel):
    model_config = ConfigDict(frozen=True)
    mode: Literal["none"] = "none"


class HardTransfer(BaseModel):
    """Freeze an expected fraction delta of target weights to source values"""
    model_config = ConfigDict(frozen=True)
    mode: Literal["hard"] = "hard"
    delta: float = 0.0


class SoftTransfer(BaseModel):
    """Quadratic proximity penalty toward the source solution"""
    model_config = ConfigDict(frozen=True)
    mode: Literal["soft"] = "soft"
    spectrum: SpectralDist = Field(default_factory=PointMass)


Transfer = Annotated[
    Union[NoTransfer, HardTransfer, SoftTransfer], Field(discriminator="mode")
]


class TaskSpec(BaseModel):
    """One source/target experiment"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    alpha_s: float = Field(description="Source samples per dimension")
    alpha_t: float = Field(description="Target samples per dimension")
    rho: float = Field(default=1.0, description="Source/target teacher similarity")
    lam: float = Field(default=0.0, alias="lambda", description="Ridge strength")
    loss: LossKind = LossKind.SQUARED
    phi: ActivationKind = ActivationKind.IDENTITY
    phi_hat: ActivationKind = ActivationKind.IDENTITY
    upsilon: int = Field(default=0, description="0 for regression, 1 for classification")
    transfer: Transfer = Field(default_factory=NoTransfer)

    @property
    def mode(self) -> TransferMode:
        return TransferMode(self.transfer.mode)

    def with_transfer(self, transfer: Any) -> "TaskSpec":
        return self.model_copy(update={"transfer": transfer})

    def as_source(self) -> "TaskSpec":
        """Same spec without transfer; used to key and solve the source task"""
        return self.with_transfer(NoTransfer())

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any]) -> "TaskSpec":
        return cls.model_validate(data)


class Moments(BaseModel):
    """c = E[z phi(z)], v = E[phi(z)^2] for standard normal z"""
    model_config = ConfigDict(frozen=True)
    c: float
    v: float


class SaddleSolution(BaseModel):
    """Solution of one scalar min-max problem"""

    model_config = ConfigDict(frozen=True)

    q: float
    r: float
    sigma: float
    objective: float
    method: str = Field(default="numeric", description="numeric, closed_form or copy_limit")
    inner_residual: float = 0.0
    grad_norm: float = 0.0


class PhaseBoundary(BaseModel):
    model_config = ConfigDict(frozen=True)
    rho_c: float
    regime_below: str = "negative transfer"
    regime_above: str = "positive transfer"

    @property
    def never_transfer(self) -> bool:
        return self.rho_c > 1.0


class RegressionDecision(BaseModel):
    """Optimal hard-transfer rate for squared loss at lambda = 0"""
    model_config = ConfigDict(frozen=True)
    delta_star: Optional[float] = Field(description="0, 1, or None on the boundary")
    z_t: float
    rho_c: float

    @property
    def at_boundary(self) -> bool:
        return self.delta_star is None


class ClassCubic(BaseModel):
    """Constants of the sign-sign classification error curve in delta"""

    model_config = ConfigDict(frozen=True)

    a_coef: float
    K1: float
    K2: float
    K3: float
    Z1: float
    Z2: float
    Z3: float
    Z4: float
    c: float
    alpha_t: float

    def h(self, delta: float) -> float:
        return ((self.Z1 * delta + self.Z2) * delta + self.Z3) * delta + self.Z4

    def alignment(self, delta: float) -> float:
        """(a delta + c) sqrt(delta + alpha_t - 1) / sqrt(K1 delta^2 + K2 delta + K3)"""
        quad = (self.K1 * delta + self.K2) * delta + self.K3
        return (self.a_coef * delta + self.c) * math.sqrt(delta + self.alpha_t - 1.0) / math.sqrt(quad)

    def error(self, delta: float) -> float:
        return math.acos(min(1.0, max(-1.0, self.alignment(delta)))) / math.pi

    def roots_in_unit_interval(self) -> List[float]:
        roots = np.roots([self.Z1, self.Z2, self.Z3, self.Z4])
        real = [float(z.real) for z in roots if abs(z.imag) < 1e-12]
        return sorted(z for z in real if 0.0 <= z <= 1.0)


class DeltaCurve(BaseModel):
    model_config = ConfigDict(frozen=True)
    delta_star: float
    deltas: List[float]
    errors: List[float]


class PhaseRow(BaseModel):
    model_config = ConfigDict(frozen=True)
    alpha_t: float
    alpha_s: float
    rho: float
    delta_star: float
    e_test_star: float
    e_test_none: float
    e_test_full: float
    rho_c: Optional[float] = None
    g_threshold: Optional[float] = None
    sufficiency_gap: bool = False


class TrialRecord(BaseModel):
    """Outcome of one Monte Carlo trial"""

    model_config = ConfigDict(frozen=True)

    CSV_COLUMNS: ClassVar[Tuple[str, ...]] = (
        "seed",
        "q_hat",
        "r_hat",
        "train_error",
        "gen_error",
        "solver_iters",
        "kkt_residual",
    )

    seed: int
    q_hat: float
    r_hat: float
    train_error: float
    gen_error: float
    solver_iters: int
    kkt_residual: float
    q_hat_source: Optional[float] = None
    q_hat_cross: Optional[float] = Field(default=None, description="Projection on the other task's teacher")
    r_hat_source: Optional[float] = None
    realized_fraction: Optional[float] = None


class TrialSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_trials: int
    means: Dict[str, float]
    std_errors: Optional[Dict[str, float]] = None
    records: List[TrialRecord] = Field(default_factory=list)


class OutputKind(str, Enum):
    PREDICT = "predict"
    SIMULATE = "simulate"
    PHASE = "phase"


class ResultFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class GridSpec(BaseModel):
    model_config = ConfigDict(frozen=True)
    start: float
    stop: float
    count: int = 1

    @model_validator(mode="after")
    def check_bounds(self):
        if self.count < 1:
            raise ValueError("grid count must be at least 1")
        if self.start > self.stop:
            raise ValueError("grid start must not exceed stop")
        return self

    def values(self) -> List[float]:
        if self.count == 1:
            return [float(self.start)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.count)]


class SimSettings(BaseModel):
    model_config = ConfigDict(frozen=True)
    p: int = Field(default=500, ge=2)
    n_trials: int = Field(default=20, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2**64)


SWEEP_AXES = ("alpha_t", "rho", "delta", "lambda", "beta_t")


class SweepConfig(BaseModel):
    """A sweep over one field of a base TaskSpec"""

    model_config = ConfigDict(frozen=True)

    base: TaskSpec
    sweep_axis: str = "rho"
    grid: GridSpec
    outputs: List[OutputKind] = Field(default_factory=lambda: [OutputKind.PREDICT])
    sim: Optional[SimSettings] = None
    out_path: str = "results.csv"
    format: ResultFormat = ResultFormat.CSV
    alpha_s_ratio: Optional[float] = Field(default=None, description="Tie alpha_s = ratio * alpha_t on alpha_t sweeps")
    alpha_pairs: Optional[List[Tuple[float, float]]] = Field(default=None, description="(alpha_t, alpha_s) pairs for phase diagrams")
    delta_resolution: int = Field(default=201, ge=2, description="delta grid for optimal-rate curves")

    @field_validator("sweep_axis")
    @classmethod
    def validate_axis(cls, v):
        if v not in SWEEP_AXES:
            raise ValueError(f"sweep_axis must be one of: {list(SWEEP_AXES)}")
        return v

    @model_validator(mode="after")
    def check_axis_on_base(self):
        mode = self.base.transfer.mode
        if self.sweep_axis == "delta" and mode != "hard":
            raise ValueError("delta sweeps need a hard-transfer base spec")
        if self.sweep_axis == "beta_t" and mode != "soft":
            raise ValueError("beta_t sweeps need a soft-transfer base spec")
        return self

    def spec_at(self, value: float) -> TaskSpec:
        """Base spec with the sweep axis set to value"""
        base = self.base
        if self.sweep_axis == "alpha_t":
            update: Dict[str, Any] = {"alpha_t": value}
            if self.alpha_s_ratio is not None:
                update["alpha_s"] = self.alpha_s_ratio * value
            return base.model_copy(update=update)
        if self.sweep_axis == "rho":
            return base.model_copy(update={"rho": value})
        if self.sweep_axis == "lambda":
            return base.model_copy(update={"lam": value})
        if self.sweep_axis == "delta":
            return base.with_transfer(HardTransfer(delta=value))
        spectrum = base.transfer.spectrum.with_scale(value)
        return base.with_transfer(SoftTransfer(spectrum=spectrum))

    def specs(self) -> List[Tuple[float, TaskSpec]]:
        return [(x, self.spec_at(x)) for x in self.grid.values()]
