"""
Spectral Laws

Limiting eigenvalue distributions of the soft-penalty matrix
Lambda = Sigma^T Sigma, the shift transforms T1 and T2 used by the soft
target problem, and samplers for the diagonal of Sigma used in
simulations.
"""

from abc import abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import roots_jacobi, roots_legendre

from src.core.errors import UnsupportedConfigurationError


@dataclass(frozen=True)
class SpectralTransforms:
    """T1, T2 and their sigma-derivatives at one shift"""

    t1: float
    t2: float
    dt1: float
    dt2: float


@lru_cache(maxsize=32)
def _legendre_unit(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(order)
    return nodes, weights


@lru_cache(maxsize=32)
def _jacobi_beta(order: int, shape_a: float, shape_b: float) -> Tuple[np.ndarray, np.ndarray]:
    # Jacobi weight (1-x)^(b-1) (1+x)^(a-1) on [-1, 1] is the Beta(a, b) density of (1+x)/2
    nodes, weights = roots_jacobi(order, shape_b - 1.0, shape_a - 1.0)
    return 0.5 * (1.0 + nodes), weights / weights.sum()


class SpectrumBase(BaseModel):
    """Common behaviour of every spectral law"""

    model_config = ConfigDict(frozen=True)

    @property
    @abstractmethod
    def mu_min(self) -> float:
        """Infimum of the support"""

    @property
    @abstractmethod
    def mu_max(self) -> float:
        """Supremum of the support"""

    @abstractmethod
    def atoms(self, order: int = 200) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenvalue atoms and weights summing to one (exact or quadrature)"""

    @abstractmethod
    def sample_diag(self, p: int, rng: np.random.Generator) -> np.ndarray:
        """Diagonal of Sigma for a p-dimensional simulation"""

    @abstractmethod
    def with_scale(self, beta_t: float) -> "SpectrumBase":
        """Copy with a new overall scale"""

    def violations(self) -> List[str]:
        return []

    def transforms(self, sigma: float, order: int = 200) -> SpectralTransforms:
        if not sigma > -self.mu_min:
            raise ValueError(
                f"sigma={sigma} must exceed -mu_min={-self.mu_min}"
            )
        mu, w = self.atoms(order)
        d = mu + sigma
        return SpectralTransforms(
            t1=float(np.sum(w / d)),
            t2=float(np.sum(w * mu * sigma / d)),
            dt1=float(-np.sum(w / d**2)),
            dt2=float(np.sum(w * mu**2 / d**2)),
        )

    def is_zero(self) -> bool:
        return self.mu_max == 0.0


class PointMass(SpectrumBase):
    """All eigenvalues equal to mu0 (Sigma = sqrt(mu0) I)"""

    kind: Literal["point_mass"] = "point_mass"
    mu0: float = Field(default=0.0, description="Common eigenvalue")

    @property
    def mu_min(self) -> float:
        return self.mu0

    @property
    def mu_max(self) -> float:
        return self.mu0

    def atoms(self, order: int = 200) -> Tuple[np.ndarray, np.ndarray]:
        return np.array([self.mu0]), np.array([1.0])

    def sample_diag(self, p: int, rng: np.random.Generator) -> np.ndarray:
        return np.full(p, np.sqrt(self.mu0))

    def with_scale(self, beta_t: float) -> "PointMass":
        return PointMass(mu0=beta_t)

    def violations(self) -> List[str]:
        return ["spectrum mu0 must be non-negative"] if self.mu0 < 0 else []


class ScaledSquaredUniform(SpectrumBase):
    """mu = beta_t * V^2 with V uniform on [0, 2] (unit mean)"""

    kind: Literal["scaled_squared_uniform"] = "scaled_squared_uniform"
    beta_t: float = Field(default=1.0, description="Overall scale")

    @property
    def mu_min(self) -> float:
        return 0.0

    @property
    def mu_max(self) -> float:
        return 4.0 * self.beta_t

    def atoms(self, order: int = 200) -> Tuple[np.ndarray, np.ndarray]:
        nodes, weights = _legendre_unit(order)
        v = 1.0 + nodes
        return self.beta_t * v**2, 0.5 * weights

    def sample_diag(self, p: int, rng: np.random.Generator) -> np.ndarray:
        return np.sqrt(self.beta_t) * 2.0 * rng.random(p)

    def with_scale(self, beta_t: float) -> "ScaledSquaredUniform":
        return ScaledSquaredUniform(beta_t=beta_t)

    def violations(self) -> List[str]:
        return ["spectrum beta_t must be non-negative"] if self.beta_t < 0 else []


class ScaledSquaredBeta(SpectrumBase):
    """mu = beta_t * V^2 with V = X (a+b)/a, X ~ Beta(a, b) (unit mean)"""

    kind: Literal["scaled_squared_beta"] = "scaled_squared_beta"
    beta_t: float = Field(default=1.0, description="Overall scale")
    shape_a: float = Field(default=2.0, description="Beta shape a")
    shape_b: float = Field(default=2.0, description="Beta shape b")

    @property
    def _v_max(self) -> float:
        return (self.shape_a + self.shape_b) / self.shape_a

    @property
    def mu_min(self) -> float:
        return 0.0

    @property
    def mu_max(self) -> float:
        return self.beta_t * self._v_max**2

    def atoms(self, order: int = 200) -> Tuple[np.ndarray, np.ndarray]:
        x, weights = _jacobi_beta(order, float(self.shape_a), float(self.shape_b))
        v = x * self._v_max
        return self.beta_t * v**2, weights

    def sample_diag(self, p: int, rng: np.random.Generator) -> np.ndarray:
        x = rng.beta(self.shape_a, self.shape_b, size=p)
        return np.sqrt(self.beta_t) * x * self._v_max

    def with_scale(self, beta_t: float) -> "ScaledSquaredBeta":
        return self.model_copy(update={"beta_t": beta_t})

    def violations(self) -> List[str]:
        errors = []
        if self.beta_t < 0:
            errors.append("spectrum beta_t must be non-negative")
        if self.shape_a <= 0 or self.shape_b <= 0:
            errors.append("spectrum beta shapes must be positive")
        return errors


class Empirical(SpectrumBase):
    """Finite list of eigenvalues, optionally weighted"""

    kind: Literal["empirical"] = "empirical"
    eigenvalues: List[float]
    weights: Optional[List[float]] = None

    @property
    def mu_min(self) -> float:
        return float(min(self.eigenvalues))

    @property
    def mu_max(self) -> float:
        return float(max(self.eigenvalues))

    def _probabilities(self) -> np.ndarray:
        if self.weights is None:
            return np.full(len(self.eigenvalues), 1.0 / len(self.eigenvalues))
        w = np.asarray(self.weights, dtype=float)
        return w / w.sum()

    def atoms(self, order: int = 200) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.eigenvalues, dtype=float), self._probabilities()

    def sample_diag(self, p: int, rng: np.random.Generator) -> np.ndarray:
        mu = rng.choice(np.asarray(self.eigenvalues, dtype=float), size=p, p=self._probabilities())
        return np.sqrt(mu)

    def with_scale(self, beta_t: float) -> "Empirical":
        raise UnsupportedConfigurationError("empirical spectra have no scale to sweep")

    def violations(self) -> List[str]:
        errors = []
        if not self.eigenvalues:
            return ["spectrum needs at least one eigenvalue"]
        if min(self.eigenvalues) < 0:
            errors.append("spectrum eigenvalues must be non-negative")
        if self.weights is not None:
            if len(self.weights) != len(self.eigenvalues):
                errors.append("spectrum weights must match eigenvalues")
            elif min(self.weights) < 0 or sum(self.weights) <= 0:
                errors.append("spectrum weights must be non-negative with positive sum")
        return errors


def two_point(delta: float, level: float) -> Empirical:
    """Spectrum {0 w.p. 1-delta, level w.p. delta}: hard transfer as a soft limit"""
    return Empirical(eigenvalues=[0.0, level], weights=[1.0 - delta, delta])


SpectralDist = Annotated[
    Union[PointMass, ScaledSquaredUniform, ScaledSquaredBeta, Empirical],
    Field(discriminator="kind"),
]


def spectral_T(dist: SpectrumBase, sigma: float, order: int = 200) -> Tuple[float, float]:
    """T1(sigma) = E[1/(mu+sigma)], T2(sigma) = E[mu sigma/(mu+sigma)]"""
    transforms = dist.transforms(sigma, order)
    return transforms.t1, transforms.t2
