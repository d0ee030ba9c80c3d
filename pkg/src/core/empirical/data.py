"""
Synthetic Data

Teacher pairs with prescribed similarity and Gaussian teacher-student
datasets.

Gaussian variates come from Generator.standard_normal on the Philox
streams of .rng (numpy's ziggurat sampler), not from a Box-Muller
transform of uniforms. Only the distribution matters to the trials; the
stream split keeps them reproducible per stage.
"""

import math
from dataclasses import dataclass

import numpy as np

from src.core.activations import ActivationFactory
from src.models.schemas import ActivationKind

from .rng import stream


@dataclass(frozen=True)
class TeacherPair:
    xi_t: np.ndarray
    xi_s: np.ndarray

    @property
    def similarity(self) -> float:
        return float(self.xi_t @ self.xi_s)


@dataclass(frozen=True)
class Dataset:
    """n x p Gaussian features with labels phi(features @ teacher)"""

    features: np.ndarray
    labels: np.ndarray
    teacher: np.ndarray

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]


def sample_count(alpha: float, p: int) -> int:
    """Nearest integer to alpha * p, halves rounded up"""
    return int(math.floor(alpha * p + 0.5))


def gen_teachers(p: int, rho: float, rng_seed: int) -> TeacherPair:
    """
    xi_t uniform on the sphere; xi_s = rho xi_t + sqrt(1 - rho^2) xi_r with
    xi_r a uniform direction made orthogonal to xi_t
    """
    if p < 2:
        raise ValueError("teacher dimension must be at least 2")
    if not -1.0 <= rho <= 1.0:
        raise ValueError("rho out of range")

    rng = stream(rng_seed, "teachers")
    g = rng.standard_normal(p)
    xi_t = g / np.linalg.norm(g)

    xi_r = rng.standard_normal(p)
    # two Gram-Schmidt passes keep xi_t . xi_r at rounding level
    for _ in range(2):
        xi_r = xi_r - (xi_t @ xi_r) * xi_t
    xi_r = xi_r / np.linalg.norm(xi_r)

    xi_s = rho * xi_t + math.sqrt(1.0 - rho * rho) * xi_r
    return TeacherPair(xi_t=xi_t, xi_s=xi_s)


def gen_dataset(
    n: int,
    p: int,
    teacher: np.ndarray,
    phi: ActivationKind,
    rng_seed: int,
    stream_name: str = "target",
) -> Dataset:
    if n < 1:
        raise ValueError("empty dataset")
    rng = stream(rng_seed, stream_name)
    features = rng.standard_normal((n, p))
    labels = ActivationFactory.create(phi)(features @ teacher)
    return Dataset(features=features, labels=labels, teacher=teacher)
