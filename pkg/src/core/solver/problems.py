"""
Scalar Problems

The deterministic min-max problems whose solutions give the limiting
overlaps of the source, hard-transfer and soft-transfer estimators.

Each problem exposes two outer variables u >= 0, an inner variable
sigma, and `evaluate(u, sigma)` returning the objective, its gradient in
u at fixed sigma (Danskin) and its sigma-derivative. The inner problem is
concave in sigma and is solved in t = log(sigma + mu_min).
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.core.losses import Loss
from src.core.quadrature import GaussianPlane
from src.core.spectra import SpectrumBase


@dataclass(frozen=True)
class Evaluation:
    value: float
    grad: np.ndarray
    d_sigma: float


class ScalarProblem(ABC):
    """min over u >= 0 of sup over sigma of an objective"""

    def __init__(self, loss: Loss, labels: np.ndarray, plane: GaussianPlane, alpha: float, lam: float):
        self.loss = loss
        self.labels = labels
        self.plane = plane
        self.alpha = alpha
        self.lam = lam
        self.t_guess = 0.0

    @property
    def sigma_floor(self) -> float:
        """Inner variable lives on (-sigma_floor, inf)"""
        return 0.0

    def sigma_from_t(self, t: float) -> float:
        return math.exp(t) - self.sigma_floor

    @abstractmethod
    def evaluate(self, u: np.ndarray, sigma: float) -> Evaluation:
        """Objective, u-gradient and sigma-derivative"""

    @abstractmethod
    def to_qr(self, u: np.ndarray) -> Tuple[float, float]:
        """Overlaps (q, r) for outer variables u"""

    @abstractmethod
    def from_qr(self, q: float, r: float) -> Optional[np.ndarray]:
        """Outer variables for (q, r), or None where the inner sup is infinite"""

    def report_sigma(self, sigma: float, q: float, r: float) -> float:
        return sigma

    def _stats(self, q: float, r: float, b: float):
        return self.plane.envelope_stats(self.loss, self.labels, q, r, b)


class HardFormProblem(ScalarProblem):
    """
    Hard transfer with frozen fraction delta < 1; delta = 0 is the
    no-transfer problem and, with source data, the source problem.

    Outer variables are (q, x) with r^2 = x^2 + delta*beta2 + kappa*(q - beta1)^2,
    kappa = delta/(1 - delta), which keeps the inner sup finite for x > 0.
    The objective reads

        lam/2 (q^2 + r^2) + alpha E[M(r H + q S; (1 - delta)/sigma)] - sigma x^2 / 2.
    """

    def __init__(
        self,
        loss: Loss,
        labels: np.ndarray,
        plane: GaussianPlane,
        alpha: float,
        lam: float,
        delta: float = 0.0,
        beta1: float = 0.0,
        beta2: float = 0.0,
        source_scale: bool = False,
    ):
        super().__init__(loss, labels, plane, alpha, lam)
        if not 0.0 <= delta < 1.0:
            raise ValueError("hard-form problems need 0 <= delta < 1")
        self.delta = delta
        self.keep = 1.0 - delta
        self.kappa = delta / (1.0 - delta)
        self.beta1 = beta1
        self.beta2 = beta2
        self.source_scale = source_scale

    def _radius(self, q: float, x: float) -> float:
        return math.sqrt(x * x + self.delta * self.beta2 + self.kappa * (q - self.beta1) ** 2)

    def to_qr(self, u):
        q, x = float(u[0]), float(u[1])
        return q, self._radius(q, x)

    def from_qr(self, q, r):
        x2 = r * r - self.delta * self.beta2 - self.kappa * (q - self.beta1) ** 2
        if x2 < 0:
            return None
        return np.array([q, math.sqrt(x2)])

    def evaluate(self, u, sigma):
        q, x = float(u[0]), float(u[1])
        r = self._radius(q, x)
        stats = self._stats(q, r, self.keep / sigma)

        value = 0.5 * self.lam * (q * q + r * r) + self.alpha * stats.value - 0.5 * sigma * x * x
        if r > 0:
            r_q, r_x = self.kappa * (q - self.beta1) / r, x / r
        else:
            r_q, r_x = 0.0, 1.0
        d_q = self.lam * (q + self.kappa * (q - self.beta1)) + self.alpha * (stats.grad_q + stats.grad_r * r_q)
        d_x = self.lam * x + self.alpha * stats.grad_r * r_x - sigma * x
        d_sigma = self.alpha * stats.sq_gap / (2.0 * self.keep) - 0.5 * x * x
        return Evaluation(value=value, grad=np.array([d_q, d_x]), d_sigma=d_sigma)

    def report_sigma(self, sigma, q, r):
        # source problems are reported with Moreau parameter r / sigma
        return sigma * r if self.source_scale else sigma


class SoftProblem(ScalarProblem):
    """
    Soft transfer with penalty spectrum P_mu:

        -sigma r^2/2 + B/2 T2(sigma) + alpha E[M(r H + q S; T1(sigma))]
        + lam/2 (q^2 + r^2) - (q - beta1)^2/2 (sigma - 1/T1(sigma))

    with beta1 = rho q_s and B = (1 - rho^2) q_s^2 + r_s^2.
    """

    def __init__(
        self,
        loss: Loss,
        labels: np.ndarray,
        plane: GaussianPlane,
        alpha: float,
        lam: float,
        spectrum: SpectrumBase,
        beta1: float,
        beta2: float,
        spectrum_order: int = 200,
    ):
        super().__init__(loss, labels, plane, alpha, lam)
        self.spectrum = spectrum
        self.beta1 = beta1
        self.beta2 = beta2
        self.spectrum_order = spectrum_order

    @property
    def sigma_floor(self) -> float:
        return self.spectrum.mu_min

    def to_qr(self, u):
        return float(u[0]), float(u[1])

    def from_qr(self, q, r):
        return np.array([q, r])

    def evaluate(self, u, sigma):
        q, r = float(u[0]), float(u[1])
        tr = self.spectrum.transforms(sigma, self.spectrum_order)
        stats = self._stats(q, r, tr.t1)
        coupling = sigma - 1.0 / tr.t1
        offset = q - self.beta1
        t1_sq = -tr.dt1

        value = (
            -0.5 * sigma * r * r
            + 0.5 * self.beta2 * tr.t2
            + self.alpha * stats.value
            + 0.5 * self.lam * (q * q + r * r)
            - 0.5 * offset * offset * coupling
        )
        d_q = self.alpha * stats.grad_q + self.lam * q - offset * coupling
        d_r = self.alpha * stats.grad_r + self.lam * r - sigma * r
        d_sigma = (
            -0.5 * r * r
            + 0.5 * self.beta2 * tr.dt2
            + self.alpha * t1_sq * stats.sq_gap / (2.0 * tr.t1**2)
            - 0.5 * offset * offset * (1.0 - t1_sq / tr.t1**2)
        )
        return Evaluation(value=value, grad=np.array([d_q, d_r]), d_sigma=d_sigma)
