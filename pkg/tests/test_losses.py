"""
Tests for the losses, proximal operators and Moreau envelopes
"""

import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from src.core.errors import ProxConvergenceError
from src.core.losses import LossFactory, moreau, prox
from src.core.losses.logistic import LogisticLoss
from src.models.schemas import LossForm, LossKind


def prox_oracle(loss, y, a, b):
    """Bounded scalar minimization of l(y; c) + (c - a)^2 / (2 b)"""
    result = minimize_scalar(
        lambda c: float(loss.value(y, c)) + (c - a) ** 2 / (2.0 * b),
        bounds=(a - 10.0 - 10.0 * b, a + 10.0 + 10.0 * b),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return result.x


class TestProx:
    """Test the proximal operators"""

    def test_squared_prox(self):
        """Test the squared-loss prox (a + b y)/(1 + b)"""
        assert prox(LossKind.SQUARED, 1.0, 0.0, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_hinge_inactive(self):
        """Test that the hinge prox is the identity when y a >= 1"""
        assert prox(LossKind.HINGE, 1.0, 2.0, 1.0) == 2.0

    def test_hinge_shifted(self):
        """Test the hinge prox for a <= 1 - b"""
        assert prox(LossKind.HINGE, 1.0, 0.0, 0.5) == pytest.approx(0.5)

    def test_hinge_pinned(self):
        """Test the hinge prox between the two linear pieces"""
        assert prox(LossKind.HINGE, 1.0, 0.8, 0.5) == pytest.approx(1.0)
        assert prox(LossKind.HINGE, -1.0, -0.8, 0.5) == pytest.approx(-1.0)

    def test_hinge_rejects_real_labels(self):
        """Test that hinge needs +/-1 labels"""
        with pytest.raises(ValueError):
            prox(LossKind.HINGE, 0.5, 0.0, 1.0)

    @pytest.mark.parametrize("kind", list(LossKind))
    @pytest.mark.parametrize("y", [-1.0, 1.0])
    @pytest.mark.parametrize("a", [-2.5, -0.3, 0.0, 0.7, 3.0])
    @pytest.mark.parametrize("b", [0.01, 0.5, 4.0])
    def test_prox_matches_oracle(self, kind, y, a, b):
        """Test every prox against a direct scalar minimization"""
        loss = LossFactory.create_loss(kind)
        assert float(loss.prox(y, a, b)) == pytest.approx(prox_oracle(loss, y, a, b), abs=1e-7)

    @pytest.mark.parametrize("kind", list(LossKind))
    def test_zero_step_rejected(self, kind):
        """Test that the step must be positive"""
        loss = LossFactory.create_loss(kind)
        with pytest.raises(ValueError, match="positive"):
            loss.prox(1.0, 0.0, 0.0)

    def test_vectorized_prox(self):
        """Test that prox broadcasts over arrays"""
        loss = LossFactory.create_loss(LossKind.LOGISTIC)
        y = np.array([1.0, -1.0, 1.0])
        a = np.array([0.0, 0.5, -2.0])
        result = loss.prox(y, a, 1.0)

        assert result.shape == (3,)
        for i in range(3):
            assert result[i] == pytest.approx(float(loss.prox(y[i], a[i], 1.0)), abs=1e-14)

    def test_logistic_prox_tiny_step(self):
        """Test that the logistic prox keeps relative precision for tiny steps"""
        loss = LogisticLoss()
        b = 1e-10
        gap = float(loss.gap(1.0, 0.0, b))
        # prox moves right by b expit(-(a + d)) ~ b / 2
        assert gap == pytest.approx(-b / 2.0, rel=1e-8)

    def test_logistic_prox_iteration_cap(self):
        """Test that a starved Newton iteration reports non-convergence"""
        loss = LogisticLoss(max_iter=1, tol=1e-300)
        with pytest.raises(ProxConvergenceError):
            loss.prox(1.0, 0.0, 100.0)


class TestMoreau:
    """Test the Moreau envelopes"""

    def test_squared_envelope(self):
        """Test (y - a)^2 / (2 (1 + b))"""
        assert moreau(LossKind.SQUARED, 1.0, 0.0, 1.0).value == pytest.approx(0.25, abs=1e-15)

    def test_hinge_envelope(self):
        """Test the shifted hinge envelope"""
        assert moreau(LossKind.HINGE, 1.0, 0.0, 0.5).value == pytest.approx(0.75, abs=1e-15)

    def test_logistic_small_step_limit(self):
        """Test that M(a; b) tends to l(y; a) as b -> 0"""
        assert moreau(LossKind.LOGISTIC, 1.0, 0.0, 1e-8).value == pytest.approx(math.log(2.0), abs=1e-6)

    @pytest.mark.parametrize("kind", list(LossKind))
    def test_envelope_below_loss(self, kind):
        """Test M(a; b) <= l(y; a)"""
        loss = LossFactory.create_loss(kind)
        for a in np.linspace(-3.0, 3.0, 13):
            envelope = loss.moreau(1.0, a, 0.7)
            assert envelope.value <= float(loss.value(1.0, a)) + 1e-12

    @pytest.mark.parametrize("kind", list(LossKind))
    def test_envelope_derivative(self, kind):
        """Test dM/da = (a - prox)/b against central differences"""
        loss = LossFactory.create_loss(kind)
        h = 1e-6
        for a in (-1.7, 0.5, 2.3):
            numeric = (loss.moreau(1.0, a + h, 0.8).value - loss.moreau(1.0, a - h, 0.8).value) / (2.0 * h)
            assert loss.moreau(1.0, a, 0.8).d_da == pytest.approx(numeric, abs=1e-6)


class TestLossFactory:
    """Test the loss registry"""

    def test_forms(self):
        """Test the regression / classification split"""
        assert LossFactory.create_loss(LossKind.SQUARED).form == LossForm.REGRESSION
        assert LossFactory.create_loss(LossKind.LOGISTIC).form == LossForm.CLASSIFICATION
        assert LossFactory.create_loss(LossKind.HINGE).form == LossForm.CLASSIFICATION

    def test_create_from_string(self):
        """Test creating losses by name"""
        assert LossFactory.create_loss("hinge").get_name() == "hinge"

    def test_unknown_loss(self):
        """Test that unknown losses are rejected"""
        with pytest.raises(ValueError):
            LossFactory.create_loss("huber")
