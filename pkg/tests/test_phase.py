"""
Tests for phase boundaries, the classification cubic and the optimal-rate
sweeps
"""

import math

import numpy as np
import pytest

from src.core.activations import moments
from src.core.errors import UnsupportedConfigurationError
from src.core.phase import (
    BOUNDARY_TOL,
    boundary_sweep,
    class_cubic,
    delta_grid,
    delta_star_numeric,
    delta_star_regression,
    g_threshold,
    phase_row,
    rho_c,
)
from src.core.solver import predict_gen_error, solve_source
from src.core.solver.closed_form import hard_overlaps, source_solution
from src.models.schemas import ActivationKind, LossKind, NoTransfer, TaskSpec


def _sign_spec(rho: float, alpha_t: float = 2.0, alpha_s: float = 4.0) -> TaskSpec:
    return TaskSpec(
        alpha_s=alpha_s,
        alpha_t=alpha_t,
        rho=rho,
        phi=ActivationKind.SIGN,
        phi_hat=ActivationKind.SIGN,
        upsilon=1,
    )


def _relu_spec(rho: float) -> TaskSpec:
    return TaskSpec(alpha_s=4.0, alpha_t=2.0, rho=rho, phi=ActivationKind.RELU)


class TestRegressionBoundary:
    """Test rho_c and delta_star_regression"""

    def test_relu_critical_similarity(self):
        """Test rho_c = 2/3 for ReLU at alpha_s = 4, alpha_t = 2"""
        boundary = rho_c(ActivationKind.RELU, 4.0, 2.0)
        assert boundary.rho_c == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert not boundary.never_transfer

    def test_equal_ratios(self):
        """Test that equal sample ratios put the boundary at rho = 1"""
        assert rho_c(ActivationKind.RELU, 3.0, 3.0).rho_c == pytest.approx(1.0, abs=1e-15)

    def test_more_target_than_source(self):
        """Test that a richer target task never benefits from full transfer"""
        boundary = rho_c(ActivationKind.RELU, 2.0, 4.0)
        assert boundary.rho_c > 1.0
        assert boundary.never_transfer

    def test_requires_overdetermined_tasks(self):
        """Test that the formula needs alpha > 1 on both tasks"""
        with pytest.raises(UnsupportedConfigurationError):
            rho_c(ActivationKind.RELU, 4.0, 1.0)

    def test_decision_below_and_above(self):
        """Test delta* = 0 below rho_c and 1 above it"""
        below = delta_star_regression(_relu_spec(0.5))
        above = delta_star_regression(_relu_spec(0.9))

        assert below.delta_star == 0.0
        assert below.z_t > 0
        assert above.delta_star == 1.0
        assert above.z_t < 0

    def test_decision_on_boundary(self):
        """Test that the boundary itself gives no decision"""
        decision = delta_star_regression(_relu_spec(2.0 / 3.0))
        assert decision.delta_star is None
        assert abs(decision.z_t) < 1e-12

    def test_decision_matches_rho_c(self):
        """Test that the sign of z_t flips at rho_c"""
        critical = rho_c(ActivationKind.RELU, 4.0, 2.0).rho_c
        assert delta_star_regression(_relu_spec(critical - 1e-6)).delta_star == 0.0
        assert delta_star_regression(_relu_spec(critical + 1e-6)).delta_star == 1.0
        assert BOUNDARY_TOL < 1e-6

    def test_decision_needs_closed_forms(self):
        """Test that ridge or margin losses are refused"""
        with pytest.raises(UnsupportedConfigurationError):
            delta_star_regression(_relu_spec(0.5).model_copy(update={"lam": 0.1}))
        with pytest.raises(UnsupportedConfigurationError):
            delta_star_regression(_relu_spec(0.5).model_copy(update={"loss": LossKind.HINGE}))

    def test_decision_needs_identity_predictor(self):
        """Test that a sign predictor is refused"""
        with pytest.raises(UnsupportedConfigurationError):
            delta_star_regression(_sign_spec(0.5))


class TestClassificationThreshold:
    """Test g_threshold and class_cubic"""

    def test_threshold_value(self):
        """Test g(2, 4)"""
        assert g_threshold(2.0, 4.0) == pytest.approx(0.85198, abs=1e-5)

    def test_threshold_equal_ratios(self):
        """Test that g = 1 when alpha_t = alpha_s"""
        assert g_threshold(3.0, 3.0) == pytest.approx(1.0, abs=1e-15)

    def test_cubic_at_full_similarity(self):
        """Test that rho = 1 removes the leading terms"""
        cubic = class_cubic(_sign_spec(1.0))
        assert cubic.a_coef == 0.0
        assert cubic.K1 == 0.0
        assert cubic.Z1 == 0.0

    def test_cubic_needs_sign_pair(self):
        """Test that the cubic needs sign teacher and predictor"""
        with pytest.raises(UnsupportedConfigurationError):
            class_cubic(_relu_spec(0.5))

    @pytest.mark.parametrize("delta", [0.0, 0.1, 0.5, 0.9])
    def test_error_curve_matches_overlaps(self, delta):
        """Test the cubic's error curve against the closed-form overlaps"""
        spec = _sign_spec(0.7)
        m = moments(ActivationKind.SIGN)
        source = source_solution(m, spec.alpha_s)
        beta1 = spec.rho * source.q
        beta2 = (1.0 - spec.rho**2) * source.q**2 + source.r**2
        q, r = hard_overlaps(m, spec.alpha_t, delta, beta1, beta2)

        assert class_cubic(spec).error(delta) == pytest.approx(predict_gen_error(spec, q, r), rel=1e-10)

    @pytest.mark.parametrize("rho", [0.3, 0.7, 0.95])
    def test_cubic_is_derivative_sign(self, rho):
        """Test that h has the sign of the alignment's slope in delta"""
        cubic = class_cubic(_sign_spec(rho))
        step = 1e-6
        for delta in np.linspace(0.05, 0.95, 10):
            slope = (cubic.alignment(delta + step) - cubic.alignment(delta - step)) / (2 * step)
            if abs(slope) < 1e-6:
                continue
            assert math.copysign(1.0, cubic.h(delta)) == math.copysign(1.0, slope)

    def test_threshold_is_slope_at_zero(self):
        """Test that h(0) changes sign at rho = g"""
        g = g_threshold(2.0, 4.0)
        assert class_cubic(_sign_spec(g - 1e-3)).h(0.0) < 0
        assert class_cubic(_sign_spec(g + 1e-3)).h(0.0) > 0

    def test_above_threshold_transfer_helps(self):
        """Test that some hard transfer beats none above the threshold"""
        spec = _sign_spec(0.95)
        source = solve_source(spec)
        curve = delta_star_numeric(spec, source, resolution=101)

        assert curve.delta_star > 0.0
        assert min(curve.errors) < curve.errors[0]

    def test_roots_in_unit_interval(self):
        """Test that reported roots are zeros of h inside [0, 1]"""
        cubic = class_cubic(_sign_spec(0.95))
        for root in cubic.roots_in_unit_interval():
            assert 0.0 <= root <= 1.0
            assert cubic.h(root) == pytest.approx(0.0, abs=1e-9)


class TestDeltaSweeps:
    """Test delta_grid, delta_star_numeric, phase_row and boundary_sweep"""

    def test_delta_grid(self):
        """Test the uniform grid"""
        assert delta_grid(5).tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_delta_grid_too_small(self):
        """Test that one point is refused"""
        with pytest.raises(ValueError):
            delta_grid(1)

    def test_numeric_matches_regression_decision(self):
        """Test the grid argmin against the analytic decision"""
        for rho, expected in ((0.5, 0.0), (0.9, 1.0)):
            spec = _relu_spec(rho)
            curve = delta_star_numeric(spec, solve_source(spec), resolution=11)
            assert curve.delta_star == expected
            assert len(curve.deltas) == len(curve.errors) == 11

    def test_ties_go_to_smaller_delta(self):
        """Test that a flat curve reports the first minimizer"""
        spec = _relu_spec(1.0).model_copy(update={"alpha_s": 2.0})
        curve = delta_star_numeric(spec, solve_source(spec), resolution=5)
        assert curve.errors == pytest.approx([curve.errors[0]] * 5, rel=1e-12)
        assert curve.delta_star == curve.deltas[curve.errors.index(min(curve.errors))]

    def test_phase_row_regression(self):
        """Test a regression phase row and its analytic columns"""
        row = phase_row(_relu_spec(0.0).with_transfer(NoTransfer()), 2.0, 4.0, 0.9, resolution=11)

        assert row.delta_star == 1.0
        assert row.rho_c == pytest.approx(2.0 / 3.0, abs=1e-12)
        assert row.g_threshold is None
        assert row.e_test_star == row.e_test_full
        assert row.e_test_star < row.e_test_none

    def test_phase_row_classification(self):
        """Test a classification phase row and the sufficiency flag"""
        row = phase_row(_sign_spec(0.0), 2.0, 4.0, 0.95, resolution=21)

        assert row.rho_c is None
        assert row.g_threshold == pytest.approx(0.85198, abs=1e-5)
        assert row.delta_star > 0.0
        assert row.sufficiency_gap is False

    def test_phase_row_with_ridge_has_no_analytic_columns(self, app_config):
        """Test that ridge rows leave rho_c and g empty"""
        template = _relu_spec(0.0).model_copy(update={"lam": 0.1})
        row = phase_row(template, 2.0, 4.0, 0.8, resolution=3, config=app_config)

        assert row.rho_c is None
        assert row.g_threshold is None
        assert 0.0 <= row.delta_star <= 1.0

    def test_boundary_sweep_order(self):
        """Test that rows come ordered by pair then rho"""
        rows = boundary_sweep(_relu_spec(0.0), [0.2, 0.9], [(2.0, 4.0), (3.0, 6.0)], resolution=3)

        assert [(row.alpha_t, row.alpha_s, row.rho) for row in rows] == [
            (2.0, 4.0, 0.2),
            (2.0, 4.0, 0.9),
            (3.0, 6.0, 0.2),
            (3.0, 6.0, 0.9),
        ]


class TestBoundaryProperties:
    """Boundary checks over many ratio pairs"""

    def test_slope_sign_matches_threshold(self):
        """Test sign(Z4) = sign(rho - g) over random ratio pairs"""
        rng = np.random.default_rng(12)
        for _ in range(20):
            alpha_t, alpha_s = np.sort(rng.uniform(1.05, 10.0, size=2))
            g = g_threshold(alpha_t, alpha_s)
            for rho in np.linspace(0.0125, 0.9875, 40):
                z4 = class_cubic(_sign_spec(float(rho), alpha_t, alpha_s)).Z4
                assert math.copysign(1.0, z4) == math.copysign(1.0, rho - g)

    def test_regression_switch(self):
        """Test that the numeric optimum switches across the critical similarity"""
        below, above = _relu_spec(0.6660), _relu_spec(0.6673)
        assert delta_star_numeric(below, solve_source(below), resolution=11).delta_star == 0.0
        assert delta_star_numeric(above, solve_source(above), resolution=11).delta_star == 1.0
