"""
Tests for the value types and specification validation
"""

import pytest
from pydantic import ValidationError

from src.core.errors import SpecValidationError
from src.core.spectra import PointMass, ScaledSquaredBeta
from src.core.validation import check_spec, validate_spec
from src.models.schemas import (
    ActivationKind,
    GridSpec,
    HardTransfer,
    LossKind,
    NoTransfer,
    SoftTransfer,
    SweepConfig,
    TaskSpec,
    TransferMode,
)


class TestTaskSpec:
    """Test the TaskSpec model"""

    def test_lambda_alias(self):
        """Test that the ridge strength serializes as "lambda" """
        spec = TaskSpec(alpha_s=4.0, alpha_t=2.0, lam=0.3)
        data = spec.to_json_dict()

        assert data["lambda"] == 0.3
        assert "lam" not in data
        assert TaskSpec.from_json_dict(data) == spec

    def test_transfer_discriminator(self):
        """Test that the transfer block is parsed by its mode"""
        hard = TaskSpec.model_validate(
            {"alpha_s": 4, "alpha_t": 2, "transfer": {"mode": "hard", "delta": 0.5}}
        )
        soft = TaskSpec.model_validate(
            {
                "alpha_s": 4,
                "alpha_t": 2,
                "transfer": {"mode": "soft", "spectrum": {"kind": "point_mass", "mu0": 0.2}},
            }
        )

        assert hard.mode == TransferMode.HARD
        assert hard.transfer.delta == 0.5
        assert soft.mode == TransferMode.SOFT
        assert soft.transfer.spectrum.mu0 == 0.2

    def test_default_is_no_transfer(self):
        """Test the default transfer mode"""
        spec = TaskSpec(alpha_s=4.0, alpha_t=2.0)
        assert spec.mode == TransferMode.NONE

    def test_as_source_drops_transfer(self):
        """Test that the source view keeps everything but the transfer block"""
        spec = TaskSpec(alpha_s=4.0, alpha_t=2.0, rho=0.7, transfer=HardTransfer(delta=0.3))
        source = spec.as_source()

        assert source.transfer == NoTransfer()
        assert source.rho == 0.7
        assert source.alpha_s == 4.0

    def test_spec_is_frozen(self):
        """Test that specs cannot be mutated"""
        spec = TaskSpec(alpha_s=4.0, alpha_t=2.0)
        with pytest.raises(ValidationError):
            spec.alpha_t = 3.0


class TestValidation:
    """Test check_spec and validate_spec"""

    def setup_method(self):
        self.valid = TaskSpec(
            alpha_s=4.0,
            alpha_t=2.0,
            rho=0.5,
            lam=0.1,
            loss=LossKind.SQUARED,
            phi=ActivationKind.RELU,
            phi_hat=ActivationKind.IDENTITY,
            transfer=HardTransfer(delta=0.5),
        )

    def test_valid_spec(self):
        """Test that a valid spec passes unchanged"""
        assert check_spec(self.valid) == []
        assert validate_spec(self.valid) is self.valid

    def test_rho_out_of_range(self):
        """Test the similarity range"""
        spec = self.valid.model_copy(update={"rho": 1.5})
        assert "rho out of range" in check_spec(spec)

    def test_delta_out_of_range(self):
        """Test the transfer-rate range"""
        spec = self.valid.with_transfer(HardTransfer(delta=-0.1))
        assert "delta out of range" in check_spec(spec)

    def test_all_violations_reported(self):
        """Test that validation collects every violation"""
        spec = self.valid.model_copy(update={"rho": 1.5, "alpha_t": 0.0, "lam": -1.0})

        with pytest.raises(SpecValidationError) as exc_info:
            validate_spec(spec)

        violations = exc_info.value.violations
        assert "rho out of range" in violations
        assert "alpha_t must be positive" in violations
        assert "lambda must be non-negative" in violations
        assert isinstance(exc_info.value, ValueError)

    def test_classification_needs_sign_predictor(self):
        """Test the upsilon / predictor coupling"""
        spec = self.valid.model_copy(update={"upsilon": 1})
        assert "upsilon = 1 requires phi_hat = sign" in check_spec(spec)

    def test_margin_loss_needs_sign_labels(self):
        """Test that logistic and hinge losses reject real-valued labels"""
        spec = self.valid.model_copy(update={"loss": LossKind.LOGISTIC})
        assert "logistic loss requires sign labels" in check_spec(spec)

    def test_unsupported_activation_pair(self):
        """Test that only the supported link pairs pass"""
        spec = self.valid.model_copy(
            update={"phi": ActivationKind.IDENTITY, "phi_hat": ActivationKind.SIGN, "upsilon": 1}
        )
        assert any("unsupported activation pair" in v for v in check_spec(spec))

    def test_negative_spectrum(self):
        """Test that spectrum violations surface through the spec"""
        spec = self.valid.with_transfer(SoftTransfer(spectrum=PointMass(mu0=-1.0)))
        assert "spectrum mu0 must be non-negative" in check_spec(spec)

        spec = self.valid.with_transfer(SoftTransfer(spectrum=ScaledSquaredBeta(shape_a=0.0)))
        assert "spectrum beta shapes must be positive" in check_spec(spec)


class TestSweepConfig:
    """Test sweep configuration parsing and expansion"""

    def setup_method(self):
        self.base = TaskSpec(alpha_s=10.0, alpha_t=1.0, rho=0.85, lam=0.3, transfer=HardTransfer(delta=0.5))

    def test_single_point_grid(self):
        """Test that a one-point grid yields its start value"""
        grid = GridSpec(start=0.7, stop=0.7, count=1)
        assert grid.values() == [0.7]

    def test_grid_bounds(self):
        """Test grid validation"""
        with pytest.raises(ValidationError):
            GridSpec(start=1.0, stop=0.0, count=3)
        with pytest.raises(ValidationError):
            GridSpec(start=0.0, stop=1.0, count=0)

    def test_alpha_t_sweep_with_ratio(self):
        """Test that alpha_s follows alpha_t when a ratio is given"""
        sweep = SweepConfig(
            base=self.base,
            sweep_axis="alpha_t",
            alpha_s_ratio=10.0,
            grid=GridSpec(start=0.5, stop=1.5, count=3),
        )
        specs = sweep.specs()

        assert [x for x, _ in specs] == [0.5, 1.0, 1.5]
        assert [spec.alpha_s for _, spec in specs] == [5.0, 10.0, 15.0]

    def test_delta_sweep(self):
        """Test that delta sweeps replace the hard rate"""
        sweep = SweepConfig(base=self.base, sweep_axis="delta", grid=GridSpec(start=0.0, stop=1.0, count=5))
        deltas = [spec.transfer.delta for _, spec in sweep.specs()]
        assert deltas == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_lambda_sweep(self):
        """Test ridge sweeps"""
        sweep = SweepConfig(base=self.base, sweep_axis="lambda", grid=GridSpec(start=0.1, stop=0.2, count=2))
        assert [spec.lam for _, spec in sweep.specs()] == [0.1, 0.2]

    def test_beta_t_sweep(self):
        """Test that beta_t sweeps rescale the soft spectrum"""
        base = self.base.with_transfer(SoftTransfer(spectrum=PointMass(mu0=1.0)))
        sweep = SweepConfig(base=base, sweep_axis="beta_t", grid=GridSpec(start=0.5, stop=2.0, count=2))
        levels = [spec.transfer.spectrum.mu0 for _, spec in sweep.specs()]
        assert levels == [0.5, 2.0]

    def test_axis_must_match_mode(self):
        """Test that delta and beta_t sweeps need the matching transfer mode"""
        with pytest.raises(ValidationError):
            SweepConfig(
                base=self.base.with_transfer(NoTransfer()),
                sweep_axis="delta",
                grid=GridSpec(start=0.0, stop=1.0, count=2),
            )
        with pytest.raises(ValidationError):
            SweepConfig(base=self.base, sweep_axis="beta_t", grid=GridSpec(start=0.0, stop=1.0, count=2))

    def test_unknown_axis(self):
        """Test axis validation"""
        with pytest.raises(ValidationError):
            SweepConfig(base=self.base, sweep_axis="p", grid=GridSpec(start=0.0, stop=1.0))
