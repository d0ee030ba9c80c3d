"""
Tests for the spectral laws of the soft-transfer penalty
"""

import numpy as np
import pytest
from scipy.integrate import quad

from src.core.empirical import stream
from src.core.errors import UnsupportedConfigurationError
from src.core.spectra import (
    Empirical,
    PointMass,
    ScaledSquaredBeta,
    ScaledSquaredUniform,
    spectral_T,
    two_point,
)


class TestSpectralTransforms:
    """Test T1 and T2"""

    def test_point_mass_one(self):
        """Test PointMass(1) at sigma = 1"""
        assert spectral_T(PointMass(mu0=1.0), 1.0) == pytest.approx((0.5, 0.5), abs=1e-15)

    def test_point_mass_zero(self):
        """Test that a zero spectrum kills T2"""
        assert spectral_T(PointMass(mu0=0.0), 2.0) == pytest.approx((0.5, 0.0), abs=1e-15)

    def test_empirical_average(self):
        """Test a two-atom empirical law"""
        t1, t2 = spectral_T(Empirical(eigenvalues=[1.0, 3.0]), 1.0)
        assert t1 == pytest.approx(0.375, abs=1e-15)
        assert t2 == pytest.approx(0.625, abs=1e-15)

    def test_weighted_two_point(self):
        """Test the two-point law used as the soft limit of hard transfer"""
        dist = two_point(0.3, 4.0)
        t1, t2 = spectral_T(dist, 2.0)
        assert t1 == pytest.approx(0.7 / 2.0 + 0.3 / 6.0, abs=1e-15)
        assert t2 == pytest.approx(0.3 * 8.0 / 6.0, abs=1e-15)

    def test_uniform_against_integral(self):
        """Test the Gauss-Legendre rule of the scaled squared uniform law"""
        beta, sigma = 0.7, 0.4
        t1, t2 = spectral_T(ScaledSquaredUniform(beta_t=beta), sigma)
        exact_t1 = quad(lambda v: 0.5 / (beta * v * v + sigma), 0.0, 2.0, epsabs=1e-14, epsrel=1e-13)[0]
        exact_t2 = quad(lambda v: 0.5 * beta * v * v * sigma / (beta * v * v + sigma), 0.0, 2.0, epsabs=1e-14, epsrel=1e-13)[0]
        assert t1 == pytest.approx(exact_t1, rel=1e-10)
        assert t2 == pytest.approx(exact_t2, rel=1e-10)

    def test_beta_against_integral(self):
        """Test the Gauss-Jacobi rule of the scaled squared Beta law"""
        dist = ScaledSquaredBeta(beta_t=1.5, shape_a=2.0, shape_b=3.0)
        sigma = 0.8
        v_max = 2.5
        # Beta(2, 3) density 12 x (1 - x)^2
        density = lambda x: 12.0 * x * (1.0 - x) ** 2
        exact_t1 = quad(lambda x: density(x) / (1.5 * (x * v_max) ** 2 + sigma), 0.0, 1.0, epsabs=1e-14, epsrel=1e-13)[0]
        t1, _ = spectral_T(dist, sigma)
        assert t1 == pytest.approx(exact_t1, rel=1e-10)

    def test_derivatives(self):
        """Test dT/dsigma against central differences"""
        dist = ScaledSquaredUniform(beta_t=1.0)
        h = 1e-6
        transforms = dist.transforms(0.5)
        up, down = dist.transforms(0.5 + h), dist.transforms(0.5 - h)
        assert transforms.dt1 == pytest.approx((up.t1 - down.t1) / (2 * h), rel=1e-6)
        assert transforms.dt2 == pytest.approx((up.t2 - down.t2) / (2 * h), rel=1e-6)

    def test_sigma_below_support(self):
        """Test that sigma must exceed -mu_min"""
        with pytest.raises(ValueError):
            spectral_T(PointMass(mu0=1.0), -1.0)


class TestSpectralLaws:
    """Test supports, means and samplers"""

    def test_unit_mean_scaling(self):
        """Test that the scaled laws keep E[V] = 1"""
        for dist in (ScaledSquaredUniform(beta_t=1.0), ScaledSquaredBeta(beta_t=1.0)):
            mu, w = dist.atoms()
            assert np.sum(w * np.sqrt(mu)) == pytest.approx(1.0, abs=1e-12)

    def test_beta_second_moment(self):
        """Test E[mu] = beta_t E[V^2] = 1.2 beta_t for Beta(2, 2)"""
        mu, w = ScaledSquaredBeta(beta_t=0.5).atoms()
        assert np.sum(w * mu) == pytest.approx(0.6, abs=1e-12)

    def test_supports(self):
        """Test mu_min and mu_max"""
        assert ScaledSquaredUniform(beta_t=2.0).mu_max == 8.0
        assert ScaledSquaredBeta(beta_t=1.0).mu_max == 4.0
        assert Empirical(eigenvalues=[0.5, 2.0]).mu_min == 0.5

    def test_zero_detection(self):
        """Test is_zero for degenerate laws"""
        assert PointMass(mu0=0.0).is_zero()
        assert ScaledSquaredUniform(beta_t=0.0).is_zero()
        assert not two_point(0.5, 1.0).is_zero()

    def test_point_mass_sampler(self):
        """Test that a point mass gives Sigma = sqrt(mu0) I"""
        diag = PointMass(mu0=0.25).sample_diag(5, stream(0, "spectrum"))
        assert np.array_equal(diag, np.full(5, 0.5))

    def test_sampler_reproducible(self):
        """Test that the same stream gives the same diagonal"""
        dist = ScaledSquaredBeta(beta_t=1.0)
        first = dist.sample_diag(100, stream(7, "spectrum"))
        second = dist.sample_diag(100, stream(7, "spectrum"))
        assert np.array_equal(first, second)
        assert np.all(first >= 0.0)

    def test_empirical_sampler_support(self):
        """Test that empirical samples come from the atoms"""
        diag = two_point(0.4, 9.0).sample_diag(1000, stream(3, "spectrum"))
        assert set(np.unique(diag)) <= {0.0, 3.0}
        assert 0.3 < np.mean(diag == 3.0) < 0.5

    def test_with_scale(self):
        """Test rescaling for beta_t sweeps"""
        assert PointMass(mu0=1.0).with_scale(0.3).mu0 == 0.3
        assert ScaledSquaredBeta(beta_t=1.0, shape_a=3.0).with_scale(2.0).shape_a == 3.0
        with pytest.raises(UnsupportedConfigurationError):
            Empirical(eigenvalues=[1.0]).with_scale(2.0)
