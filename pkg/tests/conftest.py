import pytest

from src.config.app_config import AppConfig, ErmConfig, QuadratureConfig
from src.models.schemas import (
    ActivationKind,
    HardTransfer,
    LossKind,
    SaddleSolution,
    SoftTransfer,
    TaskSpec,
)
from src.core.spectra import PointMass


def pytest_collection_modifyitems(config, items):
    """Mark tests by file: end-to-end files are integration, the rest unit"""
    for item in items:
        if "test_cli" in item.nodeid:
            item.add_marker(pytest.mark.integration)
        else:
            item.add_marker(pytest.mark.unit)


@pytest.fixture
def app_config():
    """Configuration with a single worker and no provenance lines"""
    return AppConfig(
        jobs=1,
        deterministic=True,
        quadrature=QuadratureConfig(order=60, truncation=10.0, spectrum_order=200),
        erm=ErmConfig(kkt_tol=1e-8, max_iter=200000),
    )


@pytest.fixture
def relu_regression_spec():
    """ReLU teacher, squared loss, no ridge: every closed form applies"""
    return TaskSpec(
        alpha_s=4.0,
        alpha_t=2.0,
        rho=0.5,
        lam=0.0,
        loss=LossKind.SQUARED,
        phi=ActivationKind.RELU,
        phi_hat=ActivationKind.IDENTITY,
        upsilon=0,
        transfer=HardTransfer(delta=0.5),
    )


@pytest.fixture
def sign_classification_spec():
    """Sign teacher and predictor with squared loss and no ridge"""
    return TaskSpec(
        alpha_s=4.0,
        alpha_t=2.0,
        rho=0.9,
        lam=0.0,
        loss=LossKind.SQUARED,
        phi=ActivationKind.SIGN,
        phi_hat=ActivationKind.SIGN,
        upsilon=1,
        transfer=HardTransfer(delta=1.0),
    )


@pytest.fixture
def logistic_soft_spec():
    """Logistic classification with an identity-shaped soft penalty"""
    return TaskSpec(
        alpha_s=10.0,
        alpha_t=1.0,
        rho=0.85,
        lam=0.3,
        loss=LossKind.LOGISTIC,
        phi=ActivationKind.SIGN,
        phi_hat=ActivationKind.SIGN,
        upsilon=1,
        transfer=SoftTransfer(spectrum=PointMass(mu0=0.2)),
    )


@pytest.fixture
def sample_source_solution():
    return SaddleSolution(q=0.5, r=0.25, sigma=0.75, objective=0.375, method="closed_form")
