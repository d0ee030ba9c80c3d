"""
Tests for the configuration management system
"""

import logging
import os
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from src.config.app_config import (
    AppConfig,
    LoggingConfig,
    QuadratureConfig,
    SolverConfig,
    get_app_config,
    reload_config,
    set_app_config,
)
from src.utils.log_setup import configure_logging


class TestAppConfig:
    """Test the AppConfig class"""

    def test_default_config(self):
        """Test default configuration values"""
        config = AppConfig()

        assert config.app_name == "transfer-phase"
        assert config.debug is False
        assert config.deterministic is False
        assert config.jobs >= 1
        assert config.quadrature.order == 60
        assert config.solver.starts[1] == (-1.0, -1.0)
        assert config.erm.lambda_floor == 1e-8
        assert config.cache.max_size == 256

    def test_from_env(self):
        """Test configuration from environment variables"""
        env_vars = {
            "JOBS": "3",
            "DETERMINISTIC": "true",
            "QUAD_ORDER": "80",
            "QUAD_TRUNCATION": "12.0",
            "SOLVER_MAX_ITER": "900",
            "ERM_KKT_TOL": "1e-9",
            "CACHE_MAX_SIZE": "16",
            "LOG_LEVEL": "debug",
        }

        with patch.dict(os.environ, env_vars):
            config = AppConfig.from_env()

        assert config.jobs == 3
        assert config.deterministic is True
        assert config.quadrature.order == 80
        assert config.quadrature.truncation == 12.0
        assert config.solver.max_iter == 900
        assert config.erm.kkt_tol == 1e-9
        assert config.cache.max_size == 16
        assert config.logging.level == "DEBUG"

    def test_invalid_log_level(self):
        """Test log level validation"""
        with pytest.raises(ValidationError):
            LoggingConfig(level="LOUD")

    def test_field_bounds(self):
        """Test numeric bounds on nested settings"""
        with pytest.raises(ValidationError):
            QuadratureConfig(order=0)
        with pytest.raises(ValidationError):
            SolverConfig(sigma_max=0.5)
        with pytest.raises(ValidationError):
            AppConfig(jobs=0)

    def test_global_config(self):
        """Test the global configuration accessors"""
        with patch.dict(os.environ, {"JOBS": "2", "CACHE_MAX_SIZE": "8"}):
            reloaded = reload_config()
            assert get_app_config() is reloaded
            assert reloaded.jobs == 2

            explicit = set_app_config(AppConfig(jobs=1))
            assert get_app_config() is explicit

        reload_config()


class TestLogging:
    """Test configure_logging"""

    def test_handlers_replaced(self):
        """Test that repeated calls do not stack handlers"""
        root = configure_logging(LoggingConfig(level="WARNING"))
        before = len(root.handlers)
        configure_logging(LoggingConfig(level="DEBUG"))

        assert len(root.handlers) == before
        assert root.level == logging.DEBUG

    def test_file_handler(self, tmp_path):
        """Test that a file path adds a rotating file handler"""
        path = tmp_path / "logs" / "run.log"
        root = configure_logging(LoggingConfig(level="INFO", file_path=str(path)))
        logging.getLogger("src.test").info("hello")

        for handler in root.handlers:
            handler.flush()
        assert "hello" in path.read_text()
        configure_logging(LoggingConfig())
