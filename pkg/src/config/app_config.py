"""
Application Configuration

Centralized configuration management with validation using Pydantic.
Numerical tolerances, quadrature orders, worker counts and logging are
read from the environment (and an optional .env file).
"""

import os
from typing import List, Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator


class QuadratureConfig(BaseModel):
    """Quadrature configuration"""
    order: int = Field(default=60, ge=1, le=400, description="Gauss-Hermite / split-rule order")
    truncation: float = Field(default=10.0, ge=4.0, le=40.0, description="Half-line truncation for split rules")
    spectrum_order: int = Field(default=200, ge=8, le=2000, description="Node count for continuous spectral laws")


class SolverConfig(BaseModel):
    """Scalar saddle-point solver configuration"""
    sigma_min: float = Field(default=1e-8, gt=0.0, description="Lower end of the inner bracket")
    sigma_max: float = Field(default=1e8, gt=1.0, description="Upper end of the inner bracket")
    inner_xtol: float = Field(default=1e-12, gt=0.0, description="Root tolerance in log-sigma")
    inner_tol: float = Field(default=1e-7, gt=0.0, description="Accepted inner derivative magnitude")
    outer_gtol: float = Field(default=1e-10, gt=0.0, description="Projected-gradient stopping tolerance")
    outer_accept: float = Field(default=1e-6, gt=0.0, description="Largest projected gradient accepted")
    max_iter: int = Field(default=500, ge=10, le=100000, description="Outer iterations per start")
    starts: List[Tuple[float, float]] = Field(
        default_factory=lambda: [(0.1, 0.1), (-1.0, -1.0), (1.0, 1.0)],
        description="Outer starting points; (-1, -1) stands for (c, sqrt(v))",
    )
    certificate_step: float = Field(default=1e-4, gt=0.0, description="Perturbation used by certificates")


class ErmConfig(BaseModel):
    """Finite-size empirical risk minimization configuration"""
    kkt_tol: float = Field(default=1e-8, gt=0.0, description="Relative KKT residual tolerance")
    max_iter: int = Field(default=200000, ge=1, description="Primal-dual iteration cap")
    check_every: int = Field(default=25, ge=1, description="Iterations between KKT checks")
    power_iters: int = Field(default=50, ge=1, description="Power iterations for the operator norm")
    cg_tol: float = Field(default=1e-10, gt=0.0, description="Conjugate-gradient relative residual")
    lambda_floor: float = Field(default=1e-8, gt=0.0, description="Ridge used when lambda is zero")
    polish_start: float = Field(default=1e-3, gt=0.0, description="Hinge residual that triggers an active-set solve")


class CacheConfig(BaseModel):
    """Source-solution cache configuration"""
    max_size: int = Field(default=256, ge=1, le=100000, description="Maximum cache entries")


class LoggingConfig(BaseModel):
    """Logging configuration"""
    level: str = Field(default="INFO", description="Log level")
    format: str = Field(default="%(asctime)s - %(name)s - %(levelname)s - %(message)s", description="Log format")
    file_path: Optional[str] = Field(default=None, description="Log file path")
    max_file_size_mb: int = Field(default=10, ge=1, le=100, description="Max log file size in MB")
    backup_count: int = Field(default=5, ge=1, le=20, description="Number of backup log files")

    @field_validator("level")
    @classmethod
    def validate_log_level(cls, v):
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {valid_levels}")
        return v.upper()


class AppConfig(BaseModel):
    """Main application configuration"""

    app_name: str = Field(default="transfer-phase", description="Application name")
    version: str = Field(default="1.0.0", description="Application version")
    debug: bool = Field(default=False, description="Enable debug mode")

    jobs: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1, le=512, description="Worker processes for sweeps")
    deterministic: bool = Field(default=False, description="Suppress timestamps and hostnames in outputs")

    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    erm: ErmConfig = Field(default_factory=ErmConfig)
    cache: CacheConfig = Field(default_factory=CacheConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    @classmethod
    def from_env(cls) -> "AppConfig":
        """Create configuration from environment variables"""
        load_dotenv()
        return cls(
            debug=os.getenv("DEBUG", "false").lower() == "true",
            jobs=int(os.getenv("JOBS", str(os.cpu_count() or 1))),
            deterministic=os.getenv("DETERMINISTIC", "false").lower() == "true",
            quadrature=QuadratureConfig(
                order=int(os.getenv("QUAD_ORDER", "60")),
                truncation=float(os.getenv("QUAD_TRUNCATION", "10.0")),
                spectrum_order=int(os.getenv("QUAD_SPECTRUM_ORDER", "200")),
            ),
            solver=SolverConfig(
                max_iter=int(os.getenv("SOLVER_MAX_ITER", "500")),
                outer_gtol=float(os.getenv("SOLVER_OUTER_GTOL", "1e-10")),
            ),
            erm=ErmConfig(
                kkt_tol=float(os.getenv("ERM_KKT_TOL", "1e-8")),
                max_iter=int(os.getenv("ERM_MAX_ITER", "200000")),
            ),
            cache=CacheConfig(max_size=int(os.getenv("CACHE_MAX_SIZE", "256"))),
            logging=LoggingConfig(
                level=os.getenv("LOG_LEVEL", "INFO").upper(),
                file_path=os.getenv("LOG_FILE_PATH"),
            ),
        )


# Global configuration instance
_app_config: Optional[AppConfig] = None


def get_app_config() -> AppConfig:
    """Get the global application configuration instance"""
    global _app_config
    if _app_config is None:
        _app_config = AppConfig.from_env()
    return _app_config


def reload_config() -> AppConfig:
    """Reload configuration from environment"""
    global _app_config
    _app_config = AppConfig.from_env()
    return _app_config


def set_app_config(config: AppConfig) -> AppConfig:
    """Install an explicit configuration (used by worker processes and the CLI)"""
    global _app_config
    _app_config = config
    return _app_config
