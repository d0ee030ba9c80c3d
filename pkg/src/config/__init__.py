"""
Configuration Management Package

Runtime settings for quadrature, solvers, ERM, caching and logging, read
from the environment.
"""

from .app_config import AppConfig, get_app_config, reload_config, set_app_config

__all__ = ["AppConfig", "get_app_config", "reload_config", "set_app_config"]
