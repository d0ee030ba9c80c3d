"""
Logging Setup

Installs console and optional size-rotating file handlers from a
LoggingConfig.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

from src.config.app_config import LoggingConfig

_CONFIGURED_FLAG = "_transfer_phase_handler"


def configure_logging(config: LoggingConfig) -> logging.Logger:
    """
    Configure the root logger

    Re-running replaces handlers previously installed here, so the CLI and
    tests may call it repeatedly.
    """
    root = logging.getLogger()
    root.setLevel(config.level)

    for handler in list(root.handlers):
        if getattr(handler, _CONFIGURED_FLAG, False):
            root.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(config.format)

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    setattr(stream_handler, _CONFIGURED_FLAG, True)
    root.addHandler(stream_handler)

    if config.file_path:
        Path(config.file_path).parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            config.file_path,
            maxBytes=config.max_file_size_mb * 1024 * 1024,
            backupCount=config.backup_count,
        )
        file_handler.setFormatter(formatter)
        setattr(file_handler, _CONFIGURED_FLAG, True)
        root.addHandler(file_handler)

    return root
