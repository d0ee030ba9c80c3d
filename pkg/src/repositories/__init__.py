"""
Repository interfaces and implementations for result tables

Sweep services produce pandas frames; repositories write them as CSV or
JSON and read them back for plot-data extraction.
"""

from .result_repository import (
    CsvResultRepository,
    JsonResultRepository,
    ResultRepository,
    format_from_path,
    repository_for,
)

__all__ = [
    "CsvResultRepository",
    "JsonResultRepository",
    "ResultRepository",
    "format_from_path",
    "repository_for",
]
