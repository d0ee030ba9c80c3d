"""
Result Repository Interface and Implementation

Persists sweep result tables as CSV or JSON. CSV files carry one header
row and, unless outputs are deterministic, a leading comment line with
the generation time and host. JSON files hold {"config": ..., "rows": [...]}.
"""

import json
import logging
import math
import platform
from abc import ABC, abstractmethod
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from src.models.schemas import ResultFormat

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _provenance() -> str:
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return f"# generated {stamp} on {platform.node()}\n"


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    if hasattr(value, "item"):
        return _json_safe(value.item())
    return value


class ResultRepository(ABC):
    """Abstract repository for result tables"""

    def __init__(self, deterministic: bool = False):
        self.deterministic = deterministic

    @abstractmethod
    async def save_table(self, frame: pd.DataFrame, path: str, config: Optional[Dict[str, Any]] = None) -> Path:
        """Write a table and return the written path"""
        pass

    @abstractmethod
    async def load_table(self, path: str) -> pd.DataFrame:
        """Read a table written by save_table"""
        pass


class CsvResultRepository(ResultRepository):
    """UTF-8 comma-separated tables with 17 significant digits"""

    async def save_table(self, frame: pd.DataFrame, path: str, config: Optional[Dict[str, Any]] = None) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="") as handle:
            if not self.deterministic:
                handle.write(_provenance())
            frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info("wrote %d rows to %s", len(frame), target)
        return target

    async def load_table(self, path: str) -> pd.DataFrame:
        try:
            return pd.read_csv(path, comment="#", float_precision="round_trip")
        except pd.errors.EmptyDataError:
            return pd.DataFrame()


class JsonResultRepository(ResultRepository):
    """{"config": ..., "rows": [...]} with non-finite numbers as null"""

    async def save_table(self, frame: pd.DataFrame, path: str, config: Optional[Dict[str, Any]] = None) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        payload: Dict[str, Any] = {
            "config": _json_safe(config or {}),
            "columns": list(frame.columns),
            "rows": _json_safe(frame.to_dict(orient="records")),
        }
        if not self.deterministic:
            payload["generated"] = _provenance()[len("# generated "):].strip()
        with open(target, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
        logger.info("wrote %d rows to %s", len(frame), target)
        return target

    async def load_table(self, path: str) -> pd.DataFrame:
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
        return pd.DataFrame(payload.get("rows", []), columns=payload.get("columns"))


def repository_for(fmt: ResultFormat, deterministic: bool = False) -> ResultRepository:
    if ResultFormat(fmt) == ResultFormat.JSON:
        return JsonResultRepository(deterministic)
    return CsvResultRepository(deterministic)


def format_from_path(path: str) -> ResultFormat:
    return ResultFormat.JSON if str(path).lower().endswith(".json") else ResultFormat.CSV
