"""
Plot Data Service

Splits a result table into one two-column (x, y) CSV file per curve and
metric, plus a manifest.json listing label, file and columns.
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

from src.core.errors import SpecValidationError
from src.repositories.result_repository import FLOAT_FORMAT, ResultRepository
from src.services.sweeps import PHASE_COLUMNS, PREDICT_COLUMNS, SIMULATE_COLUMNS

logger = logging.getLogger(__name__)

KNOWN_COLUMNS = set(PREDICT_COLUMNS) | set(SIMULATE_COLUMNS) | set(PHASE_COLUMNS)

MANIFEST_NAME = "manifest.json"


def metrics_for(columns: List[str]) -> List[str]:
    """y columns to extract, by table kind"""
    if "delta_star" in columns:
        return ["delta_star"]
    if "e_test_emp" in columns:
        return ["e_test_pred", "e_test_emp"]
    return ["e_test_pred"]


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.=-]+", "_", text).strip("_") or "curve"


class PlotDataService:
    """Service for producing plot-ready curve files"""

    def __init__(self, repository: ResultRepository):
        self.repository = repository

    async def split(self, result_path: str, out_dir: str) -> Dict[str, Any]:
        frame = await self.repository.load_table(result_path)
        return self.split_frame(frame, out_dir, source=str(result_path))

    def split_frame(self, frame: pd.DataFrame, out_dir: str, source: str = "") -> Dict[str, Any]:
        unknown = sorted(set(frame.columns) - KNOWN_COLUMNS)
        if unknown:
            raise SpecValidationError([f"unknown column: {name}" for name in unknown])

        target = Path(out_dir)
        target.mkdir(parents=True, exist_ok=True)
        entries = []

        if len(frame):
            if "error" in frame.columns:
                frame = frame[frame["error"].fillna("") == ""]
            for metric in metrics_for(list(frame.columns)):
                for curve, group in frame.groupby("curve", sort=False):
                    label = f"{curve}:{metric}"
                    filename = f"{_slug(str(curve))}__{metric}.csv"
                    data = group[["x", metric]].rename(columns={metric: "y"}).sort_values("x", kind="stable")
                    data.to_csv(target / filename, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
                    entries.append({"label": label, "file": filename, "x": "x", "y": metric, "points": len(data)})

        manifest = {"source": source, "entries": entries}
        with open(target / MANIFEST_NAME, "w", encoding="utf-8") as handle:
            json.dump(manifest, handle, indent=2)
            handle.write("\n")
        logger.info("wrote %d curve files to %s", len(entries), target)
        return manifest
