"""
Prediction Service

Asymptotic predictions along a sweep: one row per grid point and curve.
"""

import logging
from typing import Optional

from src.config.app_config import AppConfig, get_app_config
from src.models.schemas import SweepConfig
from src.services.cache_service import CacheService
from src.services.sweeps import PREDICT_COLUMNS, ResultTable, curves, predict_point, to_table
from src.utils.pool import map_in_pool

logger = logging.getLogger(__name__)


class PredictionService:
    """Service for asymptotic prediction sweeps"""

    def __init__(self, cache_service: CacheService, config: Optional[AppConfig] = None):
        self.cache_service = cache_service
        self.config = config or get_app_config()

    def _points(self, sweep: SweepConfig):
        points = []
        for x, spec in sweep.specs():
            for label, curve_spec in curves(spec):
                points.append((x, label, curve_spec))
        return points

    async def predict(self, sweep: SweepConfig, jobs: Optional[int] = None) -> ResultTable:
        jobs = jobs or self.config.jobs
        points = self._points(sweep)
        logger.info("predict sweep over %s: %d rows", sweep.sweep_axis, len(points))

        sources = await self.cache_service.source_outcomes(
            [spec for _, _, spec in points], self.config, jobs
        )
        tasks = [
            (sweep.sweep_axis, x, label, spec, source, self.config)
            for (x, label, spec), source in zip(points, sources)
        ]
        rows = await map_in_pool(predict_point, tasks, jobs)
        return to_table(rows, PREDICT_COLUMNS)
