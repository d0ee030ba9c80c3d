"""
Simulation Service

Monte Carlo trials next to the asymptotic prediction at every grid point,
with the z-score of the empirical test error.
"""

import logging
from typing import Optional

from src.config.app_config import AppConfig, get_app_config
from src.core.errors import SpecValidationError
from src.models.schemas import SweepConfig
from src.services.cache_service import CacheService
from src.services.sweeps import SIMULATE_COLUMNS, ResultTable, curves, simulate_point, to_table
from src.utils.pool import map_in_pool

logger = logging.getLogger(__name__)


class SimulationService:
    """Service for theory-versus-simulation sweeps"""

    def __init__(self, cache_service: CacheService, config: Optional[AppConfig] = None):
        self.cache_service = cache_service
        self.config = config or get_app_config()

    async def simulate(self, sweep: SweepConfig, jobs: Optional[int] = None) -> ResultTable:
        if sweep.sim is None:
            raise SpecValidationError(["simulate needs a sim block"])
        jobs = jobs or self.config.jobs

        points = [
            (x, label, curve_spec)
            for x, spec in sweep.specs()
            for label, curve_spec in curves(spec)
        ]
        logger.info(
            "simulate sweep over %s: %d rows, p=%d, %d trials each",
            sweep.sweep_axis, len(points), sweep.sim.p, sweep.sim.n_trials,
        )

        sources = await self.cache_service.source_outcomes(
            [spec for _, _, spec in points], self.config, jobs
        )
        tasks = [
            (sweep.sweep_axis, x, label, spec, source, self.config, sweep.sim)
            for (x, label, spec), source in zip(points, sources)
        ]
        rows = await map_in_pool(simulate_point, tasks, jobs)
        return to_table(rows, SIMULATE_COLUMNS)
