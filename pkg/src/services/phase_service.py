"""
Phase Service

Phase-diagram tables: numerical optimal transfer rate per (alpha_t,
alpha_s, rho) with the analytic boundary columns alongside.
"""

import logging
from typing import List, Optional, Tuple

from src.config.app_config import AppConfig, get_app_config
from src.core.errors import UnsupportedConfigurationError
from src.models.schemas import SweepConfig
from src.services.sweeps import PHASE_COLUMNS, ResultTable, phase_point, to_table
from src.utils.pool import map_in_pool

logger = logging.getLogger(__name__)


class PhaseService:
    """Service for phase-diagram sweeps"""

    def __init__(self, config: Optional[AppConfig] = None):
        self.config = config or get_app_config()

    def grid(self, sweep: SweepConfig) -> List[Tuple[float, float, float]]:
        """(alpha_t, alpha_s, rho) triples ordered by alpha pair, then the swept value"""
        base = sweep.base
        if sweep.sweep_axis == "rho":
            pairs = sweep.alpha_pairs if sweep.alpha_pairs is not None else [(base.alpha_t, base.alpha_s)]
            return [(at, as_, rho) for at, as_ in pairs for rho in sweep.grid.values()]
        if sweep.sweep_axis == "alpha_t":
            triples = []
            for alpha_t in sweep.grid.values():
                alpha_s = sweep.alpha_s_ratio * alpha_t if sweep.alpha_s_ratio is not None else base.alpha_s
                triples.append((alpha_t, alpha_s, base.rho))
            return triples
        raise UnsupportedConfigurationError("phase sweeps run over rho or alpha_t")

    async def phase(self, sweep: SweepConfig, jobs: Optional[int] = None) -> ResultTable:
        jobs = jobs or self.config.jobs
        template = sweep.base
        triples = self.grid(sweep)
        logger.info("phase sweep: %d points, delta resolution %d", len(triples), sweep.delta_resolution)
        tasks = [
            (sweep.sweep_axis, template, at, as_, rho, sweep.delta_resolution, self.config)
            for at, as_, rho in triples
        ]
        rows = await map_in_pool(phase_point, tasks, jobs)
        return to_table(rows, PHASE_COLUMNS)
