"""
Cache Service

Resolves source solutions for a batch of specs, solving each distinct
cache miss once (in parallel when jobs > 1).
"""

import logging
from typing import Any, Dict, List, Optional

from src.config.app_config import AppConfig, get_app_config
from src.core.cache.manager import SolutionCache
from src.models.schemas import SaddleSolution, TaskSpec
from src.services.sweeps import SourceOutcome, solve_source_task
from src.utils.pool import map_in_pool

logger = logging.getLogger(__name__)


class CacheService:
    """Service for handling source-solution caching"""

    def __init__(self, cache: SolutionCache):
        self.cache = cache

    def get_cached_solution(self, spec: TaskSpec, config: Optional[AppConfig] = None) -> Optional[SaddleSolution]:
        config = config or get_app_config()
        return self.cache.get(spec, config.quadrature, config.solver)

    def cache_solution(self, spec: TaskSpec, solution: SaddleSolution, config: Optional[AppConfig] = None) -> None:
        config = config or get_app_config()
        self.cache.set(spec, solution, config.quadrature, config.solver)

    async def source_outcomes(
        self, specs: List[TaskSpec], config: Optional[AppConfig] = None, jobs: int = 1
    ) -> List[SourceOutcome]:
        """One outcome per spec, in order; failures carry their message"""
        config = config or get_app_config()
        outcomes: Dict[str, SourceOutcome] = {}
        pending: Dict[str, TaskSpec] = {}

        for spec in specs:
            key = self.cache._generate_key(spec, config.quadrature, config.solver)
            if key in outcomes or key in pending:
                continue
            cached = self.cache.get(spec, config.quadrature, config.solver)
            if cached is not None:
                outcomes[key] = SourceOutcome(solution=cached)
            else:
                pending[key] = spec

        if pending:
            logger.info("solving %d source problems", len(pending))
            tasks = [(spec, config) for spec in pending.values()]
            solved = await map_in_pool(solve_source_task, tasks, jobs)
            for (key, spec), outcome in zip(pending.items(), solved):
                outcomes[key] = outcome
                if outcome.solution is not None:
                    self.cache.set(spec, outcome.solution, config.quadrature, config.solver)

        logger.info("source cache: %s", self.cache.get_stats())
        return [outcomes[self.cache._generate_key(spec, config.quadrature, config.solver)] for spec in specs]

    def get_stats(self) -> Dict[str, Any]:
        """Get cache statistics"""
        return self.cache.get_stats()

    def clear_all(self) -> int:
        """
        Clear all cache entries

        Returns:
            Number of entries cleared
        """
        return self.cache.clear_all()
