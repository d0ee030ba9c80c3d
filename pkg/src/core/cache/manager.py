import hashlib
import json
import time
from datetime import datetime
from typing import Any, Dict, List, Optional

from src.config.app_config import QuadratureConfig, SolverConfig
from src.models.schemas import SaddleSolution, TaskSpec


class SolutionCache:
    """In-memory cache of source saddle solutions"""

    def __init__(self, max_size: int = 256):
        self._cache: Dict[str, Dict] = {}
        self.max_size = max_size
        self.misses = 0

    def _generate_key(
        self,
        spec: TaskSpec,
        quadrature: Optional[QuadratureConfig] = None,
        solver: Optional[SolverConfig] = None,
    ) -> str:
        """Hash of the fields the source problem depends on, solver settings included"""
        quadrature = quadrature or QuadratureConfig()
        solver = solver or SolverConfig()
        key_dict = {
            "alpha_s": spec.alpha_s,
            "lambda": spec.lam,
            "loss": spec.loss.value,
            "phi": spec.phi.value,
            "order": quadrature.order,
            "truncation": quadrature.truncation,
            "solver": solver.model_dump(mode="json", exclude={"certificate_step"}),
        }

        key_str = json.dumps(key_dict, sort_keys=True)
        return hashlib.md5(key_str.encode()).hexdigest()

    def get(
        self,
        spec: TaskSpec,
        quadrature: Optional[QuadratureConfig] = None,
        solver: Optional[SolverConfig] = None,
    ) -> Optional[SaddleSolution]:
        cache_key = self._generate_key(spec, quadrature, solver)

        entry = self._cache.get(cache_key)
        if entry is None:
            self.misses += 1
            return None

        entry["hit_count"] += 1
        entry["last_accessed"] = time.time()
        return entry["data"]

    def set(
        self,
        spec: TaskSpec,
        solution: SaddleSolution,
        quadrature: Optional[QuadratureConfig] = None,
        solver: Optional[SolverConfig] = None,
    ) -> None:
        cache_key = self._generate_key(spec, quadrature, solver)

        if cache_key not in self._cache and len(self._cache) >= self.max_size:
            self._evict()

        now = time.time()
        self._cache[cache_key] = {
            "data": solution,
            "alpha_s": spec.alpha_s,
            "created_at": now,
            "hit_count": 0,
            "last_accessed": now,
        }

    def _evict(self) -> None:
        """Drop the least recently used entry"""
        oldest = min(self._cache, key=lambda key: self._cache[key]["last_accessed"])
        del self._cache[oldest]

    def invalidate(
        self,
        spec: TaskSpec,
        quadrature: Optional[QuadratureConfig] = None,
        solver: Optional[SolverConfig] = None,
    ) -> bool:
        cache_key = self._generate_key(spec, quadrature, solver)

        if cache_key in self._cache:
            del self._cache[cache_key]
            return True

        return False

    def clear_all(self) -> int:
        count = len(self._cache)
        self._cache.clear()
        self.misses = 0
        return count

    def __len__(self) -> int:
        return len(self._cache)

    def get_stats(self) -> Dict[str, Any]:
        total_hits = sum(entry["hit_count"] for entry in self._cache.values())
        lookups = total_hits + self.misses
        return {
            "total_entries": len(self._cache),
            "max_size": self.max_size,
            "total_hits": total_hits,
            "misses": self.misses,
            "hit_rate": total_hits / lookups if lookups else 0.0,
        }

    def get_cached_entries(self) -> List[Dict[str, Any]]:
        """Cached solutions with metadata"""
        return [
            {
                "cache_key": key,
                "alpha_s": entry["alpha_s"],
                "created_at": datetime.fromtimestamp(entry["created_at"]),
                "hit_count": entry["hit_count"],
                "last_accessed": datetime.fromtimestamp(entry["last_accessed"]),
            }
            for key, entry in self._cache.items()
        ]


# Global cache instance
solution_cache = SolutionCache()
