from .manager import SolutionCache, solution_cache

__all__ = ["SolutionCache", "solution_cache"]
