"""
Worker Pool

Runs independent grid tasks in a process pool from a coroutine and
returns results in task order.
"""

import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


async def map_in_pool(func: Callable[[T], R], tasks: Sequence[T], jobs: int = 1) -> List[R]:
    """
    Apply func to every task; jobs = 1 runs inline in the calling process.
    func and tasks must be picklable when jobs > 1.
    """
    if not tasks:
        return []
    if jobs <= 1 or len(tasks) == 1:
        return [func(task) for task in tasks]

    workers = min(jobs, len(tasks))
    logger.debug("dispatching %d tasks to %d workers", len(tasks), workers)
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [loop.run_in_executor(pool, func, task) for task in tasks]
        return list(await asyncio.gather(*futures))
