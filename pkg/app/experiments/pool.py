"""
Work pool for sweep grid points.

Tasks carry their own derived seeds, so the result list is the same for
any pool size; ``threads`` only changes wall time.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def run_tasks(fn: Callable[[T], R], tasks: Sequence[T], threads: int = 1) -> List[R]:
    """Apply ``fn`` to every task, preserving task order in the result."""
    if threads <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    workers = min(threads, len(tasks))
    logger.info(f"Running {len(tasks)} tasks on {workers} worker processes")
    chunksize = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, tasks, chunksize=chunksize))
