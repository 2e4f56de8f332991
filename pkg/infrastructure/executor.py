"""
Worker pools for sweep cells.

Cells are pure functions of their inputs and derived seeds, so the pool only
has to preserve input order when gathering results.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from application.interfaces import CellExecutor
from domain import ConfigurationError

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


class SequentialExecutor(CellExecutor):
    """Runs cells one after another in the calling thread."""

    def map(self, func: Callable[[T], R], items: Sequence[T]) -> List[R]:
        return [func(item) for item in items]


class ThreadPoolCellExecutor(CellExecutor):
    """Fans cells out to a bounded thread pool; results come back by index."""

    def __init__(self, jobs: int) -> None:
        if jobs < 1:
            raise ConfigurationError(f"jobs must be at least 1, got {jobs}")
        self.jobs = jobs
        self._pool: Optional[ThreadPoolExecutor] = None

    def map(self, func: Callable[[T], R], items: Sequence[T]) -> List[R]:
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self.jobs, thread_name_prefix="sweep")
            logger.debug(f"Started worker pool with {self.jobs} threads")
        futures = [self._pool.submit(func, item) for item in items]
        return [future.result() for future in futures]

    def shutdown(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None


def create_executor(jobs: int = 1) -> CellExecutor:
    """Sequential executor for a single job, thread pool otherwise."""
    if jobs < 1:
        raise ConfigurationError(f"jobs must be at least 1, got {jobs}")
    if jobs == 1:
        return SequentialExecutor()
    return ThreadPoolCellExecutor(jobs)
