"""
Replicate runner for Monte Carlo sweeps.

Runs an indexed task over replicate indices 0..count-1 on a thread pool and
hands results back in index order, so every aggregate is independent of the
worker count and of scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, List, Optional, TypeVar

from ...core.exceptions import ValidationError
from ...core.logging_config import get_logger
from ...core.settings import settings

logger = get_logger(__name__)

T = TypeVar("T")


class ReplicateRunner:
    """
    Handles batch execution of independent replicates.

    Each task receives only its replicate index and must derive its own RNG
    stream from it; no state is shared between tasks.

    Attributes:
        workers (int): Thread count, capped by `settings.threads`
        chunk_size (int): Replicates submitted per scheduling round
        label (str): Name used in log lines
    """

    def __init__(self, workers: Optional[int] = None, chunk_size: Optional[int] = None, label: str = "batch"):
        """Initialize with a worker count (defaults to ZAGFF_THREADS)."""
        self.workers = settings.worker_count(workers)
        self.chunk_size = chunk_size or max(64, 16 * self.workers)
        self.label = label

    def imap(self, count: int, task: Callable[[int], T]) -> Iterator[T]:
        """
        Lazily evaluate task(0), ..., task(count - 1).

        Results are yielded in index order; at most `chunk_size` results are
        held at once. The first failing index (in index order) propagates its
        exception and stops the sweep.

        Args:
            count: Number of replicates, >= 1
            task: Pure function of the replicate index

        Yields:
            Task results in index order

        Raises:
            ValidationError: If count < 1
        """
        if count < 1:
            raise ValidationError(f"Replicate count must be >= 1, got {count}", details={"count": count})

        logger.info("Starting %s: %d replicates on %d worker(s)", self.label, count, self.workers)
        if self.workers == 1:
            for index in range(count):
                yield task(index)
        else:
            with ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix=self.label) as pool:
                for start in range(0, count, self.chunk_size):
                    stop = min(count, start + self.chunk_size)
                    # Executor.map preserves submission order
                    for result in pool.map(task, range(start, stop)):
                        yield result
                    logger.debug("%s: replicates %d..%d done", self.label, start, stop - 1)
        logger.info("%s complete: %d replicates", self.label, count)

    def run(self, count: int, task: Callable[[int], T]) -> List[T]:
        """Evaluate every replicate and return the results as a list in index order."""
        return list(self.imap(count, task))


def block_sizes(total: int, block_size: int) -> List[int]:
    """
    Split `total` items into consecutive blocks of at most `block_size`.

    Example:
        >>> block_sizes(10, 4)
        [4, 4, 2]
    """
    if total < 0 or block_size < 1:
        raise ValidationError(
            "block_sizes requires total >= 0 and block_size >= 1",
            details={"total": total, "block_size": block_size},
        )
    full, rest = divmod(total, block_size)
    return [block_size] * full + ([rest] if rest else [])
