"""
Reproducible randomness and the trial worker pool.

Every trial draws from its own generator, seeded by mixing the master seed
with the trial index through splitmix64:

    seed(master, i) = splitmix64(master XOR splitmix64(i))

Trials are dispatched to joblib in contiguous chunks and the records are
concatenated in trial-index order, so a run gives the same records for any
worker count.
"""

import logging
from typing import Any, Callable, List, Optional, Union

import numpy as np
from joblib import Parallel, delayed

from threshold_lab.core.config import settings

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1

SeedLike = Union[int, np.random.Generator]


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def substream_seed(master_seed: int, index: int) -> int:
    return splitmix64((master_seed & MASK64) ^ splitmix64(index & MASK64))


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(substream_seed(master_seed, index))


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Accepts either an integer seed or an existing generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(splitmix64(int(seed) & MASK64))


def _run_chunk(
    fn: Callable[[int, np.random.Generator], Any],
    start: int,
    stop: int,
    master_seed: int,
) -> List[Any]:
    return [fn(i, trial_rng(master_seed, i)) for i in range(start, stop)]


def chunk_bounds(total: int, chunks: int) -> List[tuple]:
    chunks = max(1, min(chunks, total))
    size, extra = divmod(total, chunks)
    bounds = []
    start = 0
    for c in range(chunks):
        stop = start + size + (1 if c < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def run_trials(
    fn: Callable[[int, np.random.Generator], Any],
    trials: int,
    master_seed: int,
    threads: Optional[int] = None,
    backend: Optional[str] = None,
) -> List[Any]:
    """
    Runs ``fn(index, rng)`` for every trial index and returns the results in
    trial-index order.
    """
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    if trials == 0:
        return []
    threads = threads or settings.THRESHOLDLAB_THREADS
    backend = backend or settings.PARALLEL_BACKEND
    if threads == 1 or backend == "sequential":
        return _run_chunk(fn, 0, trials, master_seed)
    bounds = chunk_bounds(trials, threads * 4)
    logger.debug(f"Dispatching {trials} trials in {len(bounds)} chunks to {threads} workers")
    parts = Parallel(n_jobs=threads, backend=backend)(
        delayed(_run_chunk)(fn, start, stop, master_seed) for start, stop in bounds
    )
    return [record for part in parts for record in part]


def parallel_map(fn: Callable[[Any], Any], items: list, threads: Optional[int] = None) -> list:
    """Order-preserving map over independent work items."""
    threads = threads or settings.THRESHOLDLAB_THREADS
    if threads == 1 or settings.PARALLEL_BACKEND == "sequential" or len(items) <= 1:
        return [fn(item) for item in items]
    return Parallel(n_jobs=threads, backend=settings.PARALLEL_BACKEND)(
        delayed(fn)(item) for item in items
    )
