"""Seedable, splittable random streams.

Every stochastic routine takes an explicit ``numpy.random.Generator``; there is
no module-level generator. Parallel work units receive children produced by
``split_rng`` so results do not depend on execution order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np

from config import get_config

logger = logging.getLogger(__name__)

T = TypeVar("T")


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """
    Create a generator from an integer seed.

    Args:
        seed: Seed; ``None`` draws fresh OS entropy

    Returns:
        numpy Generator backed by PCG64
    """
    return np.random.default_rng(seed)


def split_rng(rng: np.random.Generator, count: int) -> List[np.random.Generator]:
    """
    Spawn independent child streams.

    Args:
        rng: Parent generator
        count: Number of children

    Returns:
        List of generators, statistically independent of each other and of the parent
    """
    return list(rng.spawn(count))


def seed_of(rng: np.random.Generator) -> Optional[int]:
    """Return the integer entropy a generator was seeded with, if it has one."""
    seed_seq = getattr(rng.bit_generator, "seed_seq", None)
    entropy = getattr(seed_seq, "entropy", None)
    if isinstance(entropy, (int, np.integer)) and not getattr(seed_seq, "spawn_key", ()):
        return int(entropy)
    return None


def map_streams(
    fn: Callable[[np.random.Generator, int], T],
    rng: np.random.Generator,
    count: int,
    max_workers: Optional[int] = None,
) -> List[T]:
    """
    Run ``fn(child_rng, index)`` for ``count`` independent work units.

    Results are returned in index order regardless of completion order.

    Args:
        fn: Work function
        rng: Parent generator, split once into ``count`` streams
        count: Number of work units
        max_workers: Thread count; defaults to the estimator config

    Returns:
        List of results
    """
    streams = split_rng(rng, count)
    workers = max_workers if max_workers is not None else get_config().estimator.max_workers

    if workers <= 1 or count <= 1:
        return [fn(stream, index) for index, stream in enumerate(streams)]

    logger.debug(f"Dispatching {count} work units to {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, stream, index) for index, stream in enumerate(streams)]
        return [future.result() for future in futures]
