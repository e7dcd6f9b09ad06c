"""Worker-pool helper honoring the SIMSPACE_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """Number of worker threads: min(SIMSPACE_THREADS, cpu count), >= 1."""
    cap = os.environ.get("SIMSPACE_THREADS")
    cores = os.cpu_count() or 1
    if cap is None:
        return cores
    try:
        return max(1, min(int(cap), cores))
    except ValueError:
        return cores


def ordered_map(fn: Callable[[T], R], items: Sequence[T] | Iterable[T]) -> list[R]:
    """Map ``fn`` over ``items``, preserving order.

    Runs on a thread pool when more than one worker is allowed; results
    are identical to sequential execution because every item's work is
    independent and the output order is fixed.
    """
    items = list(items)
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
