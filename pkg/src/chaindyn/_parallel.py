"""Optional thread fan-out, capped by the CHAINDYN_THREADS environment variable."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

ENV_VAR = "CHAINDYN_THREADS"

_T = TypeVar("_T")
_R = TypeVar("_R")


def thread_count() -> int:
    raw = os.environ.get(ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn: Callable[[_T], _R], items: Iterable[_T]) -> list[_R]:
    """map() preserving input order, fanned out over CHAINDYN_THREADS workers.

    Work items must be independent and side-effect free; results are then
    identical for every thread count, which is what keeps reports
    byte-stable across 1 vs N threads.
    """
    seq: Sequence[_T] = list(items)
    workers = thread_count()
    if workers == 1 or len(seq) <= 1:
        return [fn(item) for item in seq]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seq))
