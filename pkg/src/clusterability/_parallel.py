"""Replicate-loop execution, serial or threaded.

Every bootstrap and batch loop in this package derives an independent
substream per replicate index, so results never depend on scheduling.
That makes threading a pure throughput knob: `map_indexed` returns the
same list either way.  The worker count is process-global (set once by
the CLI) so library signatures stay free of plumbing.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")

_max_workers = 1


def set_threads(count: int | None) -> None:
    """Set the worker count for replicate loops (None or <1 means serial)."""
    global _max_workers
    _max_workers = max(1, int(count)) if count else 1


def get_threads() -> int:
    return _max_workers


def map_indexed(fn: Callable[[int], T], count: int) -> list[T]:
    """[fn(0), ..., fn(count-1)], in index order, possibly computed in parallel."""
    if _max_workers <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=_max_workers) as pool:
        return list(pool.map(fn, range(count)))
