"""Optional process parallelism, capped by the IVSSA_THREADS variable."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

from .core import ParameterError

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "IVSSA_THREADS"


def worker_count() -> int:
    """Worker cap from IVSSA_THREADS; unset/empty means serial."""
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ParameterError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ParameterError(f"{ENV_VAR} must be >= 1, got {value}")
    return value


def run_tasks(func: Callable[[T], R], tasks: Sequence[T]) -> list[R]:
    """Apply func over tasks, preserving order.

    Uses a process pool when IVSSA_THREADS allows; results are identical to
    the serial path because each task is independent and the reduce order is
    fixed by the task list.
    """
    workers = worker_count()
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    workers = min(workers, len(tasks))
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks, chunksize=chunk))
