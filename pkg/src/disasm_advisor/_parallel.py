from __future__ import annotations

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "DISASM_ADVISOR_THREADS"


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else $DISASM_ADVISOR_THREADS, else 1.

    0 means one worker per CPU.
    """
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "1").strip() or "1"
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if workers < 0:
        raise ValueError("worker count must be >= 0")
    if workers == 0:
        workers = os.cpu_count() or 1
    return workers


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """``list(map(fn, items))``, optionally on a thread pool; output order is input order."""
    items = list(items)
    n = resolve_workers(workers)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
