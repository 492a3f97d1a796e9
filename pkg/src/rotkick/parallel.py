"""Deterministic parallel map.

Results always come back in submission order and every reduction happens
after the gather, so the thread count changes wall time, never values.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def default_threads() -> int:
    return max(1, os.cpu_count() or 1)


def map_ordered(fn, items, threads: int | None = None) -> list:
    items = list(items)
    n = default_threads() if threads is None else max(1, int(threads))
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
