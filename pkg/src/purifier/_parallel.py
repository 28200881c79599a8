import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "PURIFIER_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """None falls back to $PURIFIER_THREADS, then 1; 0 means one per CPU."""
    if threads is None:
        raw = os.environ.get(ENV_THREADS, "").strip()
        threads = int(raw) if raw else 1
    if threads < 0:
        raise ValueError(f"thread count must be >= 0, got {threads}")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads


def ordered_map(fn, items, threads: int | None = 1) -> list:
    """``[fn(x) for x in items]``, optionally on a thread pool; order is preserved."""
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
