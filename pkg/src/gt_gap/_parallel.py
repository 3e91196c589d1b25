import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    """Number of worker threads, capped by ``GT_GAP_THREADS`` (default 1)."""
    raw = os.environ.get("GT_GAP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def ordered_map(fn, items):
    """Apply ``fn`` to every item, returning results in input order."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
