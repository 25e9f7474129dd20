import os
from concurrent.futures import ProcessPoolExecutor


def worker_count() -> int:
    """Worker cap from LOGBATH_THREADS (default 1: run in-process)."""
    raw = os.environ.get("LOGBATH_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn, items, workers=None):
    """map() that may fan out to processes but always returns input order."""
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as ex:
        return list(ex.map(fn, items))
