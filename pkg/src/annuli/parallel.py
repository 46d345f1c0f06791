"""Thread fan-out with deterministic, order-preserving reductions.

The worker count comes from the ``ANNULI_THREADS`` environment variable
(``0`` or unset means one worker per CPU). Callers always receive results in
input order, so any reduction they perform is independent of the worker count.
"""

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "ANNULI_THREADS"


def thread_count():
    raw = os.environ.get(ENV_VAR, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def pmap(fn, items):
    """Map ``fn`` over ``items`` and return a list in input order."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
