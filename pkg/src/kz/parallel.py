"""Order-preserving map over independent grid points, optionally in worker processes."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def default_jobs() -> int:
    return os.cpu_count() or 1


def grid_map(fn, arg_tuples, jobs: int = 1) -> list:
    """``[fn(*args) for args in arg_tuples]``; results keep the input order."""
    items = list(arg_tuples)
    if jobs <= 1 or len(items) < 2:
        return [fn(*a) for a in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*items)))
