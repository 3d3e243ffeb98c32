"""Fan-out of independent Monte-Carlo trials.

Each trial is a pure function of ``(context, index)``; results come back in
index order whatever ``jobs`` is, so reports are reproducible.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, TypeVar

T = TypeVar("T")


def run_trials(fn: Callable[..., T], context, trials: int, jobs: int = 1) -> list[T]:
    call = partial(fn, context)
    if jobs <= 1 or trials < 2:
        return [call(i) for i in range(trials)]
    chunk = max(1, trials // (jobs * 4))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(call, range(trials), chunksize=chunk))
