"""Deterministic fan-out over disjoint work slices.

Long enumerations split into independent slices whose results merge in slice
order, so the output never depends on the worker count.  The worker count
comes from an explicit argument, the K3BN_WORKERS environment variable, or
the number of available execution units, in that order.  Small jobs stay
sequential: the split is a throughput knob, not a semantic one.
"""

from __future__ import annotations

import multiprocessing
import os
from typing import Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")
R = TypeVar("R")

WORKERS_ENV = "K3BN_WORKERS"

# Below this many elementary steps, process pools cost more than they save.
_PARALLEL_THRESHOLD = 200_000


def resolve_workers(explicit: int | None = None) -> int:
    if explicit is not None:
        return max(1, int(explicit))
    env = os.environ.get(WORKERS_ENV, "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _context():
    try:
        return multiprocessing.get_context("fork")
    except ValueError:  # pragma: no cover - non-forking platforms
        return multiprocessing.get_context()


def ordered_imap(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: int,
    *,
    big_enough: int = 0,
) -> Iterator[R]:
    """Yield fn(item) in item order, possibly computed by a process pool."""
    mats = list(items)
    if workers <= 1 or len(mats) < 2 or big_enough < _PARALLEL_THRESHOLD:
        for it in mats:
            yield fn(it)
        return
    with _context().Pool(min(workers, len(mats))) as pool:
        yield from pool.imap(fn, mats)
