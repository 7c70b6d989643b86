"""Order-preserving map over independent work items."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: int = 1, chunksize: int | None = None) -> list[R]:
    """[fn(x) for x in items], optionally across processes; results keep input order.

    Each item is computed by exactly the same code path in either mode, and
    reductions happen afterwards in the caller, so output does not depend on
    ``workers``.
    """
    items = list(items)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    if chunksize is None:
        chunksize = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunksize))
