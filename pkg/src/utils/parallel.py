"""Thread fan-out with results returned in submission order."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from loguru import logger

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(
    func: Callable[[T], R],
    items: Iterable[T],
    *,
    max_workers: int = 1,
) -> list[R]:
    """Apply ``func`` to every item, concurrently when ``max_workers > 1``.

    Results keep the order of ``items`` whatever the scheduling, so any
    reduction over them is independent of the worker count. The first
    failure is re-raised after the remaining tasks have been cancelled.
    """
    item_list = list(items)
    if not item_list:
        return []
    if max_workers <= 1 or len(item_list) == 1:
        return [func(item) for item in item_list]

    workers = min(max_workers, len(item_list))
    logger.debug(f"Fan-out tasks={len(item_list)} workers={workers}")
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="gp-lab") as executor:
        futures = [executor.submit(func, item) for item in item_list]
        results: list[R] = []
        try:
            for future in futures:
                results.append(future.result())
        except BaseException:
            for future in futures:
                future.cancel()
            raise
    return results


__all__ = ["ordered_map"]
