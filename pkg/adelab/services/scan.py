"""Параллельный перебор простых: пул процессов, результаты в порядке возрастания p."""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

from sympy import primerange

logger = logging.getLogger(__name__)

T = TypeVar("T")


def primes_upto(pmax: int, pmin: int = 2) -> list[int]:
    return [int(p) for p in primerange(pmin, pmax + 1)]


def run_scan(
    fn: Callable[[int], T],
    primes: Iterable[int],
    workers: int = 1,
    stop: Optional[Callable[[T], bool]] = None,
    chunksize: int = 1,
    label: str = "scan",
) -> tuple[list[T], bool]:
    """Применить fn к каждому простому.

    fn должна быть picklable (функция модуля или functools.partial). Результаты собираются
    строго в порядке входного списка. stop(result) == True прерывает перебор; второй элемент
    ответа сообщает, был ли перебор прерван.
    """
    primes = list(primes)
    started = time.perf_counter()
    logger.info("%s: %d primes on %d worker(s)", label, len(primes), workers)
    results: list[T] = []
    truncated = False
    if workers <= 1 or len(primes) <= 1:
        for p in primes:
            r = fn(p)
            results.append(r)
            if stop is not None and stop(r):
                truncated = True
                break
    else:
        executor = ProcessPoolExecutor(max_workers=workers)
        try:
            for r in executor.map(fn, primes, chunksize=chunksize):
                results.append(r)
                if stop is not None and stop(r):
                    truncated = True
                    break
        finally:
            executor.shutdown(wait=True, cancel_futures=True)
    if truncated:
        logger.warning("%s: stopped early after %d of %d primes", label, len(results), len(primes))
    logger.info("%s: done in %.2fs", label, time.perf_counter() - started)
    return results, truncated
