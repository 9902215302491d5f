"""
Brute-force counting referees for the exact paths
"""
import logging
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from bitcore import s2_array
from models import CountingWindow, DomainError, SignSequence
from runner import parallel_map

CHUNK = 1 << 20
MAX_SHIFT = 1 << 62

logger = logging.getLogger("oracle")

WindowLike = Union[CountingWindow, int]


def _window(window: WindowLike) -> CountingWindow:
    return window if isinstance(window, CountingWindow) else CountingWindow(window)


def _count_chunk(args: Tuple[int, int, int]) -> Counter:
    a, lo, hi = args
    ns = np.arange(lo, hi, dtype=np.uint64)
    diffs = s2_array(ns + np.uint64(a)) - s2_array(ns)
    # s2(n + a) - s2(n) >= -s2(n) >= -bit_length(hi)
    offset = hi.bit_length()
    counts = np.bincount(diffs + offset)
    logger.debug(f"a={a}: counted [{lo}, {hi})")
    return Counter({int(i) - offset: int(counts[i]) for i in np.flatnonzero(counts)})


@lru_cache(maxsize=256)
def _histogram(a: int, M: int, workers: Optional[int]) -> Tuple[Tuple[int, int], ...]:
    size = 1 << M
    chunks = [(a, lo, min(lo + CHUNK, size)) for lo in range(0, size, CHUNK)]
    total: Counter = Counter()
    for part in parallel_map(_count_chunk, chunks, workers):
        total.update(part)
    return tuple(sorted(total.items()))


def brute_histogram(a: int, window: WindowLike, workers: Optional[int] = None) -> Dict[int, int]:
    """{d: #{n < 2^M : s2(n + a) - s2(n) = d}}"""
    window = _window(window)
    if not 0 <= a < MAX_SHIFT:
        raise DomainError(f"brute-force counting needs 0 <= a < 2^62, got {a}")
    return dict(_histogram(a, window.M, workers))


def brute_density(a: int, d: int, window: WindowLike, workers: Optional[int] = None) -> Fraction:
    window = _window(window)
    return Fraction(brute_histogram(a, window, workers).get(d, 0), window.size)


def brute_moment(a: int, k: int, window: WindowLike, workers: Optional[int] = None) -> Fraction:
    """(1/2^M) sum_{n < 2^M} (s2(n + a) - s2(n))^k"""
    window = _window(window)
    if k < 0:
        raise DomainError(f"moment order must be non-negative, got {k}")
    hist = brute_histogram(a, window, workers)
    return Fraction(sum(count * d ** k for d, count in hist.items()), window.size)


def brute_cusick(a: int, window: WindowLike, workers: Optional[int] = None) -> Fraction:
    """Share of n < 2^M with s2(n + a) >= s2(n)"""
    window = _window(window)
    hist = brute_histogram(a, window, workers)
    return Fraction(sum(count for d, count in hist.items() if d >= 0), window.size)


def brute_correlation_C2(signs: Union[SignSequence, Sequence[int]]) -> int:
    """Every lag g >= 1, start and window length, summed directly"""
    b = list(signs.signs if isinstance(signs, SignSequence) else signs)
    if len(b) < 3:
        raise DomainError(f"correlation needs a sequence of length >= 3, got {len(b)}")
    best = 0
    for g in range(1, len(b)):
        for start in range(len(b) - g):
            running = 0
            for k in range(start, len(b) - g):
                running += b[k] * b[k + g]
                best = max(best, abs(running))
    return best
