"""
Suffix-word sets P_{a,d} whose cylinders partition E_{a,d} = {n : s2(n+a) - s2(n) = d}
"""
import logging
import threading
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Tuple

import numpy as np

from bitcore import s2
from models import CylinderIntegrityError, DomainError, WordSet


def merge_siblings(words: Iterable[str]) -> FrozenSet[str]:
    """Replace {0u, 1u} by {u} until no such pair is left ([0u] and [1u] tile [u])"""
    current = set(words)
    while True:
        zeros = [w for w in current if w.startswith('0') and '1' + w[1:] in current]
        if not zeros:
            return frozenset(current)
        for word in zeros:
            current.discard(word)
            current.discard('1' + word[1:])
            current.add(word[1:])


class CylinderSolver:
    """
    Memoized recursion for P_{a,d}.

    The memo table is guarded by a lock, so one solver may be shared between threads.
    """

    def __init__(self):
        self._memo: Dict[Tuple[int, int], FrozenSet[str]] = {}
        self._lock = threading.RLock()
        self.logger = logging.getLogger("cylinder")

    def solve(self, a: int, d: int) -> WordSet:
        if a < 0:
            raise DomainError(f"a must be non-negative, got {a}")
        with self._lock:
            words = self._words(a, d)
        self.logger.debug(f"P_({a},{d}) has {len(words)} words")
        return WordSet(words=words, a=a, d=d)

    def _words(self, a: int, d: int) -> FrozenSet[str]:
        key = (a, d)
        cached = self._memo.get(key)
        if cached is not None:
            return cached

        if d > s2(a):
            words: FrozenSet[str] = frozenset()
        elif a == 0:
            words = frozenset({''}) if d == 0 else frozenset()
        elif a == 1:
            # n even gains one digit; n ending in 0 followed by k ones loses k - 1
            words = frozenset({'0' + '1' * (1 - d)})
        elif a % 2 == 0:
            inner = self._words(a // 2, d)
            words = frozenset(w + '0' for w in inner) | frozenset(w + '1' for w in inner)
        else:
            words = (frozenset(w + '0' for w in self._words(a // 2, d - 1))
                     | frozenset(w + '1' for w in self._words(a // 2 + 1, d + 1)))
        words = merge_siblings(words)
        self._memo[key] = words
        return words


_default_solver = CylinderSolver()


def solve(a: int, d: int) -> WordSet:
    return _default_solver.solve(a, d)


def check_suffix_free(ws: WordSet):
    words = ws.words
    for word in words:
        for cut in range(1, len(word) + 1):
            if word[cut:] in words:
                raise CylinderIntegrityError(
                    f"P_({ws.a},{ws.d}): '{word[cut:]}' is a suffix of '{word}'"
                )


def density(ws: WordSet) -> Fraction:
    """sum_w 2^-|w|"""
    check_suffix_free(ws)
    return sum((Fraction(1, 1 << len(w)) for w in ws.words), Fraction(0))


def member(n: int, ws: WordSet) -> bool:
    """bin(n), zero-padded on the left, ends with some word of ws"""
    padded = (format(n, 'b') if n else '').zfill(ws.max_length)
    return any(padded.endswith(w) for w in ws.words)


def member_mask(ns: np.ndarray, ws: WordSet) -> np.ndarray:
    """Vectorized member: n is in [w] iff n mod 2^|w| == int(w, 2)"""
    ns = np.asarray(ns, dtype=np.uint64)
    mask = np.zeros(ns.shape, dtype=bool)
    for w in ws.words:
        if not w:
            return np.ones(ns.shape, dtype=bool)
        if len(w) >= 64:
            # n < 2^64 <= 2^|w|, so n mod 2^|w| is n itself
            target = int(w, 2)
            if target < 2 ** 64:
                mask |= ns == np.uint64(target)
            continue
        low = np.uint64((1 << len(w)) - 1)
        mask |= (ns & low) == np.uint64(int(w, 2))
    return mask
