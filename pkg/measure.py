"""
Exact representation and algebra of the measures mu_a on Z.

Every mu_a is a finite combination of shifted Dirac masses and shifted
copies of mu_1, where mu_1(t) = 2^(t-2) for t <= 1. The construction follows
mu_{2a} = mu_a and mu_{2a+1}(d) = 1/2 mu_a(d-1) + 1/2 mu_{a+1}(d+1), walking
the bits of a from the most significant one while carrying (mu_b, mu_{b+1}).

Below the tail start d* every measure is exactly geometric,
mu(d-1) = mu(d) / 2, so infinite sums close as finite window + geometric tail.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple, Union

import numpy as np

from models import BitString, MeasurePair, MeasureRep

Real = Union[int, float, Fraction]

MU0 = MeasureRep(delta_part={0: Fraction(1)}, mu1_part={})
MU1 = MeasureRep(delta_part={}, mu1_part={0: Fraction(1)})


def _pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def rational_str(x: Fraction) -> str:
    """Lowest-terms "num/den" ("3" for integers)"""
    return str(Fraction(x))


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


# --- construction ---

def shift(rep: MeasureRep, s: int) -> MeasureRep:
    """The measure d -> rep(d + s)"""
    return MeasureRep(
        delta_part={o - s: c for o, c in rep.delta_part.items()},
        mu1_part={k + s: c for k, c in rep.mu1_part.items()},
    )


def _accumulate(target: Dict[int, Fraction], source: Dict[int, Fraction], weight: Fraction):
    for key, coef in source.items():
        value = target.get(key, 0) + weight * coef
        if value:
            target[key] = value
        else:
            target.pop(key, None)


def combine_odd(lower: MeasureRep, upper: MeasureRep) -> MeasureRep:
    """mu_{2b+1}(d) = 1/2 mu_b(d-1) + 1/2 mu_{b+1}(d+1)"""
    half = Fraction(1, 2)
    delta: Dict[int, Fraction] = {}
    mu1: Dict[int, Fraction] = {}
    down, up = shift(lower, -1), shift(upper, 1)
    _accumulate(delta, down.delta_part, half)
    _accumulate(delta, up.delta_part, half)
    _accumulate(mu1, down.mu1_part, half)
    _accumulate(mu1, up.mu1_part, half)
    return MeasureRep(delta_part=delta, mu1_part=mu1)


def apply_bit(pair: MeasurePair, bit: int) -> MeasurePair:
    """A_0 or A_1 acting on (mu_b, mu_{b+1})"""
    odd = combine_odd(pair.lower, pair.upper)
    if bit:
        return MeasurePair(lower=odd, upper=pair.upper)
    return MeasurePair(lower=pair.lower, upper=odd)


def build_measure(a: int) -> MeasureRep:
    if a == 0:
        return MU0
    word = BitString.from_int(a).word
    # the leading one takes (mu_0, mu_1) to (mu_1, mu_2) and mu_2 = mu_1
    pair = MeasurePair(lower=MU1, upper=MU1)
    for char in word[1:]:
        pair = apply_bit(pair, char == '1')
    return pair.lower


def build_measures_upto(max_a: int) -> List[MeasureRep]:
    """[mu_0, ..., mu_{max_a - 1}] from the recurrence, bottom-up"""
    table: List[MeasureRep] = [MU0, MU1][:max(max_a, 0)]
    for a in range(2, max_a):
        half = a >> 1
        table.append(table[half] if a % 2 == 0 else combine_odd(table[half], table[half + 1]))
    return table


# --- support and tail ---

def support(rep: MeasureRep) -> Tuple[int, int]:
    """(d*, top): geometric for d <= d*, zero for d > top"""
    starts, tops = [], []
    if rep.delta_part:
        starts.append(min(rep.delta_part) - 1)
        tops.append(max(rep.delta_part))
    if rep.mu1_part:
        starts.append(1 - max(rep.mu1_part))
        tops.append(1 - min(rep.mu1_part))
    if not starts:
        return 0, 0
    return min(starts), max(tops)


def tail_start(rep: MeasureRep) -> int:
    return support(rep)[0]


def mu1_value(t: int) -> Fraction:
    return _pow2(t - 2) if t <= 1 else Fraction(0)


def evaluate(rep: MeasureRep, d: int) -> Fraction:
    value = rep.delta_part.get(d, Fraction(0))
    for k, coef in rep.mu1_part.items():
        if d + k <= 1:
            value += coef * _pow2(d + k - 2)
    return value


def window(rep: MeasureRep) -> List[Tuple[int, Fraction]]:
    """[(d, mu(d)) for d* < d <= top] in one linear sweep"""
    start, top = support(rep)
    d = start + 1
    # running sum of q_k 2^(k-2) over the copies of mu_1 still alive at d
    alive = sum((c * _pow2(k - 2) for k, c in rep.mu1_part.items() if k <= 1 - d), Fraction(0))
    values = []
    while d <= top:
        values.append((d, rep.delta_part.get(d, Fraction(0)) + alive * _pow2(d)))
        alive -= rep.mu1_part.get(1 - d, 0) * _pow2(-1 - d)
        d += 1
    return values


def _tail(rep: MeasureRep) -> Tuple[int, Fraction]:
    start = tail_start(rep)
    return start, evaluate(rep, start)


# --- moments ---

@lru_cache(maxsize=None)
def _geometric_power_sum(k: int) -> Fraction:
    """sum_{m>=0} m^k 2^-m, from T_k = sum_{i<k} C(k,i) T_i"""
    if k == 0:
        return Fraction(2)
    return sum((math.comb(k, i) * _geometric_power_sum(i) for i in range(k)), Fraction(0))


@lru_cache(maxsize=None)
def mu1_moment(k: int) -> Fraction:
    """M_k = sum_{d<=1} d^k 2^(d-2)"""
    if k < 0:
        raise ValueError(f"moment order must be non-negative, got {k}")
    # d = 1 and d = 0 terms, then d = -m for m >= 1
    head = Fraction(1, 2) + (Fraction(1, 4) if k == 0 else 0)
    tail = _geometric_power_sum(k) - (1 if k == 0 else 0)
    return head + (-1) ** k * tail / 4


def moment(rep: MeasureRep, k: int) -> Fraction:
    total = sum((c * Fraction(o) ** k for o, c in rep.delta_part.items()), Fraction(0))
    for s, coef in rep.mu1_part.items():
        # sum_d d^k mu_1(d + s) = sum_t (t - s)^k mu_1(t)
        total += coef * sum(
            (math.comb(k, i) * (-s) ** (k - i) * mu1_moment(i) for i in range(k + 1)), Fraction(0)
        )
    return total


def total_mass(rep: MeasureRep) -> Fraction:
    return sum(rep.delta_part.values(), Fraction(0)) + sum(rep.mu1_part.values(), Fraction(0))


def mean(rep: MeasureRep) -> Fraction:
    return moment(rep, 1) / total_mass(rep)


def variance(rep: MeasureRep) -> Fraction:
    mass = total_mass(rep)
    m = moment(rep, 1) / mass
    return moment(rep, 2) / mass - m * m


# --- sums over Z ---

def l2_norm_squared(rep: MeasureRep) -> Fraction:
    start, value = _tail(rep)
    tail = value * value * Fraction(4, 3)
    return tail + sum((v * v for _, v in window(rep)), Fraction(0))


def cusick_c(rep: MeasureRep) -> Fraction:
    """sum_{d>=0} mu(d)"""
    start, value = _tail(rep)
    total = sum((v for d, v in window(rep) if d >= 0), Fraction(0))
    if start >= 0:
        total += value * (2 - _pow2(-start))
    return total


def cdf(rep: MeasureRep, x: Real) -> Fraction:
    """mu((-inf, x])"""
    if isinstance(x, float):
        if math.isnan(x):
            raise ValueError("cdf is undefined at NaN")
        if math.isinf(x):
            return total_mass(rep) if x > 0 else Fraction(0)
    f = math.floor(x)
    start, value = _tail(rep)
    if f <= start:
        return value * _pow2(f - start + 1)
    return 2 * value + sum((v for d, v in window(rep) if d <= f), Fraction(0))


# --- wire format ---

def to_json(rep: MeasureRep) -> Dict[str, Dict[str, str]]:
    return {
        "delta": {str(o): rational_str(c) for o, c in sorted(rep.delta_part.items())},
        "mu1": {str(k): rational_str(c) for k, c in sorted(rep.mu1_part.items())},
    }


def from_json(data: Dict[str, Dict[str, str]]) -> MeasureRep:
    return MeasureRep(
        delta_part={int(o): parse_rational(c) for o, c in data.get("delta", {}).items()},
        mu1_part={int(k): parse_rational(c) for k, c in data.get("mu1", {}).items()},
    )


# --- float mirror ---

@dataclass(frozen=True)
class FloatMeasure:
    """Double-precision mirror of MeasureRep (numpy arrays, nonzero entries only)"""
    delta_offsets: np.ndarray
    delta_weights: np.ndarray
    mu1_offsets: np.ndarray
    mu1_weights: np.ndarray

    @classmethod
    def from_exact(cls, rep: MeasureRep) -> "FloatMeasure":
        return cls(
            delta_offsets=np.array(sorted(rep.delta_part), dtype=np.int64),
            delta_weights=np.array([float(rep.delta_part[o]) for o in sorted(rep.delta_part)], dtype=np.float64),
            mu1_offsets=np.array(sorted(rep.mu1_part), dtype=np.int64),
            mu1_weights=np.array([float(rep.mu1_part[k]) for k in sorted(rep.mu1_part)], dtype=np.float64),
        )

    def support(self) -> Tuple[int, int]:
        starts, tops = [], []
        if self.delta_offsets.size:
            starts.append(int(self.delta_offsets.min()) - 1)
            tops.append(int(self.delta_offsets.max()))
        if self.mu1_offsets.size:
            starts.append(1 - int(self.mu1_offsets.max()))
            tops.append(1 - int(self.mu1_offsets.min()))
        if not starts:
            return 0, 0
        return min(starts), max(tops)

    def evaluate_many(self, ds: np.ndarray, chunk: int = 256) -> np.ndarray:
        ds = np.asarray(ds, dtype=np.int64)
        out = np.zeros(ds.shape, dtype=np.float64)
        for lo in range(0, ds.size, chunk):
            block = ds[lo:lo + chunk]
            exps = block[:, None] + self.mu1_offsets[None, :] - 2
            terms = np.where(exps <= -1, self.mu1_weights[None, :] * np.exp2(np.minimum(exps, 0)), 0.0)
            out[lo:lo + chunk] = terms.sum(axis=1)
            hits = block[:, None] == self.delta_offsets[None, :]
            out[lo:lo + chunk] += (hits * self.delta_weights[None, :]).sum(axis=1)
        return out

    def evaluate(self, d: int) -> float:
        return float(self.evaluate_many(np.array([d]))[0])

    def window(self) -> Tuple[np.ndarray, np.ndarray]:
        start, top = self.support()
        ds = np.arange(start + 1, top + 1, dtype=np.int64)
        return ds, self.evaluate_many(ds)

    def _tail(self) -> Tuple[int, float]:
        start, _ = self.support()
        return start, self.evaluate(start)

    def total_mass(self) -> float:
        return float(self.delta_weights.sum() + self.mu1_weights.sum())

    def moment(self, k: int) -> float:
        start, value = self._tail()
        ds, values = self.window()
        # tail: sum_{j>=0} value 2^-j (start - j)^k
        tail = sum(
            math.comb(k, i) * float(start) ** (k - i) * (-1) ** i * float(_geometric_power_sum(i))
            for i in range(k + 1)
        )
        return float(np.sum(values * ds.astype(np.float64) ** k)) + value * tail

    def mean(self) -> float:
        return self.moment(1) / self.total_mass()

    def variance(self) -> float:
        mass = self.total_mass()
        m = self.moment(1) / mass
        return self.moment(2) / mass - m * m

    def l2_norm_squared(self) -> float:
        _, value = self._tail()
        _, values = self.window()
        return float(np.sum(values * values)) + value * value * 4.0 / 3.0

    def cusick_c(self) -> float:
        start, value = self._tail()
        ds, values = self.window()
        total = float(values[ds >= 0].sum())
        if start >= 0:
            total += value * (2.0 - 2.0 ** (-start))
        return total

    def cdf(self, x: float) -> float:
        if math.isinf(x):
            return self.total_mass() if x > 0 else 0.0
        f = math.floor(x)
        start, value = self._tail()
        if f <= start:
            return value * 2.0 ** (f - start + 1)
        ds, values = self.window()
        return 2.0 * value + float(values[ds <= f].sum())


def _shifted(arr: np.ndarray, s: int) -> np.ndarray:
    """out[i + s] = arr[i], zero-filled"""
    out = np.zeros_like(arr)
    if s > 0:
        out[s:] = arr[:-s]
    elif s < 0:
        out[:s] = arr[-s:]
    else:
        out[:] = arr
    return out


def build_measure_float(a: int) -> FloatMeasure:
    """Same walk as build_measure on float arrays indexed by mu_1 offset"""
    if a == 0:
        return FloatMeasure.from_exact(MU0)
    word = BitString.from_int(a).word
    span = len(word) + 1
    offsets = np.arange(-span, span + 1, dtype=np.int64)
    lower = np.zeros(offsets.size, dtype=np.float64)
    lower[span] = 1.0
    upper = lower.copy()
    for char in word[1:]:
        # key k of mu_b(d-1) is k-1, key k of mu_{b+1}(d+1) is k+1
        odd = 0.5 * _shifted(lower, -1) + 0.5 * _shifted(upper, 1)
        if char == '1':
            lower = odd
        else:
            upper = odd
    keep = lower != 0.0
    return FloatMeasure(
        delta_offsets=np.zeros(0, dtype=np.int64),
        delta_weights=np.zeros(0, dtype=np.float64),
        mu1_offsets=offsets[keep],
        mu1_weights=lower[keep],
    )
