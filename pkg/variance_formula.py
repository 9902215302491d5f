"""
Closed forms for Var(mu_a) read off the binary expansion of a.

Four independent routes are available: the sign-correlation formula, the
sigma_i pattern form, the I/beta matrix chain and a truncated float version
of the first one for long random expansions. Adding zero bits above a_n
leaves every one of them unchanged.
"""
from fractions import Fraction
from typing import List, Union

import numpy as np

from bitcore import bits_array, l_count, s2_array, sigma, signs
from charfn import BETA, IDENTITY_PART, row_mat
from models import BitString, BoundsCheck, DomainError, PatternReading, VarianceBreakdown


def _positive(a: int) -> BitString:
    if a < 1:
        raise DomainError(f"the variance formulas need a >= 1 (n undefined for a = {a})")
    return BitString.from_int(a)


def variance_closed_form(a: int) -> VarianceBreakdown:
    bits = _positive(a)
    n = bits.top_index
    b = np.array(signs(bits).signs, dtype=np.int64)

    # every 1/2^i over the common denominator 2^n, kept as python ints
    correlation = 0
    for i in range(1, n + 1):
        correlation += int(np.dot(b[i:], b[:-i])) << (n - i)
    boundary = sum(int(b[k] + b[n - k]) << (n - k) for k in range(n + 1))

    return VarianceBreakdown(
        leading=Fraction(n + 3, 2),
        tail=-Fraction(1, 1 << (n + 1)),
        correlation_sum=-Fraction(correlation, 1 << (n + 1)),
        boundary_sum=Fraction(boundary, 1 << (n + 1)),
    )


def variance_sigma_form(a: int) -> Fraction:
    bits = _positive(a)
    n = bits.top_index
    b = signs(bits).signs
    total = 1 + Fraction(n, 1 << (n + 1))
    for i in range(1, n + 1):
        total += Fraction(i, 1 << (i + 1)) + Fraction(sigma(bits, i), 1 << i)
    total += sum((Fraction(b[k] + b[n - k], 1 << (k + 1)) for k in range(n + 1)), Fraction(0))
    return total


def variance_matrix_form(a: int) -> Fraction:
    """(1 0)(beta_{a_0} + I_{a_0} beta_{a_1} + ... ) (1 1)^T + (1 0) I_{a_0}...I_{a_n} (0 2)^T"""
    bits = _positive(a)
    row = (Fraction(1), Fraction(0))
    total = Fraction(0)
    for bit in bits.bits:
        x, y = row_mat(row, BETA[bit])
        total += x + y
        row = row_mat(row, IDENTITY_PART[bit])
    return total + 2 * row[1]


def variance_float(bits: np.ndarray, lag_cap: int = 64) -> Union[float, np.ndarray]:
    """
    Closed form in double precision from 0/1 bits, least significant first.

    A 2-D array holds one expansion per row and gives one variance per row.
    Lags above lag_cap carry weight below 2^-lag_cap and are dropped.
    """
    bits = np.asarray(bits)
    width = bits.shape[-1]
    if width < 1:
        raise DomainError("variance_float needs at least one bit")
    n = width - 1
    b = 2.0 * bits.astype(np.float64) - 1.0

    correlation = np.zeros(bits.shape[:-1], dtype=np.float64)
    for i in range(1, min(n, lag_cap) + 1):
        correlation += np.sum(b[..., i:] * b[..., :-i], axis=-1) * 2.0 ** -i
    weights = np.exp2(-(np.arange(width, dtype=np.float64) + 1.0))
    boundary = (b + b[..., ::-1]) @ weights

    result = (n + 3) / 2.0 - 2.0 ** -(n + 1) - 0.5 * correlation + boundary
    return float(result) if np.ndim(result) == 0 else result


def _l_value(a: int, reading: PatternReading) -> int:
    return l_count(a, leading_zero=reading is PatternReading.LEADING_ZERO)


def variance_bounds_check(a: int, reading: PatternReading = PatternReading.LITERAL) -> BoundsCheck:
    """l(a) - 1 <= Var(mu_a) <= 4 l(a) + 2, exactly"""
    value = variance_closed_form(a).total
    l = _l_value(a, reading)
    return BoundsCheck(lower=l - 1, value=value, upper=4 * l + 2,
                       ok=l - 1 <= value <= 4 * l + 2)


def variance_bounds_sweep(max_a: int, reading: PatternReading = PatternReading.LITERAL,
                          tolerance: float = 1e-9) -> List[int]:
    """Every 1 <= a < max_a violating the bounds on the float path"""
    if max_a <= 1:
        return []
    values = np.arange(1, max_a, dtype=np.uint64)
    width = int(max_a - 1).bit_length()
    bits = ((values[:, None] >> np.arange(width, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(np.uint8)
    var = variance_float(bits, lag_cap=width)
    # maximal blocks of ones: a one-bit whose upper neighbour is zero
    blocks = s2_array(values & ~(values >> np.uint64(1)))
    l = blocks if reading is PatternReading.LEADING_ZERO else blocks - 1
    bad = (var < l - 1 - tolerance) | (var > 4 * l + 2 + tolerance)
    return [int(a) for a in values[bad]]


def variance_of_int_float(a: int, lag_cap: int = 64) -> float:
    return variance_float(bits_array(_positive(a)), lag_cap=lag_cap)
