"""
Binary-expansion primitives and pattern statistics of bin(a)
"""
from typing import Sequence, Union

import numpy as np

from models import BitString, DomainError, SignSequence


def _as_bitstring(a: Union[int, BitString]) -> BitString:
    return a if isinstance(a, BitString) else BitString.from_int(a)


def s2(value: int) -> int:
    """Sum of binary digits"""
    if value < 0:
        raise DomainError(f"s2 is defined on non-negative integers, got {value}")
    return value.bit_count()


def s2_array(values: np.ndarray) -> np.ndarray:
    """Vectorized popcount of an unsigned integer array"""
    return np.bitwise_count(np.asarray(values, dtype=np.uint64)).astype(np.int64)


def signs(a: Union[int, BitString]) -> SignSequence:
    return SignSequence.from_bits(_as_bitstring(a))


def l_count(a: Union[int, BitString], leading_zero: bool = False) -> int:
    """
    Occurrences of "01" in a_n...a_0.

    The literal string has no implicit leading zero, so l(1) = 0. With
    leading_zero=True the count is taken on "0" + a_n...a_0, which equals the
    number of maximal blocks of ones.
    """
    word = _as_bitstring(a).word
    if leading_zero and word:
        word = '0' + word
    return sum(1 for k in range(len(word) - 1) if word[k] == '0' and word[k + 1] == '1')


def sigma(a: Union[int, BitString], i: int) -> int:
    """Occurrences of 0w1 or 1w0 with |w| = i - 1, i.e. positions at distance i holding different bits"""
    bits = _as_bitstring(a)
    n = bits.top_index
    if not 1 <= i <= n:
        raise DomainError(f"sigma_i(a) needs 1 <= i <= n = {n}, got i = {i}")
    word = bits.word
    return sum(1 for k in range(len(word) - i) if word[k] != word[k + i])


def assemble(bit_sequence: Sequence[int], n: int) -> int:
    """a_X(n) = sum_{k<=n} X_k 2^k"""
    if n < 0 or len(bit_sequence) < n + 1:
        raise DomainError(f"assemble needs at least {n + 1} bits, got {len(bit_sequence)}")
    if isinstance(bit_sequence, np.ndarray):
        # little-endian byte packing keeps this linear for thousands of bits
        packed = np.packbits(bit_sequence[:n + 1].astype(np.uint8), bitorder='little')
        return int.from_bytes(packed.tobytes(), 'little')
    value = 0
    for k in range(n, -1, -1):
        value = (value << 1) | (1 if bit_sequence[k] else 0)
    return value


def bits_array(a: Union[int, BitString], length: int = 0) -> np.ndarray:
    """0/1 uint8 array of a, least significant first, zero-padded to length"""
    bits = _as_bitstring(a).bits
    out = np.zeros(max(length, len(bits)), dtype=np.uint8)
    out[:len(bits)] = bits
    return out
