"""
Tests for the brute-force counting referees
"""
import os
import sys
from fractions import Fraction
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import pytest

from bitcore import s2
from measure import build_measures_upto, evaluate, variance
from models import CountingWindow, DomainError
from oracle import brute_correlation_C2, brute_cusick, brute_density, brute_histogram, brute_moment

TABLE = build_measures_upto(64)


def test_counting_window():
    assert CountingWindow(10).size == 1024
    with pytest.raises(DomainError):
        CountingWindow(31)
    with pytest.raises(DomainError):
        CountingWindow(-1)


def test_density_examples():
    assert brute_density(0, 0, 10) == 1
    assert brute_density(1, 1, 20) == Fraction(1, 2)
    assert abs(brute_density(3, 2, CountingWindow(24)) - Fraction(1, 4)) <= Fraction(1, 2 ** 10)


def test_histogram_counts_directly():
    hist = brute_histogram(5, 8)
    direct = {}
    for n in range(256):
        d = s2(n + 5) - s2(n)
        direct[d] = direct.get(d, 0) + 1
    assert hist == direct
    assert sum(hist.values()) == 256


def test_histogram_across_chunks():
    # 2^21 spans two chunks; serial and threaded counts agree
    serial = brute_histogram(7, 21, workers=1)
    threaded = brute_histogram(7, 21, workers=4)
    assert serial == threaded
    assert sum(serial.values()) == 1 << 21


def test_moment_examples():
    assert abs(brute_moment(1, 1, 22)) <= Fraction(1, 2 ** 8)
    assert abs(brute_moment(3, 2, 22) - 3) <= Fraction(1, 100)
    assert brute_moment(9, 0, 12) == 1
    with pytest.raises(DomainError):
        brute_moment(1, -1, 10)


def test_cusick_example():
    assert abs(brute_cusick(1, 22) - Fraction(3, 4)) <= Fraction(1, 2 ** 10)


def test_shift_range():
    with pytest.raises(DomainError):
        brute_histogram(-1, 10)
    with pytest.raises(DomainError):
        brute_histogram(1 << 62, 10)


def test_densities_converge():
    worst = {}
    for M in (16, 20, 24):
        error = Fraction(0)
        for a in range(64):
            hist = brute_histogram(a, M)
            for d in range(-8, 9):
                observed = Fraction(hist.get(d, 0), 1 << M)
                error = max(error, abs(observed - evaluate(TABLE[a], d)))
        worst[M] = error
    assert worst[24] <= Fraction(1, 2 ** 10)
    assert worst[16] >= worst[20] >= worst[24]


def test_moments_match_variance():
    for a in range(32):
        assert abs(brute_moment(a, 2, 22) - variance(TABLE[a])) <= Fraction(1, 100), a


def test_correlation_referee():
    assert brute_correlation_C2([1, 1, -1, 1]) == 2
    assert brute_correlation_C2([1] * 10) == 9
    with pytest.raises(DomainError):
        brute_correlation_C2([1])


def main():
    """Run all tests"""
    print("oracle tests")
    print("=" * 40)
    tests = [
        test_counting_window, test_density_examples, test_histogram_counts_directly,
        test_histogram_across_chunks, test_moment_examples, test_cusick_example, test_shift_range,
        test_densities_converge, test_moments_match_variance, test_correlation_referee,
    ]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"  ✓ {test.__name__}")
        except Exception as e:
            failed += 1
            print(f"  ✗ {test.__name__}: {e!r}")
    print(f"\n{len(tests) - failed}/{len(tests)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
