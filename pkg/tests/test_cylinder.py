"""
Tests for the suffix-word sets P_{a,d}
"""
import os
import sys
import threading
from fractions import Fraction
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import pytest

from bitcore import s2, s2_array
from cylinder import CylinderSolver, check_suffix_free, density, member, member_mask, merge_siblings, solve
from measure import build_measures_upto, cdf, evaluate
from models import CylinderIntegrityError, DomainError, WordSet

TABLE = build_measures_upto(256)


def test_base_cases():
    assert solve(0, 0).words == frozenset({''})
    assert solve(0, 3).words == frozenset()
    assert solve(1, 1).words == frozenset({'0'})
    assert solve(1, -1).words == frozenset({'011'})
    assert solve(1, 2).words == frozenset()
    assert solve(3, 5).words == frozenset()
    assert solve(3, 0).source == (3, 0)


def test_density_examples():
    assert density(solve(0, 0)) == 1
    assert density(solve(1, 1)) == Fraction(1, 2)
    assert density(solve(1, -1)) == Fraction(1, 8)
    assert density(solve(3, 2)) == Fraction(1, 4)
    assert density(solve(3, 0)) == Fraction(5, 16)


def test_member_examples():
    assert member(4, solve(1, 1))
    assert not member(5, solve(1, 1))
    # bin(3) = "11" is padded to "011"
    assert member(3, solve(1, -1))
    assert member(1, solve(0, 0))


def test_merge_siblings():
    assert merge_siblings({'01', '11'}) == frozenset({'1'})
    assert merge_siblings({'001', '101', '11'}) == frozenset({'1'})
    assert merge_siblings({'00', '01'}) == frozenset({'00', '01'})
    assert merge_siblings({'0', '1'}) == frozenset({''})


def test_suffix_free_and_integrity():
    for a in range(64):
        for d in range(-6, 7):
            check_suffix_free(solve(a, d))
    broken = WordSet(words=frozenset({'1', '01'}), a=0, d=0)
    with pytest.raises(CylinderIntegrityError):
        density(broken)


def test_density_equals_measure():
    for a in range(256):
        for d in range(-6, 7):
            assert density(solve(a, d)) == evaluate(TABLE[a], d)


def test_densities_sum_to_right_tail_mass():
    for a in range(256):
        lo = -8
        total = sum((density(solve(a, d)) for d in range(lo, s2(a) + 1)), Fraction(0))
        assert total == 1 - cdf(TABLE[a], lo - 1)


def test_membership_matches_digit_sums():
    ns = np.arange(1 << 18, dtype=np.uint64)
    base = s2_array(ns)
    for a in range(64):
        diffs = s2_array(ns + np.uint64(a)) - base
        for d in range(-6, 7):
            assert np.array_equal(member_mask(ns, solve(a, d)), diffs == d), (a, d)


def test_member_agrees_with_mask():
    ns = np.arange(300, dtype=np.uint64)
    for a, d in ((3, 0), (5, -2), (12, 1), (0, 0)):
        ws = solve(a, d)
        mask = member_mask(ns, ws)
        assert [member(int(n), ws) for n in ns] == mask.tolist()


def test_negative_a():
    with pytest.raises(DomainError):
        solve(-1, 0)


def test_shared_solver_threads():
    solver = CylinderSolver()
    results = {}

    def work(a):
        results[a] = density(solver.solve(a, 0))

    threads = [threading.Thread(target=work, args=(a,)) for a in range(1, 40)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    for a, value in results.items():
        assert value == evaluate(TABLE[a], 0)
    assert len(results) == 39


def main():
    """Run all tests"""
    print("cylinder tests")
    print("=" * 40)
    tests = [
        test_base_cases, test_density_examples, test_member_examples, test_merge_siblings,
        test_suffix_free_and_integrity, test_density_equals_measure,
        test_densities_sum_to_right_tail_mass, test_membership_matches_digit_sums,
        test_member_agrees_with_mask, test_negative_a, test_shared_solver_threads,
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
