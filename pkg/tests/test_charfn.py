"""
Tests for the characteristic function chain and the jet arithmetic behind it
"""
import cmath
import math
import os
import sys
from fractions import Fraction
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import pytest

from charfn import (ALPHA, BETA, IDENTITY_PART, boundary_jet, charfn_jet, eval_charfn,
                    eval_charfn_from_measure, jet_matrix, matrix_norm, matrix_relations_hold,
                    moments_via_jets, renormalized_moments, t_matrix)
from jets import ComplexRational, I, Jet, JetMatrix
from measure import build_measure, build_measures_upto, moment
from models import DomainError

THETAS = np.array([2 * math.pi * i / 64 for i in range(64)])


def _constant(matrix):
    return tuple(tuple(ComplexRational(x) for x in row) for row in matrix)


def test_complex_rational_arithmetic():
    z = ComplexRational(Fraction(1, 2), 3)
    w = ComplexRational(-1, Fraction(1, 4))
    assert z * w == ComplexRational(Fraction(-1, 2) - Fraction(3, 4), Fraction(1, 8) - 3)
    assert (z * w) / w == z
    assert I * I == -1
    assert z - z == 0
    assert z.conjugate() == ComplexRational(Fraction(1, 2), -3)
    assert ComplexRational.i_power(-1) == ComplexRational(0, -1)
    assert complex(z) == complex(0.5, 3.0)
    with pytest.raises(ZeroDivisionError):
        z / ComplexRational(0)


def test_jet_series_identities():
    K = 8
    product = Jet.exp_i(K, 1) * Jet.exp_i(K, -1)
    assert product == Jet.one(K)
    x = Jet([1, 2, Fraction(1, 3), 0, 5])
    assert (x * Jet.exp_i(4)) / Jet.exp_i(4) == x
    assert (x + Jet.zero(2)).order == 2
    assert (x * 3)[1] == 6


def test_jet_division_needs_unit():
    with pytest.raises(ZeroDivisionError):
        Jet.one(3) / Jet([0, 1, 0, 0])


def test_matrix_relations():
    assert matrix_relations_hold()
    for j in (0, 1):
        assert matrix_norm(IDENTITY_PART[j]) == 1
        assert matrix_norm(ALPHA[j]) == 1
        assert matrix_norm(BETA[j]) == 1


def test_jet_matrix_low_orders():
    assert jet_matrix(0, 0).coefficient(0) == _constant(((1, 0), (Fraction(1, 2), Fraction(1, 2))))
    m = jet_matrix(1, 2)
    assert m.coefficient(0) == _constant(IDENTITY_PART[1])
    half = Fraction(1, 2)
    assert m.coefficient(1) == ((ComplexRational(0, half), ComplexRational(0, -half)),
                                (ComplexRational(0), ComplexRational(0)))
    quarter = Fraction(-1, 4)
    assert m.coefficient(2) == ((ComplexRational(quarter), ComplexRational(quarter)),
                                (ComplexRational(0), ComplexRational(0)))


def test_t_matrix_matches_jet_matrix():
    K = 9
    for bit in (0, 1):
        m = jet_matrix(bit, K)
        for j in range(K + 1):
            assert t_matrix(bit, j) == m.coefficient(j)


def test_jet_matrix_product():
    K = 4
    product = jet_matrix(1, K) @ jet_matrix(0, K)
    row = (Jet.one(K), Jet.zero(K))
    chained = jet_matrix(0, K).row_times(jet_matrix(1, K).row_times(row))
    assert product.row_times(row) == chained
    assert isinstance(product, JetMatrix)


def test_domain_errors():
    with pytest.raises(DomainError):
        jet_matrix(2, 3)
    with pytest.raises(DomainError):
        boundary_jet(-1)
    with pytest.raises(DomainError):
        t_matrix(0, -1)
    with pytest.raises(DomainError):
        renormalized_moments(3, 0, 2)


def test_boundary_jet():
    one, tail = boundary_jet(4)
    assert one == Jet.one(4)
    assert [tail[j] for j in range(5)] == [ComplexRational(1), ComplexRational(0), ComplexRational(-1),
                                           ComplexRational(0, 1), ComplexRational(Fraction(19, 12))]
    one0, tail0 = boundary_jet(0)
    assert one0 == Jet.one(0) and tail0 == Jet.one(0)


def test_moments_via_jets_examples():
    assert moments_via_jets(1, 4) == [1, 0, 2, -6, 38]
    assert moments_via_jets(1, 2) == [1, 0, 2]
    assert moments_via_jets(3, 2) == [1, 0, 3]
    assert moments_via_jets(0, 3) == [1, 0, 0, 0]


def test_moments_match_measure():
    table = build_measures_upto(1024)
    for a in range(1024):
        jets = moments_via_jets(a, 8)
        for k, m in enumerate(jets):
            assert m == moment(table[a], k), (a, k)


def test_leading_zero_bits_are_harmless():
    # A_0 fixes the boundary vector, so a and a with extra top zeros agree
    K = 6
    jet = charfn_jet(11, K)
    row = (Jet.one(K), Jet.zero(K))
    for bit in (1, 1, 0, 1, 0, 0, 0):
        row = jet_matrix(bit, K).row_times(row)
    b0, b1 = boundary_jet(K)
    assert row[0] * b0 + row[1] * b1 == jet


def test_renormalized_moments():
    values = renormalized_moments(3, 4, 2)
    assert values[0] == 1.0
    assert values[1] == 0.0
    assert math.isclose(values[2], 3 * 2 / 4)


def test_eval_charfn_examples():
    for a in (0, 1, 3, 200):
        assert abs(eval_charfn(a, 0.0) - 1) < 1e-15
    for theta in THETAS:
        assert abs(eval_charfn(0, theta) - 1) < 1e-15
    theta = math.pi / 3
    expected = cmath.exp(1j * theta) / (2 - cmath.exp(-1j * theta))
    assert abs(eval_charfn(1, theta) - expected) < 1e-12


def test_charfn_paths_agree():
    table = build_measures_upto(1024)
    for a in range(1024):
        chain = eval_charfn(a, THETAS)
        direct = eval_charfn_from_measure(table[a], THETAS)
        assert np.max(np.abs(chain - direct)) <= 1e-9, a
        assert np.max(np.abs(chain)) <= 1 + 1e-12, a


def test_conjugate_symmetry():
    for a in (1, 5, 77, 1023):
        forward = eval_charfn(a, THETAS[1:])
        backward = eval_charfn(a, 2 * math.pi - THETAS[1:])
        assert np.max(np.abs(backward - np.conj(forward))) <= 1e-12


def test_measure_path_scalar():
    value = eval_charfn_from_measure(build_measure(1), math.pi / 3)
    assert isinstance(value, complex)
    assert abs(value - eval_charfn(1, math.pi / 3)) < 1e-12


def main():
    """Run all tests"""
    print("charfn tests")
    print("=" * 40)
    tests = [
        test_complex_rational_arithmetic, test_jet_series_identities, test_jet_division_needs_unit,
        test_matrix_relations, test_jet_matrix_low_orders, test_t_matrix_matches_jet_matrix,
        test_jet_matrix_product, test_domain_errors, test_boundary_jet,
        test_moments_via_jets_examples, test_moments_match_measure,
        test_leading_zero_bits_are_harmless, test_renormalized_moments, test_eval_charfn_examples,
        test_charfn_paths_agree, test_conjugate_symmetry, test_measure_path_scalar,
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
