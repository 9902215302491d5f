"""
Characteristic function of mu_a as a chain of 2x2 matrices.

    hat mu_a(theta) = (1 0) A_{a_0} ... A_{a_n} (1, e^{i theta} / (2 - e^{-i theta}))^T

with A_0 = [[1, 0], [e^{i theta}/2, e^{-i theta}/2]] and
A_1 = [[e^{i theta}/2, e^{-i theta}/2], [0, 1]]. The row vector is pushed
through the chain one bit at a time, least significant bit first.
"""
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from jets import ComplexRational, Jet, JetMatrix, JetRow
from measure import tail_start, evaluate, window
from models import BitString, ConsistencyError, DomainError, MeasureRep

Matrix = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]

_H = Fraction(1, 2)

I_0: Matrix = ((Fraction(1), Fraction(0)), (_H, _H))
I_1: Matrix = ((_H, _H), (Fraction(0), Fraction(1)))
ALPHA_0: Matrix = ((Fraction(0), Fraction(0)), (_H, -_H))
ALPHA_1: Matrix = ((_H, -_H), (Fraction(0), Fraction(0)))
BETA_0: Matrix = ((Fraction(0), Fraction(0)), (_H, _H))
BETA_1: Matrix = ((_H, _H), (Fraction(0), Fraction(0)))

IDENTITY_PART = {0: I_0, 1: I_1}
ALPHA = {0: ALPHA_0, 1: ALPHA_1}
BETA = {0: BETA_0, 1: BETA_1}


def _check_bit(bit: int):
    if bit not in (0, 1):
        raise DomainError(f"bit must be 0 or 1, got {bit}")


def _check_order(K: int):
    if K < 0:
        raise DomainError(f"jet order must be non-negative, got {K}")


# --- rational 2x2 helpers ---

def mat_mul(left: Matrix, right: Matrix) -> Matrix:
    return tuple(
        tuple(sum((left[r][k] * right[k][c] for k in range(2)), Fraction(0)) for c in range(2))
        for r in range(2)
    )


def mat_vec(m: Matrix, v: Tuple[Fraction, Fraction]) -> Tuple[Fraction, Fraction]:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def row_mat(v: Tuple[Fraction, Fraction], m: Matrix) -> Tuple[Fraction, Fraction]:
    return (v[0] * m[0][0] + v[1] * m[1][0], v[0] * m[0][1] + v[1] * m[1][1])


def mat_scale(m: Matrix, factor: Fraction) -> Matrix:
    return tuple(tuple(x * factor for x in row) for row in m)


def matrix_norm(m: Matrix) -> Fraction:
    """Maximum absolute row sum"""
    return max(sum((abs(x) for x in row), Fraction(0)) for row in m)


def matrix_relations_hold() -> bool:
    """Row-sum, kernel and absorption relations between I_j, alpha_j and beta_j"""
    ones = (Fraction(1), Fraction(1))
    for j in (0, 1):
        if mat_vec(IDENTITY_PART[j], ones) != ones:
            return False
        if mat_vec(ALPHA[j], ones) != (0, 0):
            return False
        for m in (IDENTITY_PART[j], ALPHA[j], BETA[j]):
            if matrix_norm(m) != 1:
                return False
        for i in (0, 1):
            if mat_mul(ALPHA[i], IDENTITY_PART[j]) != mat_scale(ALPHA[i], _H):
                return False
    return True


# --- numeric evaluation ---

def eval_charfn(a: int, theta):
    """hat mu_a at theta (scalar or array) in double precision"""
    bits = BitString.from_int(a).bits
    th = np.asarray(theta, dtype=np.float64)
    e_plus = np.exp(1j * th)
    e_minus = np.exp(-1j * th)
    half_plus, half_minus = 0.5 * e_plus, 0.5 * e_minus
    r0 = np.ones(th.shape, dtype=np.complex128)
    r1 = np.zeros(th.shape, dtype=np.complex128)
    for bit in bits:
        if bit:
            r0, r1 = r0 * half_plus, r0 * half_minus + r1
        else:
            r0, r1 = r0 + r1 * half_plus, r1 * half_minus
    result = r0 + r1 * e_plus / (2.0 - e_minus)
    return complex(result) if result.ndim == 0 else result


def eval_charfn_from_measure(rep: MeasureRep, theta):
    """sum_d e^{i d theta} mu(d): exact window plus the closed-form geometric tail"""
    th = np.asarray(theta, dtype=np.float64)
    start = tail_start(rep)
    tail_value = float(evaluate(rep, start))
    result = tail_value * np.exp(1j * start * th) / (1.0 - 0.5 * np.exp(-1j * th))
    for d, value in window(rep):
        if value:
            result = result + float(value) * np.exp(1j * d * th)
    result = np.asarray(result, dtype=np.complex128)
    return complex(result) if result.ndim == 0 else result


# --- jets ---

def t_matrix(bit: int, j: int) -> Tuple[Tuple[ComplexRational, ComplexRational],
                                        Tuple[ComplexRational, ComplexRational]]:
    """Coefficient of theta^j in A_bit(theta)"""
    _check_bit(bit)
    if j < 0:
        raise DomainError(f"coefficient index must be non-negative, got {j}")
    if j == 0:
        return tuple(tuple(ComplexRational(x) for x in row) for row in IDENTITY_PART[bit])
    m = j // 2
    sign = -1 if m % 2 else 1
    factor = Fraction(sign, math.factorial(j))
    if j % 2 == 0:
        return tuple(tuple(ComplexRational(x * factor) for x in row) for row in BETA[bit])
    return tuple(tuple(ComplexRational(0, x * factor) for x in row) for row in ALPHA[bit])


@lru_cache(maxsize=64)
def jet_matrix(bit: int, K: int) -> JetMatrix:
    _check_bit(bit)
    _check_order(K)
    one, zero = Jet.one(K), Jet.zero(K)
    half_plus = Jet.exp_i(K, 1).scale(_H)
    half_minus = Jet.exp_i(K, -1).scale(_H)
    if bit:
        return JetMatrix(((half_plus, half_minus), (zero, one)))
    return JetMatrix(((one, zero), (half_plus, half_minus)))


@lru_cache(maxsize=64)
def boundary_jet(K: int) -> JetRow:
    """(1, e^{i theta} / (2 - e^{-i theta})) as jets of order K"""
    _check_order(K)
    one = Jet.one(K)
    denominator = Jet.constant(2, K) - Jet.exp_i(K, -1)
    return one, Jet.exp_i(K, 1) / denominator


def charfn_jet(a: int, K: int) -> Jet:
    """Taylor jet of hat mu_a at theta = 0"""
    _check_order(K)
    row: JetRow = (Jet.one(K), Jet.zero(K))
    for bit in BitString.from_int(a).bits:
        row = jet_matrix(bit, K).row_times(row)
    b0, b1 = boundary_jet(K)
    return row[0] * b0 + row[1] * b1


def moments_via_jets(a: int, K: int) -> List[Fraction]:
    """m_0 .. m_K from hat mu_a(theta) = sum_k i^k m_k theta^k / k!"""
    jet = charfn_jet(a, K)
    moments = []
    for k in range(K + 1):
        # m_k = k! c_k / i^k = k! c_k (-i)^k
        value = jet[k] * ComplexRational.i_power(-k) * math.factorial(k)
        if value.imag:
            raise ConsistencyError(
                f"moment {k} of mu_{a} has imaginary residue {value.imag}"
            )
        moments.append(value.real)
    return moments


def renormalized_moments(a: int, n: int, K: int) -> List[float]:
    """2^{k/2} m_k / n^{k/2}"""
    if n <= 0:
        raise DomainError(f"renormalization length must be positive, got {n}")
    scale = 2.0 / n
    return [float(m) * scale ** (k / 2) for k, m in enumerate(moments_via_jets(a, K))]

