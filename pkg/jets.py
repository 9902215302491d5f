"""
Exact truncated power series (jets) over Q(i) and 2x2 matrices of jets.

A Jet of order K holds the coefficients of theta^0 .. theta^K; every ring
operation truncates at the smaller order of its operands.
"""
import math
from fractions import Fraction
from typing import Sequence, Tuple, Union

Rational = Union[int, Fraction]


def _frac(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class ComplexRational:
    """real + i * imag with Fraction parts"""
    __slots__ = ('real', 'imag')

    def __init__(self, real: Rational = 0, imag: Rational = 0):
        self.real = _frac(real)
        self.imag = _frac(imag)

    @classmethod
    def coerce(cls, value: Union["ComplexRational", Rational]) -> "ComplexRational":
        return value if isinstance(value, ComplexRational) else cls(value)

    def __add__(self, other):
        other = ComplexRational.coerce(other)
        return ComplexRational(self.real + other.real, self.imag + other.imag)

    __radd__ = __add__

    def __sub__(self, other):
        other = ComplexRational.coerce(other)
        return ComplexRational(self.real - other.real, self.imag - other.imag)

    def __rsub__(self, other):
        return ComplexRational.coerce(other) - self

    def __neg__(self):
        return ComplexRational(-self.real, -self.imag)

    def __mul__(self, other):
        if isinstance(other, ComplexRational):
            if not other.imag:
                return ComplexRational(self.real * other.real, self.imag * other.real)
            if not other.real:
                return ComplexRational(-self.imag * other.imag, self.real * other.imag)
            return ComplexRational(self.real * other.real - self.imag * other.imag,
                                   self.real * other.imag + self.imag * other.real)
        other = _frac(other)
        return ComplexRational(self.real * other, self.imag * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ComplexRational.coerce(other)
        norm = other.real * other.real + other.imag * other.imag
        if not norm:
            raise ZeroDivisionError("division by the complex zero")
        return self * ComplexRational(other.real / norm, -other.imag / norm)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ComplexRational(other)
        if not isinstance(other, ComplexRational):
            return NotImplemented
        return self.real == other.real and self.imag == other.imag

    def __hash__(self):
        return hash((self.real, self.imag))

    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __repr__(self):
        return f"ComplexRational({self.real}, {self.imag})"

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.real, -self.imag)

    @staticmethod
    def i_power(k: int) -> "ComplexRational":
        return _I_POWERS[k % 4]


_I_POWERS = (ComplexRational(1), ComplexRational(0, 1), ComplexRational(-1), ComplexRational(0, -1))
ZERO = ComplexRational(0)
ONE = ComplexRational(1)
I = ComplexRational(0, 1)


class Jet:
    """Truncated power series sum_{j<=K} c_j theta^j"""
    __slots__ = ('coefficients',)

    def __init__(self, coefficients: Sequence[Union[ComplexRational, Rational]]):
        if not coefficients:
            raise ValueError("a jet needs at least the constant coefficient")
        self.coefficients: Tuple[ComplexRational, ...] = tuple(
            ComplexRational.coerce(c) for c in coefficients
        )

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def constant(cls, value: Union[ComplexRational, Rational], order: int) -> "Jet":
        return cls([value] + [ZERO] * order)

    @classmethod
    def zero(cls, order: int) -> "Jet":
        return cls.constant(ZERO, order)

    @classmethod
    def one(cls, order: int) -> "Jet":
        return cls.constant(ONE, order)

    @classmethod
    def exp_i(cls, order: int, sign: int = 1) -> "Jet":
        """Series of exp(sign * i * theta)"""
        return cls([ComplexRational.i_power(sign * j % 4) * Fraction(1, math.factorial(j))
                    for j in range(order + 1)])

    def __getitem__(self, j: int) -> ComplexRational:
        return self.coefficients[j]

    def __len__(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def is_constant(self) -> bool:
        return not any(self.coefficients[1:])

    def truncate(self, order: int) -> "Jet":
        return Jet(self.coefficients[:order + 1])

    def __add__(self, other: "Jet") -> "Jet":
        k = min(self.order, other.order)
        return Jet([self[j] + other[j] for j in range(k + 1)])

    def __sub__(self, other: "Jet") -> "Jet":
        k = min(self.order, other.order)
        return Jet([self[j] - other[j] for j in range(k + 1)])

    def __neg__(self) -> "Jet":
        return Jet([-c for c in self.coefficients])

    def scale(self, factor: Union[ComplexRational, Rational]) -> "Jet":
        return Jet([c * factor for c in self.coefficients])

    def __mul__(self, other: Union["Jet", ComplexRational, Rational]) -> "Jet":
        if not isinstance(other, Jet):
            return self.scale(other)
        k = min(self.order, other.order)
        if other.is_constant():
            return self.truncate(k).scale(other[0])
        if self.is_constant():
            return other.truncate(k).scale(self[0])
        out = []
        for j in range(k + 1):
            acc = ZERO
            for i in range(j + 1):
                left, right = self[i], other[j - i]
                if left and right:
                    acc = acc + left * right
            out.append(acc)
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other: "Jet") -> "Jet":
        """Series division; the divisor's constant term must be non-zero"""
        if not other[0]:
            raise ZeroDivisionError("jet division needs a non-zero constant term")
        k = min(self.order, other.order)
        quotient = []
        for j in range(k + 1):
            acc = self[j]
            for i in range(1, j + 1):
                acc = acc - other[i] * quotient[j - i]
            quotient.append(acc / other[0])
        return Jet(quotient)

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"Jet({list(self.coefficients)!r})"


JetRow = Tuple[Jet, Jet]


def _dot(x: Jet, m: Jet, y: Jet, n: Jet) -> Jet:
    """x*m + y*n, skipping products with a zero jet"""
    terms = [u * v for u, v in ((x, m), (y, n)) if not (u.is_zero() or v.is_zero())]
    if not terms:
        return Jet.zero(min(x.order, m.order, y.order, n.order))
    return terms[0] if len(terms) == 1 else terms[0] + terms[1]


class JetMatrix:
    """2x2 matrix with Jet entries"""
    __slots__ = ('entries',)

    def __init__(self, entries: Tuple[Tuple[Jet, Jet], Tuple[Jet, Jet]]):
        self.entries = (tuple(entries[0]), tuple(entries[1]))

    @property
    def order(self) -> int:
        return min(e.order for row in self.entries for e in row)

    def __matmul__(self, other: "JetMatrix") -> "JetMatrix":
        (a, b), (c, d) = self.entries
        (e, f), (g, h) = other.entries
        return JetMatrix(((_dot(a, e, b, g), _dot(a, f, b, h)),
                          (_dot(c, e, d, g), _dot(c, f, d, h))))

    def row_times(self, row: JetRow) -> JetRow:
        """(r0, r1) . M"""
        (a, b), (c, d) = self.entries
        r0, r1 = row
        return _dot(r0, a, r1, c), _dot(r0, b, r1, d)

    def coefficient(self, j: int) -> Tuple[Tuple[ComplexRational, ComplexRational],
                                           Tuple[ComplexRational, ComplexRational]]:
        """The constant 2x2 matrix multiplying theta^j"""
        return tuple(tuple(e[j] for e in row) for row in self.entries)
