"""
Data models for digitdrift
"""
from dataclasses import dataclass, field, replace, asdict
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, NamedTuple, Optional, Tuple, Union


TOOL_VERSION = "0.1.0"

Number = Union[Fraction, float]


class DomainError(ValueError):
    """An operation was called outside its mathematical domain"""


class CylinderIntegrityError(Exception):
    """A word set contains two words where one is a suffix of the other"""


class ConsistencyError(ArithmeticError):
    """Two computation paths that must agree exactly did not"""


class PatternReading(Enum):
    """How "01" occurrences are counted in bin(a)"""
    LITERAL = "literal"
    LEADING_ZERO = "leading_zero"


@dataclass(frozen=True)
class BitString:
    """Binary expansion a_n...a_0, bits[0] = a_0"""
    value: int
    bits: Tuple[int, ...]

    @classmethod
    def from_int(cls, value: int) -> "BitString":
        if value < 0:
            raise DomainError(f"BitString requires a non-negative integer, got {value}")
        bits = tuple((value >> k) & 1 for k in range(value.bit_length()))
        return cls(value=value, bits=bits)

    @property
    def top_index(self) -> int:
        """n in the notation a_n...a_0 (-1 for the empty expansion)"""
        return len(self.bits) - 1

    @property
    def word(self) -> str:
        """Most significant bit first, no leading zeros"""
        return format(self.value, 'b') if self.value else ''

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class SignSequence:
    """b_j = (-1)^(a_j + 1): +1 at one-bits, -1 at zero-bits"""
    signs: Tuple[int, ...]

    @classmethod
    def from_bits(cls, bits: BitString) -> "SignSequence":
        return cls(signs=tuple(1 if bit else -1 for bit in bits.bits))

    def __len__(self) -> int:
        return len(self.signs)


@dataclass(frozen=True)
class MeasureRep:
    """
    Exact finite form of a measure on Z.

    mu(d) = delta_part[d] + sum_k mu1_part[k] * mu_1(d + k), where mu_1(t) = 2^(t-2) for t <= 1.
    The dicts are never mutated after construction.
    """
    delta_part: Dict[int, Fraction] = field(default_factory=dict)
    mu1_part: Dict[int, Fraction] = field(default_factory=dict)


@dataclass(frozen=True)
class MeasurePair:
    """(mu_b, mu_{b+1}) for the prefix b during construction"""
    lower: MeasureRep
    upper: MeasureRep


@dataclass(frozen=True)
class WordSet:
    """Suffix words whose cylinders partition E_{a,d}"""
    words: FrozenSet[str]
    a: int
    d: int

    @property
    def source(self) -> Tuple[int, int]:
        return (self.a, self.d)

    @property
    def max_length(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def sorted_words(self) -> List[str]:
        return sorted(self.words, key=lambda w: (len(w), w))


@dataclass(frozen=True)
class VarianceBreakdown:
    """The four terms of the closed-form variance"""
    leading: Fraction
    tail: Fraction
    correlation_sum: Fraction
    boundary_sum: Fraction

    @property
    def total(self) -> Fraction:
        return self.leading + self.tail + self.correlation_sum + self.boundary_sum


class BoundsCheck(NamedTuple):
    """l(a) - 1 <= Var(mu_a) <= 4 l(a) + 2"""
    lower: int
    value: Number
    upper: int
    ok: bool


@dataclass(frozen=True)
class CountingWindow:
    """Brute-force counts range over n < 2^M"""
    M: int

    def __post_init__(self):
        if not 0 <= self.M <= 30:
            raise DomainError(f"Counting window exponent must be in [0, 30], got {self.M}")

    @property
    def size(self) -> int:
        return 1 << self.M


@dataclass(frozen=True)
class ExperimentConfig:
    """Seeded description of a stochastic experiment"""
    seed: int = 2024
    p: Fraction = Fraction(1, 2)
    n: int = 1024
    samples: int = 1
    max_moment_order: int = 6
    lag_cap: int = 64

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0 <= self.p <= 1:
            raise DomainError(f"bit bias p must lie in [0, 1], got {self.p}")
        if self.n < 0:
            raise DomainError(f"bit length n must be non-negative, got {self.n}")
        if self.samples < 1:
            raise DomainError(f"samples must be positive, got {self.samples}")

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['p'] = str(self.p)
        return data


@dataclass(frozen=True)
class ResultRow:
    """One line of an experiment table"""
    n: int
    statistic: str
    value: float
    target: float
    deviation: float
    seed: int = 0
    sample: int = 0

    @classmethod
    def make(cls, n: int, statistic: str, value: float, target: float,
             seed: int = 0, sample: int = 0) -> "ResultRow":
        return cls(n=n, statistic=statistic, value=value, target=target,
                   deviation=abs(value - target), seed=seed, sample=sample)

    @property
    def sort_key(self) -> Tuple[int, str, int, int]:
        return (self.n, self.statistic, self.seed, self.sample)


@dataclass
class ExperimentResult:
    """Rows of an experiment plus the config echo and runtime"""
    name: str
    rows: List[ResultRow]
    metadata: Dict[str, Any] = field(default_factory=dict)

    def by_statistic(self, statistic: str) -> List[ResultRow]:
        return [row for row in self.rows if row.statistic == statistic]


@dataclass
class SeedOutcome:
    """Result of one seed in a multi-seed run"""
    seed: int
    success: bool
    result: Optional[ExperimentResult]
    run_time: float
    error_message: Optional[str] = None


@dataclass
class RunManifest:
    """Everything needed to reproduce one CLI invocation"""
    subcommand: str
    parameters: Dict[str, Any]
    seed: Optional[int]
    output_paths: List[str]
    wall_clock: float
    settings: Dict[str, Any] = field(default_factory=dict)
    tool_version: str = TOOL_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
