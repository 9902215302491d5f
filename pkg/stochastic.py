"""
Seeded Bernoulli experiments on a_X(n) = sum_{k<=n} X_k 2^k

Bits come from numpy's Generator(PCG64(seed)): X_k = 1 iff U_k < p with
U_k uniform on [0, 1). Sample s of a run is row s of one
(samples, n + 1) draw, so sample 0 equals gen_bits(config).
"""
import math
from fractions import Fraction
from statistics import NormalDist
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from bitcore import assemble
from charfn import moments_via_jets, renormalized_moments
from experiment_interface import Experiment, geometric_ladder
from measure import build_measure, build_measures_upto, cdf, cusick_c
from models import DomainError, ExperimentConfig, ExperimentResult, ResultRow, SignSequence
from variance_formula import variance_float

CORRELATION_EXPONENT = 0.6
CUSICK_BAND = (0.5, 0.6)
MAX_CLT_ORDER = 12
DEFAULT_GRID = tuple(np.linspace(-4.0, 4.0, 41).tolist())


def _generator(config: ExperimentConfig) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(config.seed))


def gen_bits(config: ExperimentConfig) -> np.ndarray:
    """X_0 .. X_n as a uint8 array"""
    return (_generator(config).random(config.n + 1) < float(config.p)).astype(np.uint8)


def gen_bit_samples(config: ExperimentConfig) -> np.ndarray:
    """One row of n + 1 bits per sample"""
    draws = _generator(config).random((config.samples, config.n + 1))
    return (draws < float(config.p)).astype(np.uint8)


def _sign_array(signs: Union[SignSequence, Sequence[int], np.ndarray]) -> np.ndarray:
    if isinstance(signs, SignSequence):
        signs = signs.signs
    return np.asarray(signs, dtype=np.int64)


def correlation_C2(signs: Union[SignSequence, Sequence[int], np.ndarray]) -> int:
    """
    max over lags g >= 1 and windows of |sum b_k b_{k+g}|.

    For a fixed lag the best window is the spread max - min of the prefix
    sums of the lagged products (the empty prefix included).
    """
    b = _sign_array(signs)
    if b.size < 3:
        raise DomainError(f"correlation needs a sequence of length >= 3, got {b.size}")
    best = 0
    for g in range(1, b.size):
        prefix = np.cumsum(b[g:] * b[:-g])
        spread = max(int(prefix.max()), 0) - min(int(prefix.min()), 0)
        best = max(best, spread)
    return best


def gaussian_moment(k: int) -> int:
    """(2j)! / (2^j j!) for k = 2j, zero for odd k"""
    if k % 2:
        return 0
    j = k // 2
    return math.factorial(k) // (2 ** j * math.factorial(j))


def cusick_scan(max_a: int) -> Tuple[Fraction, int]:
    """Smallest exact c_a over 1 <= a < max_a and the first a attaining it"""
    if max_a < 2:
        raise DomainError(f"cusick_scan needs max_a >= 2, got {max_a}")
    table = build_measures_upto(max_a)
    best, witness = None, 0
    for a in range(1, max_a):
        value = cusick_c(table[a])
        if best is None or value < best:
            best, witness = value, a
    return best, witness


class GenericVariance(Experiment):
    """Var(mu_{a_X(m)}) / m along a geometric ladder of prefix lengths m"""

    name = "variance"

    def __init__(self, lag_cap: int = 64):
        super().__init__()
        self.lag_cap = lag_cap

    def parameters(self) -> Dict[str, Any]:
        return {'lag_cap': self.lag_cap}

    def _collect_rows(self, config: ExperimentConfig) -> List[ResultRow]:
        limit = float(2 * config.p * (1 - config.p))
        rows = []
        for sample, bits in enumerate(gen_bit_samples(config)):
            for m in geometric_ladder(config.n):
                var = variance_float(bits[:m + 1], lag_cap=self.lag_cap)
                self.logger.debug(f"sample {sample}, n={m}: Var={var:.6g}")
                rows.append(ResultRow.make(m, "var_over_n", var / m, limit, config.seed, sample))
                rows.append(ResultRow.make(m, "two_var_over_n", 2 * var / m, 2 * limit, config.seed, sample))
        return rows


class CltMoments(Experiment):
    """Renormalized moments 2^{k/2} m_k / n^{k/2} of mu_{a_X(n)}"""

    name = "clt"

    def _collect_rows(self, config: ExperimentConfig) -> List[ResultRow]:
        K = config.max_moment_order
        if not 0 <= K <= MAX_CLT_ORDER:
            raise DomainError(f"max moment order must lie in [0, {MAX_CLT_ORDER}], got {K}")
        if config.n < 1:
            raise DomainError("renormalized moments need n >= 1")
        rows = []
        for sample, bits in enumerate(gen_bit_samples(config)):
            a = assemble(bits, config.n)
            for k, value in enumerate(renormalized_moments(a, config.n, K)):
                rows.append(ResultRow.make(config.n, f"m{k}", value, float(gaussian_moment(k)),
                                           config.seed, sample))
        return rows


class Cdf(Experiment):
    """Exact CDF of mu_{a_X(n)} at x sqrt(n/2) against the standard normal"""

    name = "cdf"

    def __init__(self, grid: Optional[Sequence[float]] = None):
        super().__init__()
        self.grid = list(grid) if grid is not None else list(DEFAULT_GRID)
        self.normal = NormalDist()

    def parameters(self) -> Dict[str, Any]:
        return {'grid': self.grid}

    def _collect_rows(self, config: ExperimentConfig) -> List[ResultRow]:
        if config.n < 1:
            raise DomainError("the rescaled CDF needs n >= 1")
        scale = math.sqrt(config.n / 2)
        rows = []
        for sample, bits in enumerate(gen_bit_samples(config)):
            rep = build_measure(assemble(bits, config.n))
            sup = 0.0
            for x in self.grid:
                value = float(cdf(rep, x * scale))
                target = self.normal.cdf(x)
                sup = max(sup, abs(value - target))
                rows.append(ResultRow.make(config.n, f"cdf[x={x:+.4f}]", value, target,
                                           config.seed, sample))
            rows.append(ResultRow.make(config.n, "sup_distance", sup, 0.0, config.seed, sample))
        return rows


class Correlation(Experiment):
    """C_{2,n} of the sign sequence against n^exponent"""

    name = "corr"

    def __init__(self, exponent: float = CORRELATION_EXPONENT):
        super().__init__()
        self.exponent = exponent

    def parameters(self) -> Dict[str, Any]:
        return {'exponent': self.exponent}

    def _collect_rows(self, config: ExperimentConfig) -> List[ResultRow]:
        bound = float(config.n) ** self.exponent
        rows = []
        for sample, bits in enumerate(gen_bit_samples(config)):
            value = correlation_C2(2 * bits.astype(np.int64) - 1)
            if value > bound:
                self.logger.info(f"seed {config.seed} sample {sample}: C2={value} exceeds n^{self.exponent}={bound:.1f}")
            rows.append(ResultRow.make(config.n, "C2", float(value), bound, config.seed, sample))
        return rows


class MomentGrowth(Experiment):
    """max |m_k(a)| / n^{floor(k/2)} over random a of bit length n"""

    name = "growth"

    def __init__(self, ns: Sequence[int] = (64, 128, 256, 512)):
        super().__init__()
        self.ns = list(ns)

    def parameters(self) -> Dict[str, Any]:
        return {'ns': self.ns}

    def _collect_rows(self, config: ExperimentConfig) -> List[ResultRow]:
        K = config.max_moment_order
        rows = []
        for n in self.ns:
            peaks = [0.0] * (K + 1)
            for bits in gen_bit_samples(ExperimentConfig(seed=config.seed, p=config.p, n=n,
                                                         samples=config.samples)):
                bits[n] = 1
                for k, m in enumerate(moments_via_jets(assemble(bits, n), K)):
                    peaks[k] = max(peaks[k], abs(float(m)) / n ** (k // 2))
            for k, peak in enumerate(peaks):
                # m_{2j} / n^j tends to (2j)! / (4^j j!)
                target = gaussian_moment(k) / 2 ** (k // 2) if k % 2 == 0 else 0.0
                rows.append(ResultRow.make(n, f"m{k}_growth", peak, float(target), config.seed))
        return rows


class CusickSample(Experiment):
    """Exact c_a for seeded random a with n + 1 bits"""

    name = "cusick"

    def _collect_rows(self, config: ExperimentConfig) -> List[ResultRow]:
        rows = []
        for sample, bits in enumerate(gen_bit_samples(config)):
            value = float(cusick_c(build_measure(assemble(bits, config.n))))
            low, high = CUSICK_BAND
            if not low <= value <= high:
                self.logger.info(f"seed {config.seed} sample {sample}: c_a={value:.6f} outside [{low}, {high}]")
            rows.append(ResultRow.make(config.n, "c_a", value, 0.5, config.seed, sample))
        return rows


EXPERIMENTS = {
    GenericVariance.name: GenericVariance,
    CltMoments.name: CltMoments,
    Cdf.name: Cdf,
    Correlation.name: Correlation,
    MomentGrowth.name: MomentGrowth,
    CusickSample.name: CusickSample,
}


def create_experiment(name: str, **kwargs) -> Experiment:
    """
    Factory function to create an experiment by name

    Args:
        name: one of EXPERIMENTS
        **kwargs: constructor arguments (grid, lag_cap, ns)

    Returns:
        Experiment instance
    """
    try:
        cls = EXPERIMENTS[name]
    except KeyError:
        raise ValueError(f"Unsupported experiment: {name}")
    return cls(**kwargs)


def generic_variance_experiment(config: ExperimentConfig) -> ExperimentResult:
    return GenericVariance(lag_cap=config.lag_cap).run(config)


def clt_moments_experiment(config: ExperimentConfig) -> ExperimentResult:
    return CltMoments().run(config)


def cdf_experiment(config: ExperimentConfig, grid: Sequence[float] = DEFAULT_GRID) -> ExperimentResult:
    return Cdf(grid).run(config)


def correlation_experiment(config: ExperimentConfig,
                           exponent: float = CORRELATION_EXPONENT) -> ExperimentResult:
    return Correlation(exponent).run(config)


def moment_growth_experiment(config: ExperimentConfig,
                             ns: Sequence[int] = (64, 128, 256, 512)) -> ExperimentResult:
    return MomentGrowth(ns).run(config)


def cusick_sample_experiment(config: ExperimentConfig) -> ExperimentResult:
    return CusickSample().run(config)
