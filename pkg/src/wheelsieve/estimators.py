"""Mertens-type products, singular-series constants and Hardy-Littlewood style estimates.

All truncated products run over primes 5 <= p <= cutoff taken from the wheel
sieve, and are accumulated as compensated sums of logarithms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import counting
from .wheel import primes_upto

EULER_GAMMA = float(np.euler_gamma)
TWIN_CONSTANT = 0.66016181584686957


class Mode(enum.Enum):
    SUM = "sum"
    INTEGRAL = "integral"


class Constant(enum.Enum):
    C12 = "C12"
    C14 = "C14"
    C24 = "C24"


class EtaMode(enum.Enum):
    GAP = "gap"
    SUM = "sum"


class EstimateTask(enum.Enum):
    TWIN_VIA_CLASSES = "twin-classes"
    TWIN_VIA_HL = "twin-hl"
    GAP_HL = "gap-hl"
    SUM_HL = "sum-hl"
    QUAD_VIA_CLASSES = "quad-classes"
    QUAD_VIA_TWINS = "quad-twins"
    TWIN_SUM = "twin-sum"


class DensityKind(enum.Enum):
    ASYMPTOTIC = "asymptotic"
    SCHNIRELMANN = "schnirelmann"


@dataclass(frozen=True)
class EstimatorParams:
    gamma: float = EULER_GAMMA
    twin_constant: float = TWIN_CONSTANT
    mode: Mode = Mode.SUM
    cutoff: int | None = None

    def __post_init__(self):
        if self.cutoff is not None and self.cutoff < 5:
            raise ValueError("cutoff must be >= 5")
        if not 0.66 < self.twin_constant <= 0.6602:
            raise ValueError("twin_constant out of range (0.66, 0.6602]")


DEFAULT = EstimatorParams()


@dataclass(frozen=True)
class BoundReport:
    m: int
    lower: float
    empirical: int

    @property
    def satisfied(self) -> bool:
        return self.empirical > self.lower


def _log_product(factors: np.ndarray) -> float:
    return math.fsum(np.log(factors).tolist())


def _primes(x: float) -> np.ndarray:
    return primes_upto(int(x)).astype(np.float64)


def mertens_product(k: int, x: int) -> float:
    """prod over primes 5 <= p <= x of (1 - k/p)."""
    if k not in (1, 2, 4):
        raise ValueError("k must be 1, 2 or 4")
    if x < 5:
        raise ValueError("x must be >= 5")
    return math.exp(_log_product(1.0 - k / _primes(x)))


def constant_C(kind: Constant | str, cutoff: int) -> float:
    """Truncated product over primes 5 <= p <= cutoff.

    C12: p(p-2)/(p-1)^2    C14: (p-4)p^3/(p-1)^4    C24: (p-4)p/(p-2)^2
    """
    kind = Constant(kind)
    if cutoff < 5:
        raise ValueError("cutoff must be >= 5")
    p = _primes(cutoff)
    if kind is Constant.C12:
        f = p * (p - 2) / (p - 1) ** 2
    elif kind is Constant.C14:
        f = (p - 4) * p**3 / (p - 1) ** 4
    else:
        f = (p - 4) * p / (p - 2) ** 2
    return math.exp(_log_product(f))


def bound_H(m: int, params: EstimatorParams = DEFAULT) -> float:
    """m * H_m = m e^{2 gamma} prod_{5<=p<=6m} (1 - 2/p)."""
    return m * math.exp(2 * params.gamma) * mertens_product(2, 6 * m)


def bound_Q(m: int, params: EstimatorParams = DEFAULT) -> float:
    """m * Q_m = m e^{4 gamma} prod_{5<=p<=6m} (1 - 4/p)."""
    return m * math.exp(4 * params.gamma) * mertens_product(4, 6 * m)


def bound_Qprime(m: int, params: EstimatorParams = DEFAULT) -> float:
    """m * Q'_m = mu4(6m) * m * Q_m."""
    return mu4(6 * m, params.mode) * bound_Q(m, params)


def _series(k: int, m_max: int) -> np.ndarray:
    # prod_{5<=p<=6m}(1 - k/p) for m = 1..m_max
    p = _primes(6 * m_max)
    logs = np.concatenate([[0.0], np.cumsum(np.log1p(-k / p))])
    upto = np.searchsorted(p, 6 * np.arange(1, m_max + 1), side="right")
    return np.exp(logs[upto])


def bound_H_series(m_max: int, params: EstimatorParams = DEFAULT) -> np.ndarray:
    m = np.arange(1, m_max + 1)
    return m * math.exp(2 * params.gamma) * _series(2, m_max)


def bound_Q_series(m_max: int, params: EstimatorParams = DEFAULT) -> np.ndarray:
    m = np.arange(1, m_max + 1)
    return m * math.exp(4 * params.gamma) * _series(4, m_max)


def check_bound(kind: str, m: int, params: EstimatorParams = DEFAULT) -> BoundReport:
    """Compare the lower-bound function ``kind`` (H, Q or Qprime) with its count."""
    if kind == "H":
        return BoundReport(m, bound_H(m, params), counting.pi_twin(6 * m))
    if kind == "Q":
        return BoundReport(m, bound_Q(m, params), counting.pi_quad(1, m))
    if kind == "Qprime":
        return BoundReport(m, bound_Qprime(m, params), counting.twin_sum_reps(m))
    raise ValueError(f"unknown bound {kind!r}")


def qprime_threshold(m_max: int, params: EstimatorParams = DEFAULT) -> int | None:
    """Smallest m0 with m * Q'_m > 1 for every m0 <= m <= m_max."""
    q = bound_Q_series(m_max, params)
    for m in range(m_max, 0, -1):
        if mu4(6 * m, params.mode) * q[m - 1] <= 1:
            return m + 1 if m < m_max else None
    return 1


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def eta2(g: int, mode: EtaMode | str = EtaMode.GAP) -> float:
    """kappa * prod over prime divisors d >= 5 of g of (d-1)/(d-2).

    kappa is 2 (gap) or 1 (sum) when 3 | g, and 1 (gap) or 1/2 (sum) otherwise.
    """
    mode = EtaMode(mode)
    if g < 2 or g % 2:
        raise ValueError("g must be even and >= 2")
    if mode is EtaMode.GAP:
        kappa = 2.0 if g % 3 == 0 else 1.0
    else:
        kappa = 1.0 if g % 3 == 0 else 0.5
    out = kappa
    for d in _prime_divisors(g):
        if d >= 5:
            out *= (d - 1) / (d - 2)
    return out


def eta4(m_shift: int) -> float:
    if m_shift < 1:
        raise ValueError("shift must be >= 1")
    out = 1.0
    for d in _prime_divisors(m_shift):
        if d >= 5:
            out *= (d - 2) / (d - 4)
    return out


def _mu(n: int, power: int, mode: Mode) -> float:
    if n < 6:
        raise ValueError("mu needs n >= 6")
    if Mode(mode) is Mode.SUM:
        t = np.arange(2, n - 1, dtype=np.float64)
        lt, lnt = np.log(t), np.log(n - t)
        num = math.fsum((1.0 / (lt * lnt) ** power).tolist())
        den = math.fsum((1.0 / lt ** (2 * power)).tolist())
        return num / den
    num = _quad(lambda t: 1.0 / (math.log(t) * math.log(n - t)) ** power, 2, n - 2)
    den = _quad(lambda t: 1.0 / math.log(t) ** (2 * power), 2, n - 2)
    return num / den


def _quad(f, a: float, b: float) -> float:
    if b <= a:
        return 0.0
    # split keeps the adaptive rule accurate on long ranges
    edges = np.unique(np.concatenate([np.geomspace(a, b, 24), [b]]))
    return math.fsum(
        integrate.quad(f, lo, hi, limit=200)[0] for lo, hi in zip(edges[:-1], edges[1:])
    )


def mu2(n: int, mode: Mode | str = Mode.SUM) -> float:
    """sum_{t=2}^{n-2} 1/(log t log(n-t))  /  sum_{t=2}^{n-2} 1/(log t)^2."""
    return _mu(n, 1, Mode(mode))


def mu4(n: int, mode: Mode | str = Mode.SUM) -> float:
    """Same ratio with both logarithms squared."""
    return _mu(n, 2, Mode(mode))


def hl_gap_tail(g: int, n: int, mode: Mode = Mode.SUM) -> float:
    """Integral (or integer sum) of 1/(log t log(t + g)) for t in [2, n]."""
    if mode is Mode.SUM:
        t = np.arange(2, n + 1, dtype=np.float64)
        return math.fsum((1.0 / (np.log(t) * np.log(t + g))).tolist())
    return _quad(lambda t: 1.0 / (math.log(t) * math.log(t + g)), 2, n)


def hl_sum_tail(n: int, mode: Mode = Mode.SUM) -> float:
    """Integral (or integer sum) of 1/(log t log(n - t)) for t in [2, n - 2]."""
    if mode is Mode.SUM:
        t = np.arange(2, n - 1, dtype=np.float64)
        return math.fsum((1.0 / (np.log(t) * np.log(n - t))).tolist())
    return _quad(lambda t: 1.0 / (math.log(t) * math.log(n - t)), 2, n - 2)


def class_ratios(m: int) -> tuple[float, float]:
    """(f_a(m), f_b(m)) with m f prod_{5<=p<=6m}(1 - 1/p) equal to the class counts."""
    pa, pb = counting.prime_class_counts(m)
    base = m * mertens_product(1, 6 * m)
    return pa / base, pb / base


def estimate(task: EstimateTask | str, params: EstimatorParams = DEFAULT, **kw) -> float:
    """Evaluate one estimator.

    ``m`` selects the point 6m for the class and quadruplet forms, ``n`` the
    range for the Hardy-Littlewood forms, ``g`` the difference or even number.
    Empirical inputs come from the sieve unless passed explicitly.
    """
    task = EstimateTask(task)
    c2 = params.twin_constant
    if task is EstimateTask.TWIN_VIA_CLASSES:
        m = kw["m"]
        pa, pb = kw.get("pa"), kw.get("pb")
        if pa is None:
            pa, pb = counting.prime_class_counts(m)
        cut = params.cutoff or 6 * m
        return constant_C(Constant.C12, cut) * pa * pb / m
    if task is EstimateTask.TWIN_VIA_HL:
        n = kw["n"]
        pi_n = kw.get("pi_n", None)
        if pi_n is None:
            pi_n = counting.prime_pi(n)
        return 2 * n * c2 * (pi_n / n) ** 2
    if task is EstimateTask.GAP_HL:
        g, n = kw["g"], kw["n"]
        return eta2(g, EtaMode.GAP) * 2 * c2 * hl_gap_tail(g, n, params.mode)
    if task is EstimateTask.SUM_HL:
        g = kw["g"]
        n = kw.get("n", g)
        return eta2(g, EtaMode.SUM) * 2 * c2 * hl_sum_tail(n, params.mode)
    if task is EstimateTask.QUAD_VIA_CLASSES:
        m = kw["m"]
        pa, pb = kw.get("pa"), kw.get("pb")
        if pa is None:
            pa, pb = counting.prime_class_counts(m)
        cut = params.cutoff or 6 * m
        return constant_C(Constant.C14, cut) * m * (pa * pb / m**2) ** 2
    if task is EstimateTask.QUAD_VIA_TWINS:
        m = kw["m"]
        pi2 = kw.get("pi2")
        if pi2 is None:
            pi2 = counting.pi_twin(6 * m)
        cut = params.cutoff or 6 * m
        return constant_C(Constant.C24, cut) * m * (pi2 / m) ** 2
    # twin-sum representations of the triple around 6m
    m = kw["m"]
    pa, pb = kw.get("pa"), kw.get("pb")
    if pa is None:
        pa, pb = counting.prime_class_counts(m)
    pi_6m = pa + pb + 2
    cut = params.cutoff or 6 * m
    scale = mu4(6 * m, params.mode) * constant_C(Constant.C14, cut) / eta4(m)
    return m * scale * (pi_6m / m) ** 4


def theorem3_sequence(m_values: list[int]) -> list[float]:
    """I_m = m prod_{5<=p<=6m}(1 - 4/p) for each m."""
    if list(m_values) != sorted(m_values):
        raise ValueError("m values must be ascending")
    return [m * mertens_product(4, 6 * m) for m in m_values]


def prefix_density(members: np.ndarray, n: int, kind: DensityKind | str) -> float:
    """Density of a set of positive integers from its first ``n`` memberships.

    ``members[k - 1]`` says whether k belongs to the set. Asymptotic gives
    |S(n)|/n at the single point n; Schnirelmann gives min over k <= n.
    """
    kind = DensityKind(kind)
    if n < 1:
        raise ValueError("n must be >= 1")
    flags = np.zeros(n, dtype=bool)
    have = np.asarray(members, dtype=bool)[:n]
    flags[: have.size] = have
    if kind is DensityKind.ASYMPTOTIC:
        return float(flags.sum()) / n
    ratio = np.cumsum(flags) / np.arange(1, n + 1)
    return float(ratio.min())
