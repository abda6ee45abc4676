"""Counts of additive prime configurations built from segment combinations.

Even numbers split into three classes by residue mod 6::

    G1: g = 6m - 2     G2: g = 6m     G3: g = 6m + 2

and each class has one fixed shape as a difference (or sum) of wheel members,
which turns every count into a popcount of two aligned segments.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .segments import Direction, combine, count_nonzero, make_segment
from .wheel import WheelMasks, masks_for


class GClass(enum.Enum):
    G1 = 1
    G2 = 2
    G3 = 3


@dataclass(frozen=True)
class EvenClass:
    g: int
    cls: GClass
    m: int

    @classmethod
    def of(cls, g: int) -> "EvenClass":
        if g < 2 or g % 2:
            raise ValueError(f"expected an even number >= 2, got {g}")
        r = g % 6
        if r == 4:
            return cls(g, GClass.G1, (g + 2) // 6)
        if r == 0:
            return cls(g, GClass.G2, g // 6)
        return cls(g, GClass.G3, (g - 2) // 6)


class Task(enum.Enum):
    GAP = "gap"
    SUM = "sum"
    TWIN = "twins"
    QUAD = "quad"
    TWIN_SUM = "twin-sum"


@dataclass(frozen=True)
class CountReport:
    task: Task
    g_or_shift: int | None
    n_or_m: int
    cls: str
    empirical: float
    estimate: float | None
    lower_bound: float | None

    @property
    def deviation(self) -> float | None:
        if self.estimate is None:
            return None
        return float(self.empirical) - self.estimate

    def as_dict(self) -> dict:
        return {
            "task": self.task.value,
            "g_or_shift": self.g_or_shift,
            "n_or_m": self.n_or_m,
            "class": self.cls,
            "empirical": self.empirical,
            "estimate": self.estimate,
            "lower_bound": self.lower_bound,
            "deviation": self.deviation,
        }


def _masks(m: int, masks: WheelMasks | None) -> WheelMasks:
    if masks is None:
        return masks_for(m)
    if masks.m < m:
        raise ValueError(f"masks cover indices up to {masks.m}, need {m}")
    return masks


def _m_of(n: int) -> int:
    if n < 0 or n % 6:
        raise ValueError(f"n must be a non-negative multiple of 6, got {n}")
    return n // 6


def prime_class_counts(m: int, masks: WheelMasks | None = None) -> tuple[int, int]:
    """(pi_a(6m), pi_b(6m)): primes 6i-1 and 6i+1 with i <= m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    mk = _masks(m, masks)
    return (
        count_nonzero(make_segment(mk.L, m)),
        count_nonzero(make_segment(mk.R, m)),
    )


def prime_pi(n: int, masks: WheelMasks | None = None) -> int:
    """Ordinary pi(n), all primes including 2 and 3."""
    if n < 5:
        return sum(1 for p in (2, 3) if p <= n)
    ma, mb = (n + 1) // 6, (n - 1) // 6
    mk = _masks(max(ma, mb, 1), masks)
    a = count_nonzero(make_segment(mk.L, ma))
    b = count_nonzero(make_segment(mk.R, mb))
    return 2 + a + b


def pi_twin(n: int, masks: WheelMasks | None = None) -> int:
    """Twin pairs (p, p + 2), 5 <= p <= n.

    For n = 6m this is the nonzero count of T over 1..m.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    m = (n + 1) // 6
    if m == 0:
        return 0
    return count_nonzero(make_segment(_masks(m, masks).T, m))


def twin_series(m_max: int, masks: WheelMasks | None = None) -> np.ndarray:
    """pi_twin(6m) for m = 1..m_max."""
    return np.cumsum(make_segment(_masks(m_max, masks).T, m_max).to_bool())


def _gap_parts(ec: EvenClass, mk: WheelMasks):
    if ec.cls is GClass.G1:
        return [(mk.L, mk.R)]
    if ec.cls is GClass.G2:
        return [(mk.L, mk.L), (mk.R, mk.R)]
    return [(mk.R, mk.L)]


def _gap_combined(ec: EvenClass, m: int, mk: WheelMasks):
    return [
        combine(make_segment(hi, m, shift=ec.m), make_segment(lo, m))
        for hi, lo in _gap_parts(ec, mk)
    ]


def pi_gap(g: int, n: int, masks: WheelMasks | None = None) -> int:
    """Raw construction count for pairs (p, p + g) with p <= n = 6m.

    Exact for g = 6m' + 2. For the other two classes it may exceed the true
    count by one, when the pair (6m + 1, 6m + 1 + g) is prime: see
    :func:`gap_slack`.
    """
    ec = EvenClass.of(g)
    m = _m_of(n)
    if m == 0:
        return 0
    mk = _masks(m + ec.m, masks)
    return sum(count_nonzero(c) for c in _gap_combined(ec, m, mk))


def gap_slack(g: int, n: int, masks: WheelMasks | None = None) -> int:
    """1 when the construction counts the out-of-range pair b_m, b_m + g."""
    ec = EvenClass.of(g)
    m = _m_of(n)
    if m == 0 or ec.cls is GClass.G3:
        return 0
    mk = _masks(m + ec.m, masks)
    upper = mk.L if ec.cls is GClass.G1 else mk.R
    return int(mk.R[m] and upper[m + ec.m])


def pi_gap_corrected(g: int, n: int, masks: WheelMasks | None = None) -> int:
    """True number of p <= n with p, p + g prime (p >= 5)."""
    return pi_gap(g, n, masks) - gap_slack(g, n, masks)


def pi_gap_series(g: int, m_max: int, masks: WheelMasks | None = None) -> np.ndarray:
    """Raw construction counts pi_gap(g, 6m) for m = 1..m_max."""
    ec = EvenClass.of(g)
    mk = _masks(m_max + ec.m, masks)
    total = np.zeros(m_max, dtype=np.int64)
    for c in _gap_combined(ec, m_max, mk):
        total += np.cumsum(c.to_bool())
    return total


def _sum_combined(ec: EvenClass, mk: WheelMasks):
    k = ec.m - 1
    first, second = {
        GClass.G1: (mk.L, mk.L),
        GClass.G2: (mk.L, mk.R),
        GClass.G3: (mk.R, mk.R),
    }[ec.cls]
    return combine(
        make_segment(first, k), make_segment(second, k, Direction.REVERSE)
    )


def pi_sum(g: int, masks: WheelMasks | None = None) -> Fraction:
    """Construction value for representations g = p + q (a multiple of 1/2).

    Same-class sums (g = 6m -/+ 2) count each unordered pair twice and are
    halved, so a lone diagonal p + p contributes only 1/2.
    """
    if g < 10 or g % 2:
        raise ValueError(f"g must be even and >= 10, got {g}")
    ec = EvenClass.of(g)
    c = count_nonzero(_sum_combined(ec, _masks(ec.m, masks)))
    return Fraction(c) if ec.cls is GClass.G2 else Fraction(c, 2)


def pi_sum_corrected(g: int, masks: WheelMasks | None = None) -> int:
    """True count of unordered g = p + q, p <= q, p and q prime >= 5."""
    raw = pi_sum(g, masks)
    ec = EvenClass.of(g)
    if ec.cls is not GClass.G2 and _is_wheel_prime(g // 2, _masks(ec.m, masks)):
        raw += Fraction(1, 2)
    if raw.denominator != 1:
        raise AssertionError(f"uncorrectable half count for g={g}")
    return int(raw)


def _is_wheel_prime(x: int, mk: WheelMasks) -> bool:
    if x % 6 == 5:
        return mk.L[(x + 1) // 6]
    if x % 6 == 1 and x > 1:
        return mk.R[(x - 1) // 6]
    return False


def pi_quad(m_shift: int, m: int, masks: WheelMasks | None = None) -> int:
    """Twin pairs at centre 6i (i <= m) with another twin pair at 6(i + m_shift).

    ``m_shift = 1`` counts prime quadruplets (p, p+2, p+6, p+8).
    """
    if m_shift < 1:
        raise ValueError("shift must be >= 1")
    if m == 0:
        return 0
    T = _masks(m + m_shift, masks).T
    return count_nonzero(combine(make_segment(T, m, shift=m_shift), make_segment(T, m)))


def quad_series(m_max: int, m_shift: int = 1, masks: WheelMasks | None = None) -> np.ndarray:
    """pi_quad(m_shift, m) for m = 1..m_max."""
    T = _masks(m_max + m_shift, masks).T
    c = combine(make_segment(T, m_max, shift=m_shift), make_segment(T, m_max))
    return np.cumsum(c.to_bool())


def twin_sum_reps(m: int, masks: WheelMasks | None = None) -> int:
    """Unordered index pairs {i, m - i}, both twin centres.

    One pair is one representation of the whole triple 6m - 2, 6m, 6m + 2 as a
    sum of two twin-pair members.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return 0
    mk = _masks(m, masks)
    k = m - 1
    ordered = count_nonzero(
        combine(make_segment(mk.T, k), make_segment(mk.T, k, Direction.REVERSE))
    )
    diagonal = int(m % 2 == 0 and mk.T[m // 2])
    return (ordered + diagonal) // 2


def twin_sum_table(m_max: int, masks: WheelMasks | None = None) -> np.ndarray:
    """``table[m] = twin_sum_reps(m)`` for 0 <= m <= m_max, all at once.

    Self-convolution of the twin indicator (FFT, rounded to integers) gives
    ordered pair counts for every m; counts stay far below the float64
    integer limit for any size this accepts.
    """
    if m_max > 10**7:
        raise ValueError("twin-sum tables are limited to m_max <= 10**7")
    t = np.zeros(m_max + 1)
    t[1:] = make_segment(_masks(m_max, masks).T, m_max).to_bool()
    size = 1
    while size < 2 * t.size:
        size *= 2
    ft = np.fft.rfft(t, size)
    ordered = np.rint(np.fft.irfft(ft * ft, size)[: m_max + 1]).astype(np.int64)
    diagonal = np.zeros(m_max + 1, dtype=np.int64)
    half = np.arange(0, m_max + 1, 2)
    diagonal[half] = t[half // 2].astype(np.int64)
    return (ordered + diagonal) // 2


def scan_exceptions(m_max: int, masks: WheelMasks | None = None) -> list[int]:
    """All 1 <= m <= m_max with no twin-sum representation, ascending."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    table = twin_sum_table(m_max, masks)
    return [int(m) for m in np.flatnonzero(table[1:] == 0) + 1]


def cleared_fraction(g: int, m: int, p: int) -> float:
    """Share of positions 1..m of the unsieved gap construction hit by prime p.

    A position is cleared when p divides either of its two wheel members.
    Expect about 2/p when p does not divide g and 1/p when it does.
    """
    ec = EvenClass.of(g)
    i = np.arange(1, m + 1, dtype=np.int64)
    lo_val = {GClass.G1: 6 * i + 1, GClass.G3: 6 * i - 1}.get(ec.cls)
    if lo_val is None:
        raise ValueError("cleared_fraction covers the single-difference classes G1, G3")
    hi_val = lo_val + g
    hit = (lo_val % p == 0) | (hi_val % p == 0)
    return float(hit.mean())
