"""Brute-force reference counts.

Nothing here touches the wheel sieve: primality is decided per integer by a
deterministic Miller-Rabin battery, and every count is a direct enumeration of
its definition. Agreement with the sieve path is evidence, not tautology.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

LIMIT = 10**7

_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2**63."""
    if n < 2:
        return False
    for p in _SMALL:
        if n % p == 0:
            return n == p
    if n < 41 * 41:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # first 12 prime bases are a proof for n < 3.3e24
    bases = (2, 3, 5, 7) if n < 3_215_031_751 else _SMALL
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def in_P(n: int) -> bool:
    """Membership in the primes with 2 and 3 removed."""
    return n >= 5 and is_prime(n)


@lru_cache(maxsize=4)
def _prime_set_pow2(bits: int) -> frozenset[int]:
    return frozenset(n for n in range(5, (1 << bits) + 1) if is_prime(n))


def _prime_set(limit: int) -> frozenset[int]:
    # primes >= 5 up to at least ``limit``; callers only test membership below it
    return _prime_set_pow2(max(limit, 1).bit_length())


def _check(n: int) -> None:
    if n > LIMIT:
        raise ValueError(f"oracle enumeration is limited to n <= {LIMIT}")


def gap_count(g: int, n: int) -> int:
    """#{p <= n : p and p + g both prime, both >= 5}."""
    _check(n + g)
    ps = _prime_set(n + g)
    return sum(1 for p in range(5, n + 1) if p in ps and p + g in ps)


def gap_counts_upto(g: int, n_max: int) -> list[int]:
    """``out[n] = gap_count(g, n)`` for 0 <= n <= n_max, by one running enumeration."""
    _check(n_max + g)
    ps = _prime_set(n_max + g)
    out, running = [], 0
    for p in range(n_max + 1):
        if p in ps and p + g in ps:
            running += 1
        out.append(running)
    return out


def sum_count(g: int) -> int:
    """Unordered representations g = p + q, p <= q, p and q prime >= 5."""
    _check(g)
    ps = _prime_set(g)
    return sum(1 for p in range(5, g // 2 + 1) if p in ps and g - p in ps)


def twin_count(n: int) -> int:
    """Twin pairs (p, p + 2) with 5 <= p <= n."""
    _check(n + 2)
    return sum(1 for p in range(5, n + 1, 6) if in_P(p) and in_P(p + 2))


def _is_twin_center(i: int) -> bool:
    return in_P(6 * i - 1) and in_P(6 * i + 1)


def quad_count(shift: int, m: int) -> int:
    """Twin pairs 6i -/+ 1 (i <= m) whose partner 6(i + shift) -/+ 1 is also a twin pair."""
    _check(6 * (m + shift) + 1)
    return sum(1 for i in range(1, m + 1) if _is_twin_center(i) and _is_twin_center(i + shift))


def twin_sum_count(m: int) -> int:
    """Unordered {p, q} of twin-pair members with p + q = 6m (both of form 6i-1/6i+1 twins)."""
    _check(6 * m)
    return sum(
        1
        for i in range(1, m // 2 + 1)
        if _is_twin_center(i) and _is_twin_center(m - i)
    )


def class_counts(m: int) -> tuple[int, int]:
    """(#primes 6i-1, #primes 6i+1) over 1 <= i <= m."""
    _check(6 * m + 1)
    a = sum(1 for i in range(1, m + 1) if is_prime(6 * i - 1))
    b = sum(1 for i in range(1, m + 1) if is_prime(6 * i + 1))
    return a, b


class OracleKind(enum.Enum):
    GAP = "GapCount"
    SUM = "SumCount"
    TWIN = "TwinCount"
    QUAD = "QuadCount"
    TWIN_SUM = "TwinSumCount"
    CLASS = "ClassCounts"


@dataclass(frozen=True)
class OracleTask:
    task: OracleKind
    params: tuple[int, ...] = field(default=())


_DISPATCH = {
    OracleKind.GAP: gap_count,
    OracleKind.SUM: sum_count,
    OracleKind.TWIN: twin_count,
    OracleKind.QUAD: quad_count,
    OracleKind.TWIN_SUM: twin_sum_count,
    OracleKind.CLASS: class_counts,
}


def oracle_count(task: OracleTask):
    return _DISPATCH[task.task](*task.params)
