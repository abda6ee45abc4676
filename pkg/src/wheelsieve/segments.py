"""Direct, reverse and shifted segments of a mask, and their zero-annihilating sum.

A position in a combined segment is nonzero exactly when both operands are
nonzero there. Sum and difference therefore share one implementation: the
summed value itself is never needed, only which positions survive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _bits
from .wheel import IndexedMask


class Direction(enum.Enum):
    DIRECT = "direct"
    REVERSE = "reverse"


@dataclass(frozen=True)
class Segment:
    """Positions 1..length of ``source`` starting after index ``shift``.

    Direct position i maps to index i + shift; reverse position i maps to
    index (length + 1 - i) + shift.
    """

    source: IndexedMask
    length: int
    direction: Direction = Direction.DIRECT
    shift: int = 0

    @cached_property
    def words(self) -> np.ndarray:
        w = self.source.window
        start = 1 + self.shift - w.lo
        if start == 0 and self.length == w.len and self.direction is Direction.DIRECT:
            return self.source.words
        words = _bits.extract(self.source.words, start, self.length)
        if self.direction is Direction.REVERSE:
            words = _bits.reverse(words, self.length)
        return words

    def to_bool(self) -> np.ndarray:
        return _bits.unpack(self.words, self.length)

    def reversed(self) -> "Segment":
        flip = (
            Direction.REVERSE if self.direction is Direction.DIRECT else Direction.DIRECT
        )
        return Segment(self.source, self.length, flip, self.shift)


@dataclass(frozen=True)
class CombinedSegment:
    length: int
    words: np.ndarray

    def to_bool(self) -> np.ndarray:
        return _bits.unpack(self.words, self.length)

    def positions(self) -> np.ndarray:
        """1-based surviving positions."""
        return np.flatnonzero(self.to_bool()) + 1


def make_segment(
    mask: IndexedMask,
    m: int,
    direction: Direction | str = Direction.DIRECT,
    shift: int = 0,
) -> Segment:
    if m < 0 or shift < 0:
        raise ValueError("segment length and shift must be non-negative")
    if m and not mask.window.covers(1 + shift, m + shift + 1):
        raise ValueError(
            f"mask window {mask.window} does not cover indices "
            f"[{1 + shift}, {m + shift}]"
        )
    return Segment(mask, m, Direction(direction), shift)


def combine(s1: Segment | CombinedSegment, s2: Segment | CombinedSegment) -> CombinedSegment:
    if s1.length != s2.length:
        raise ValueError(f"segment lengths differ: {s1.length} vs {s2.length}")
    return CombinedSegment(s1.length, s1.words & s2.words)


def count_nonzero(s: Segment | CombinedSegment) -> int:
    return _bits.popcount(s.words)


def sumset_mask(
    left: IndexedMask, right: IndexedMask, n: int, with_zero: bool = True
) -> np.ndarray:
    """Membership of 1..n in the arithmetic sum {x + y} of two index sets.

    Both masks must start at index 1. With ``with_zero`` the sieved-out
    elements (value 0) count as members, so each set is contained in the sum.
    Returns a boolean vector whose entry ``k - 1`` is membership of ``k``.
    """
    if left.window.lo != 1 or right.window.lo != 1:
        raise ValueError("sumset needs prefix masks starting at index 1")
    if n > min(left.window.len, right.window.len):
        raise ValueError("masks too short for the requested range")
    length = n + 1  # bit k <-> value k, bit 0 unused
    acc = np.zeros(_bits.n_words(length), dtype=np.uint64)
    rwords = _bits.extract(right.words, 0, n)
    for i in left.indices().tolist():
        if i > n:
            break
        _bits.shift_or(acc, rwords, i + 1, length)
    if with_zero:
        _bits.shift_or(acc, rwords, 1, length)
        _bits.shift_or(acc, _bits.extract(left.words, 0, n), 1, length)
    return _bits.unpack(acc, length)[1:]
