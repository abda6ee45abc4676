"""Mod-6 wheel sequences and bit-packed survivor masks.

Candidates above 3 live in two sequences indexed from 1::

    A: a_i = 6i - 1   (5, 11, 17, ...)
    B: b_i = 6i + 1   (7, 13, 19, ...)

For a prime p >= 5 the indices of members divisible by p form exactly one
residue class mod p in each sequence, so a window of indices is sieved by
striding through those classes. ``L`` marks indices whose A-member is prime,
``R`` those whose B-member is prime, and ``T = L & R`` marks twin pairs.
"""

from __future__ import annotations

import enum
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _bits

MAX_INDEX = 2**64 - 1

MAGIC = b"W6SV"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHBQQ")

# chunk length for threaded sieving; a multiple of 64 so chunks concatenate
_CHUNK = 1 << 18


class WheelKind(enum.Enum):
    A = "A"
    B = "B"


class MaskKind(enum.IntEnum):
    L = 0
    R = 1
    T = 2


def value(kind: WheelKind, i: int) -> int:
    """Return the ``i``-th member of sequence A (6i-1) or B (6i+1)."""
    if i < 1:
        raise ValueError(f"wheel indices start at 1, got {i}")
    return 6 * i - 1 if kind is WheelKind.A else 6 * i + 1


def classify(n: int) -> tuple[WheelKind, int] | None:
    """Inverse of :func:`value`; ``None`` when ``n`` is not 6i +/- 1."""
    if n < 5:
        raise ValueError(f"classify needs n >= 5, got {n}")
    r = n % 6
    if r == 5:
        return WheelKind.A, (n + 1) // 6
    if r == 1:
        return WheelKind.B, (n - 1) // 6
    return None


@dataclass(frozen=True)
class IndexWindow:
    lo: int
    len: int

    def __post_init__(self):
        if self.lo < 1:
            raise ValueError(f"window must start at index >= 1, got {self.lo}")
        if self.len < 0:
            raise ValueError("window length must be non-negative")
        if self.lo + self.len > MAX_INDEX:
            raise OverflowError("window end overflows the 64-bit index range")

    @property
    def hi(self) -> int:
        """One past the last index."""
        return self.lo + self.len

    def covers(self, lo: int, hi: int) -> bool:
        return self.lo <= lo and hi <= self.hi


@dataclass(frozen=True, eq=False)
class IndexedMask:
    """Survivor bits for one of L, R, T over ``window``.

    ``words`` is read-only; bit ``j`` stands for index ``window.lo + j``.
    """

    window: IndexWindow
    kind: MaskKind
    words: np.ndarray

    def __post_init__(self):
        if self.words.size != _bits.n_words(self.window.len):
            raise ValueError("word count does not match window length")
        self.words.setflags(write=False)

    def __len__(self) -> int:
        return self.window.len

    def __eq__(self, other):
        if not isinstance(other, IndexedMask):
            return NotImplemented
        return (
            self.window == other.window
            and self.kind == other.kind
            and np.array_equal(self.words, other.words)
        )

    def __hash__(self):
        return hash((self.window, self.kind, self.words.tobytes()))

    def count(self) -> int:
        return _bits.popcount(self.words)

    def to_bool(self) -> np.ndarray:
        return _bits.unpack(self.words, self.window.len)

    def indices(self) -> np.ndarray:
        """Indices of surviving elements, ascending."""
        return np.flatnonzero(self.to_bool()).astype(np.int64) + self.window.lo

    def __getitem__(self, i: int) -> bool:
        j = i - self.window.lo
        if not 0 <= j < self.window.len:
            raise IndexError(f"index {i} outside window {self.window}")
        return bool((int(self.words[j // 64]) >> (j % 64)) & 1)

    def sub(self, lo: int, length: int) -> "IndexedMask":
        """Restrict to the sub-window ``[lo, lo + length)``."""
        if not self.window.covers(lo, lo + length):
            raise ValueError(f"[{lo}, {lo + length}) not inside {self.window}")
        words = _bits.extract(self.words, lo - self.window.lo, length)
        return IndexedMask(IndexWindow(lo, length), self.kind, words)


# -- sieving -----------------------------------------------------------------


def _residue(kind: MaskKind, p: int) -> int:
    """Index class mod p of the members of L (or R) divisible by p.

    p = a_j:  a_i  multiples at i = j + k a_j,   b_i multiples at i = -j + j' a_j
    p = b_k:  a_i  multiples at i = -k + j b_k,  b_i multiples at i = k + k' b_k
    """
    if p % 6 == 5:
        j = (p + 1) // 6
        return j % p if kind is MaskKind.L else (-j) % p
    k = (p - 1) // 6
    return (-k) % p if kind is MaskKind.L else k % p


def _own_index(kind: MaskKind, p: int) -> int | None:
    # index at which p itself sits in the sequence being sieved
    if kind is MaskKind.L and p % 6 == 5:
        return (p + 1) // 6
    if kind is MaskKind.R and p % 6 == 1:
        return (p - 1) // 6
    return None


def _clear_progressions(flags: np.ndarray, lo: int, kind: MaskKind, p: int) -> None:
    start = lo + (_residue(kind, p) - lo) % p
    if start == _own_index(kind, p):
        start += p
    if start < lo + flags.size:
        flags[start - lo :: p] = False


def _prefix_sieve(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Sieve L and R over indices 1..n in place, discovering base primes as it goes."""
    lf = np.ones(n, dtype=bool)
    rf = np.ones(n, dtype=bool)
    limit = 6 * (n + 1) + 1
    i = 1
    while (6 * i - 1) ** 2 <= limit and i <= n:
        for p, alive in ((6 * i - 1, lf[i - 1]), (6 * i + 1, rf[i - 1])):
            if alive and p * p <= limit:
                _clear_progressions(lf, 1, MaskKind.L, p)
                _clear_progressions(rf, 1, MaskKind.R, p)
        i += 1
    return lf, rf


def base_primes(limit: int) -> np.ndarray:
    """Primes 5 <= p with p*p <= ``limit``, from a wheel sieve of the prefix."""
    root = math.isqrt(limit)
    if root < 5:
        return np.zeros(0, dtype=np.int64)
    n = -(-root // 6) + 1
    lf, rf = _prefix_sieve(n)
    idx = np.arange(1, n + 1, dtype=np.int64)
    ps = np.concatenate([6 * idx[lf] - 1, 6 * idx[rf] + 1])
    ps.sort()
    return ps[ps <= root]


def _sieve_flags(lo: int, length: int, kind: MaskKind, primes: np.ndarray) -> np.ndarray:
    flags = np.ones(length, dtype=bool)
    for p in primes.tolist():
        _clear_progressions(flags, lo, kind, p)
    return flags


def sieve_window(
    window: IndexWindow, kind: MaskKind | str, threads: int = 1
) -> IndexedMask:
    """Build the L or R survivor mask over ``window``.

    Base primes come from a prefix sieve up to sqrt(6 * (lo + len) + 1); the
    window is then split into word-aligned chunks which may be sieved in
    parallel. The result does not depend on ``threads``.
    """
    kind = MaskKind[kind] if isinstance(kind, str) else MaskKind(kind)
    if kind is MaskKind.T:
        return twin_mask(
            sieve_window(window, MaskKind.L, threads),
            sieve_window(window, MaskKind.R, threads),
        )
    if threads < 1:
        raise ValueError("threads must be >= 1")
    primes = base_primes(6 * window.hi + 1)
    starts = list(range(window.lo, window.hi, _CHUNK)) or [window.lo]

    def work(start: int) -> tuple[np.ndarray, int]:
        length = min(_CHUNK, window.hi - start)
        return _bits.pack(_sieve_flags(start, length, kind, primes)), length

    if threads == 1 or len(starts) == 1:
        parts = [work(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, starts))
    return IndexedMask(window, kind, _bits.concat(parts))


def twin_mask(l: IndexedMask, r: IndexedMask) -> IndexedMask:
    if l.window != r.window:
        raise ValueError(f"window mismatch: {l.window} vs {r.window}")
    return IndexedMask(l.window, MaskKind.T, l.words & r.words)


@dataclass(frozen=True)
class WheelMasks:
    """L, R and T masks over the common prefix window ``[1, m]``."""

    L: IndexedMask
    R: IndexedMask
    T: IndexedMask

    @property
    def m(self) -> int:
        return self.L.window.hi - 1

    @classmethod
    def build(cls, m: int, threads: int = 1) -> "WheelMasks":
        window = IndexWindow(1, m)
        l = sieve_window(window, MaskKind.L, threads)
        r = sieve_window(window, MaskKind.R, threads)
        return cls(l, r, twin_mask(l, r))

    def primes(self, upto: int) -> np.ndarray:
        """All primes 5 <= p <= ``upto`` covered by the masks, ascending."""
        if upto > 6 * self.m - 1:
            raise ValueError(f"masks cover values only up to {6 * self.m + 1}")
        ps = np.concatenate([6 * self.L.indices() - 1, 6 * self.R.indices() + 1])
        ps.sort()
        return ps[ps <= upto]


_cache: dict[str, WheelMasks] = {}


def masks_for(m: int, threads: int = 1) -> WheelMasks:
    """Shared prefix masks covering at least indices 1..m (grown geometrically)."""
    have = _cache.get("prefix")
    if have is None or have.m < m:
        size = 4096
        while size < m:
            size *= 2
        have = WheelMasks.build(size, threads)
        _cache["prefix"] = have
    return have


def primes_upto(x: int) -> np.ndarray:
    """Primes 5 <= p <= x via the wheel sieve."""
    if x < 5:
        return np.zeros(0, dtype=np.int64)
    return masks_for(x // 6 + 1).primes(x)


# -- persistence ---------------------------------------------------------------


def save_mask(mask: IndexedMask, path: str | Path) -> None:
    header = _HEADER.pack(
        MAGIC, FORMAT_VERSION, int(mask.kind), mask.window.lo, mask.window.len
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(mask.words, dtype="<u8").tobytes())


def read_header(path: str | Path) -> tuple[MaskKind, IndexWindow]:
    with open(path, "rb") as fh:
        return _parse_header(fh.read(_HEADER.size))


def _parse_header(raw: bytes) -> tuple[MaskKind, IndexWindow]:
    if len(raw) < _HEADER.size:
        raise ValueError("truncated W6SV header")
    magic, version, kind, lo, length = _HEADER.unpack(raw[: _HEADER.size])
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported W6SV version {version}")
    return MaskKind(kind), IndexWindow(lo, length)


def load_mask(path: str | Path) -> IndexedMask:
    raw = Path(path).read_bytes()
    kind, window = _parse_header(raw)
    body = raw[_HEADER.size :]
    nw = _bits.n_words(window.len)
    if len(body) != 8 * nw:
        raise ValueError(f"expected {nw} words, found {len(body) / 8:g}")
    words = np.frombuffer(body, dtype="<u8").astype(np.uint64)
    return IndexedMask(window, kind, words)
