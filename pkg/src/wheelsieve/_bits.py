"""Packed-bit kernels over little-endian uint64 words.

Bit ``j`` of word ``w`` holds element ``64 * w + j``. Bits past the logical
length are always zero, so population counts never need a tail mask.
"""

from __future__ import annotations

import numpy as np

WORD = 64

_REV_BYTE = np.array(
    [int(f"{b:08b}"[::-1], 2) for b in range(256)], dtype=np.uint8
)


def n_words(length: int) -> int:
    return (length + WORD - 1) // WORD


def pack(flags: np.ndarray) -> np.ndarray:
    """Pack a boolean vector into uint64 words."""
    flags = np.asarray(flags, dtype=bool)
    nw = n_words(flags.size)
    raw = np.packbits(flags, bitorder="little")
    buf = np.zeros(nw * 8, dtype=np.uint8)
    buf[: raw.size] = raw
    return buf.view("<u8").astype(np.uint64)


def unpack(words: np.ndarray, length: int) -> np.ndarray:
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little", count=length).astype(bool)


def _mask_tail(words: np.ndarray, length: int) -> np.ndarray:
    r = length % WORD
    if r and words.size:
        words[-1] &= np.uint64((1 << r) - 1)
    return words


def extract(words: np.ndarray, start: int, length: int) -> np.ndarray:
    """Bits ``[start, start + length)`` realigned to bit 0 of a new word array."""
    nw = n_words(length)
    q, r = divmod(start, WORD)
    src = np.zeros(nw + 1, dtype=np.uint64)
    avail = words[q : q + nw + 1]
    src[: avail.size] = avail
    if r == 0:
        out = src[:nw].copy()
    else:
        out = (src[:nw] >> np.uint64(r)) | (src[1:] << np.uint64(WORD - r))
    return _mask_tail(out, length)


def reverse(words: np.ndarray, length: int) -> np.ndarray:
    """Reverse the order of the first ``length`` bits."""
    nw = n_words(length)
    raw = np.ascontiguousarray(words[:nw], dtype="<u8").view(np.uint8)
    flipped = _REV_BYTE[raw[::-1]]
    out = np.ascontiguousarray(flipped).view("<u8").astype(np.uint64)
    return extract(out, nw * WORD - length, length)


def popcount(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum(dtype=np.int64))


def concat(parts: list[tuple[np.ndarray, int]]) -> np.ndarray:
    """Concatenate (words, length) chunks; all but the last must be word-aligned."""
    for words, length in parts[:-1]:
        if length % WORD:
            raise ValueError("only the final chunk may end mid-word")
    if not parts:
        return np.zeros(0, dtype=np.uint64)
    return np.concatenate([w[: n_words(n)] for w, n in parts])


def shift_or(acc: np.ndarray, words: np.ndarray, offset: int, length: int) -> None:
    """In place: ``acc |= words << offset`` clipped to ``length`` bits."""
    q, r = divmod(offset, WORD)
    nw = acc.size
    if q >= nw:
        return
    span = nw - q
    src = np.zeros(span, dtype=np.uint64)
    take = words[:span]
    src[: take.size] = take
    if r == 0:
        acc[q:] |= src
    else:
        acc[q:] |= src << np.uint64(r)
        carry = src[: span - 1] >> np.uint64(WORD - r)
        acc[q + 1 :] |= carry
    _mask_tail(acc, length)
