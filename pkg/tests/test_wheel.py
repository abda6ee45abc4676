import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wheelsieve import oracle
from wheelsieve.wheel import (
    FORMAT_VERSION,
    IndexedMask,
    IndexWindow,
    MaskKind,
    WheelKind,
    WheelMasks,
    _residue,
    base_primes,
    classify,
    load_mask,
    read_header,
    save_mask,
    sieve_window,
    twin_mask,
    value,
)


@pytest.mark.parametrize("kind,i,expected", [(WheelKind.A, 1, 5), (WheelKind.B, 1, 7), (WheelKind.A, 6, 35)])
def test_value_examples(kind, i, expected):
    assert value(kind, i) == expected


def test_value_rejects_zero():
    with pytest.raises(ValueError):
        value(WheelKind.B, 0)


@pytest.mark.parametrize("n,expected", [(35, (WheelKind.A, 6)), (37, (WheelKind.B, 6)), (36, None)])
def test_classify_examples(n, expected):
    assert classify(n) == expected


@given(st.sampled_from(list(WheelKind)), st.integers(1, 10**12))
def test_classify_inverts_value(kind, i):
    assert classify(value(kind, i)) == (kind, i)


def test_classify_precondition():
    with pytest.raises(ValueError):
        classify(4)


def test_window_validation():
    with pytest.raises(ValueError):
        IndexWindow(0, 5)
    with pytest.raises(OverflowError):
        IndexWindow(2**63, 2**63)


def test_sieve_L_listing():
    mask = sieve_window(IndexWindow(1, 17), MaskKind.L)
    assert mask.indices().tolist() == [1, 2, 3, 4, 5, 7, 8, 9, 10, 12, 14, 15, 17]


def test_sieve_R_listing():
    mask = sieve_window(IndexWindow(1, 17), MaskKind.R)
    cleared = sorted(set(range(1, 18)) - set(mask.indices().tolist()))
    assert cleared == [4, 8, 9, 14, 15]


def test_sieve_small_counts():
    assert sieve_window(IndexWindow(1, 10), "L").count() == 9
    assert sieve_window(IndexWindow(1, 10), "R").count() == 7


def test_twin_listing():
    w = IndexWindow(1, 25)
    t = twin_mask(sieve_window(w, "L"), sieve_window(w, "R"))
    assert t.kind is MaskKind.T
    assert t.indices().tolist() == [1, 2, 3, 5, 7, 10, 12, 17, 18, 23, 25]
    assert t.sub(1, 10).count() == 6


def test_twin_of_zero_mask_is_zero():
    w = IndexWindow(1, 100)
    zero = IndexedMask(w, MaskKind.L, np.zeros(2, dtype=np.uint64))
    assert twin_mask(zero, sieve_window(w, "R")).count() == 0


def test_twin_window_mismatch():
    with pytest.raises(ValueError):
        twin_mask(sieve_window(IndexWindow(1, 10), "L"), sieve_window(IndexWindow(2, 10), "R"))


def test_masks_are_immutable(small_masks):
    with pytest.raises(ValueError):
        small_masks.L.words[0] = 0


def test_oracle_equivalence_offset_windows():
    for lo, n in [(1, 5000), (777, 3000), (10**6, 2000), (10**9, 500)]:
        w = IndexWindow(lo, n)
        l, r = sieve_window(w, "L"), sieve_window(w, "R")
        i = range(lo, lo + n)
        assert l.to_bool().tolist() == [oracle.is_prime(6 * k - 1) for k in i]
        assert r.to_bool().tolist() == [oracle.is_prime(6 * k + 1) for k in i]
        assert np.array_equal(sieve_window(w, "T").words, l.words & r.words)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3000), st.data())
def test_split_consistency(n, data):
    k = data.draw(st.integers(1, n))
    kind = data.draw(st.sampled_from([MaskKind.L, MaskKind.R]))
    whole = sieve_window(IndexWindow(1, n), kind).to_bool()
    left = sieve_window(IndexWindow(1, k - 1), kind).to_bool()
    right = sieve_window(IndexWindow(k, n + 1 - k), kind).to_bool()
    assert np.array_equal(np.concatenate([left, right]), whole)


def test_threads_do_not_change_result():
    w = IndexWindow(3, 700_000)
    one = sieve_window(w, "L", threads=1)
    assert sieve_window(w, "L", threads=4) == one


def test_base_primes():
    assert base_primes(200).tolist() == [5, 7, 11, 13]


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31, 37])
def test_cleared_progressions_structure(p):
    # over w * p consecutive indices, p divides exactly w members of each class,
    # all in one residue class mod p
    w = 7
    lo = 1000 * p + 3
    i = np.arange(lo, lo + w * p)
    for kind, vals in ((MaskKind.L, 6 * i - 1), (MaskKind.R, 6 * i + 1)):
        hit = i[vals % p == 0]
        assert hit.size == w
        assert np.unique(hit % p).tolist() == [_residue(kind, p) % p]


def test_class_identity_to_1e5():
    m_max = 10**5
    masks = WheelMasks.build(m_max)
    pa = np.cumsum(masks.L.to_bool())
    pb = np.cumsum(masks.R.to_bool())
    # pi(6m + 1) by the oracle, tracked incrementally
    pi, n, ok = 0, 0, True
    for m in range(1, m_max + 1):
        while n < 6 * m + 1:
            n += 1
            pi += oracle.is_prime(n)
        ok &= pa[m - 1] + pb[m - 1] == pi - 2
    assert ok


def test_mask_roundtrip(tmp_path, small_masks):
    path = tmp_path / "L.w6sv"
    mask = small_masks.L.sub(17, 333)
    save_mask(mask, path)
    assert read_header(path) == (MaskKind.L, IndexWindow(17, 333))
    assert load_mask(path) == mask
    raw = path.read_bytes()
    assert raw[:4] == b"W6SV"
    assert struct.unpack("<H", raw[4:6])[0] == FORMAT_VERSION
    assert len(raw) == 4 + 2 + 1 + 8 + 8 + 8 * 6


@pytest.mark.parametrize(
    "mangle",
    [
        lambda b: b"XXXX" + b[4:],
        lambda b: b[:4] + struct.pack("<H", 9) + b[6:],
        lambda b: b[:-8],
        lambda b: b[:10],
    ],
)
def test_bad_mask_files(tmp_path, small_masks, mangle):
    path = tmp_path / "m.w6sv"
    save_mask(small_masks.R.sub(1, 100), path)
    path.write_bytes(mangle(path.read_bytes()))
    with pytest.raises(ValueError):
        load_mask(path)


def test_wheel_masks_primes(small_masks):
    ps = small_masks.primes(100).tolist()
    assert ps == [p for p in range(5, 101) if oracle.is_prime(p)]
