import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wheelsieve import _bits
from wheelsieve.segments import (
    Direction,
    combine,
    count_nonzero,
    make_segment,
    sumset_mask,
)
from wheelsieve.wheel import IndexedMask, IndexWindow, MaskKind


def _mask(flags, lo=1, kind=MaskKind.L):
    flags = np.asarray(flags, dtype=bool)
    return IndexedMask(IndexWindow(lo, flags.size), kind, _bits.pack(flags))


def _zeros(seg):
    return (np.flatnonzero(~seg.to_bool()) + 1).tolist()


def test_direct_L14(small_masks):
    seg = make_segment(small_masks.L, 14)
    assert _zeros(seg) == [6, 11, 13]
    assert count_nonzero(seg) == 11


def test_direct_view_does_not_copy():
    mask = _mask(np.ones(14, dtype=bool))
    assert make_segment(mask, 14).words is mask.words


def test_reverse_R14(small_masks):
    seg = make_segment(small_masks.R, 14, Direction.REVERSE)
    assert not seg.to_bool()[0]


def test_shifted_L21(small_masks):
    seg = make_segment(small_masks.L, 21, shift=5)
    assert not seg.to_bool()[0]


def test_gap_row(small_masks):
    row = combine(make_segment(small_masks.L, 21, shift=5), make_segment(small_masks.R, 21))
    assert row.positions().tolist() == [2, 3, 5, 7, 10, 12, 13, 17, 18]


def test_sum_row(small_masks):
    row = combine(make_segment(small_masks.L, 15), make_segment(small_masks.L, 15, "reverse"))
    assert count_nonzero(row) == 9


def test_idempotent(small_masks):
    seg = make_segment(small_masks.T, 300, shift=7)
    assert np.array_equal(combine(seg, seg).to_bool(), seg.to_bool())


def test_counts_and_empty(small_masks):
    assert count_nonzero(make_segment(small_masks.T, 10)) == 6
    assert count_nonzero(make_segment(small_masks.L, 0)) == 0


def test_coverage_and_length_errors(small_masks):
    with pytest.raises(ValueError):
        make_segment(small_masks.L, small_masks.m, shift=1)
    with pytest.raises(ValueError):
        make_segment(_mask(np.ones(10), lo=5), 3)
    with pytest.raises(ValueError):
        combine(make_segment(small_masks.L, 3), make_segment(small_masks.R, 4))


masks_st = st.integers(1, 300).flatmap(
    lambda n: st.tuples(
        *[st.lists(st.booleans(), min_size=n, max_size=n) for _ in range(3)]
    )
)


def _segs(triple, direction=Direction.DIRECT):
    return [make_segment(_mask(f), len(f), direction) for f in triple]


@given(masks_st)
def test_combine_commutative_associative(triple):
    a, b, c = _segs(triple)
    assert np.array_equal(combine(a, b).words, combine(b, a).words)
    assert np.array_equal(combine(combine(a, b), c).words, combine(a, combine(b, c)).words)


@given(masks_st, st.sampled_from(list(Direction)))
def test_count_matches_reference_loop(triple, direction):
    a, b, _ = triple
    sa = make_segment(_mask(a), len(a), direction)
    sb = make_segment(_mask(b), len(b))
    ra = a[::-1] if direction is Direction.REVERSE else a
    expect = sum(1 for x, y in zip(ra, b) if x and y)
    got = count_nonzero(combine(sa, sb))
    assert got == expect
    assert got <= min(count_nonzero(sa), count_nonzero(sb))


@given(masks_st)
def test_reversal_involution(triple):
    seg = make_segment(_mask(triple[0]), len(triple[0]))
    back = seg.reversed().reversed()
    assert back.direction is Direction.DIRECT
    assert np.array_equal(back.to_bool(), seg.to_bool())
    assert count_nonzero(seg.reversed()) == count_nonzero(seg)


@settings(max_examples=30)
@given(st.integers(0, 500), st.integers(1, 200), st.sampled_from(list(Direction)))
def test_reverse_position_mapping(shift, m, direction):
    flags = np.random.default_rng(shift * 1000 + m).random(m + shift + 5) < 0.4
    mask = _mask(flags)
    seg = make_segment(mask, m, direction, shift)
    idx = np.arange(1, m + 1) + shift
    if direction is Direction.REVERSE:
        idx = (m + 1 - np.arange(1, m + 1)) + shift
    assert np.array_equal(seg.to_bool(), flags[idx - 1])


@pytest.mark.parametrize("shift", [0, 1, 5, 100])
def test_shift_composition(small_masks, shift):
    m = 1000
    shifted = make_segment(small_masks.L, m, shift=shift)
    window = small_masks.L.sub(1 + shift, m)
    direct = make_segment(window, m, shift=shift)  # window starts at 1 + shift
    assert np.array_equal(shifted.to_bool(), window.to_bool())
    assert np.array_equal(shifted.words, direct.words)


def _sumset_ref(a, b, n, with_zero):
    xs = set(np.flatnonzero(a) + 1) | ({0} if with_zero else set())
    ys = set(np.flatnonzero(b) + 1) | ({0} if with_zero else set())
    got = {x + y for x in xs for y in ys}
    return np.array([k in got for k in range(1, n + 1)])


@settings(max_examples=40)
@given(masks_st, st.booleans())
def test_sumset_matches_reference(triple, with_zero):
    a, b, _ = (np.array(f, dtype=bool) for f in triple)
    n = a.size
    got = sumset_mask(_mask(a), _mask(b, kind=MaskKind.R), n, with_zero)
    assert np.array_equal(got, _sumset_ref(a, b, n, with_zero))


def test_sumset_needs_prefix():
    with pytest.raises(ValueError):
        sumset_mask(_mask(np.ones(5), lo=2), _mask(np.ones(5)), 3)
