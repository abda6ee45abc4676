"""Mod-6 wheel sieves, segment algebra and additive prime counts."""

from .counting import (
    CountReport,
    EvenClass,
    GClass,
    pi_gap,
    pi_gap_corrected,
    pi_quad,
    pi_sum,
    pi_sum_corrected,
    pi_twin,
    prime_class_counts,
    scan_exceptions,
    twin_sum_reps,
)
from .segments import Direction, combine, count_nonzero, make_segment
from .wheel import (
    IndexedMask,
    IndexWindow,
    MaskKind,
    WheelKind,
    WheelMasks,
    classify,
    load_mask,
    save_mask,
    sieve_window,
    twin_mask,
    value,
)

__version__ = "0.1.0"
