"""Finite-window density estimators: prefix, upper/lower, and sliding-window
(Banach-style) maxima with exact rational values and witnessing intervals.

Limits are finitized over a length schedule; everything here is an estimate,
never a certified asymptotic density.  All values are exact Fractions; floats
appear only at reporting boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

import numpy as np

from .windowset import ValidationError, WindowSet, window_mask


def prefix_density(a: WindowSet, n: int) -> Fraction:
    """|A ∩ [1, n]| / n, exact."""
    if not 1 <= n <= a.window_len:
        raise ValidationError(f"n={n} outside [1, {a.window_len}]")
    return Fraction((a.bits & window_mask(n)).bit_count(), n)


def window_banach_density(a: WindowSet, length: int) -> tuple[Fraction, tuple[int, int]]:
    """Max over m of |A ∩ [m, m+length-1]| / length, with the leftmost witness.

    Single O(N) pass over a prefix-count array; the brute-force rescan lives
    in the tests, not here.
    """
    if not 1 <= length <= a.window_len:
        raise ValidationError(f"length={length} outside [1, {a.window_len}]")
    counts = a.prefix_counts()  # counts[x] = |A ∩ [1, x]|
    sums = counts[length:] - counts[:-length]  # sums[m-1] = |A ∩ [m, m+length-1]|
    m = int(np.argmax(sums)) + 1  # argmax returns the first maximizer
    return Fraction(int(sums[m - 1]), length), (m, m + length - 1)


def default_schedule(window_len: int, min_length: int = 16) -> list[int]:
    """Ascending geometric lengths ceil(N / 2^k), clipped below at min_length."""
    lengths = set()
    value = window_len
    while value >= min(min_length, window_len):
        lengths.add(value)
        if value == 1:
            break
        value = ceil(value / 2)
    return sorted(lengths)


@dataclass(frozen=True)
class DensityReport:
    prefix_density_at: dict[int, Fraction]
    lower_estimate: Fraction
    upper_estimate: Fraction
    banach_estimates: dict[int, tuple[Fraction, tuple[int, int]]]
    schedule: tuple[int, ...]


def density_report(a: WindowSet, schedule: list[int] | None = None) -> DensityReport:
    """Estimates over the schedule; lower/upper come from the tail (largest) half."""
    if schedule is None:
        schedule = default_schedule(a.window_len)
    if not schedule:
        raise ValidationError("schedule must be nonempty")
    if sorted(schedule) != list(schedule) or schedule[-1] > a.window_len:
        raise ValidationError("schedule must be ascending with max <= window_len")
    prefix = {n: prefix_density(a, n) for n in schedule}
    tail = schedule[len(schedule) // 2 :]
    lower = min(prefix[n] for n in tail)
    upper = max(prefix[n] for n in tail)
    banach = {}
    for length in schedule:
        value, witness = window_banach_density(a, length)
        # The interval [1, length] is one candidate, so this cannot dip below
        # the prefix density at the same length.
        assert value >= prefix[length]
        banach[length] = (value, witness)
    return DensityReport(
        prefix_density_at=prefix,
        lower_estimate=lower,
        upper_estimate=upper,
        banach_estimates=banach,
        schedule=tuple(schedule),
    )


def banach_estimate(a: WindowSet, schedule: list[int] | None = None) -> Fraction:
    """One-number sliding-window density estimate: the minimum of the per-length
    maxima over the tail half of the schedule (large lengths are the meaningful
    ones; small windows overshoot)."""
    if schedule is None:
        schedule = default_schedule(a.window_len)
    tail = schedule[len(schedule) // 2 :]
    return min(window_banach_density(a, length)[0] for length in tail)
