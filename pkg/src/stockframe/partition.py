"""Adaptive integer frequency partitions.

For an exponent ``alpha`` in [0, 1] the nonnegative integers are tiled by
consecutive intervals whose widths grow like the alpha-th power of the
start frequency:

    start(0) = 0, stop(0) = 1, width(0) = 1
    start(p) = stop(p-1)
    width(p) = floor(start(p) ** alpha)      (p >= 1)
    stop(p)  = start(p) + width(p)

alpha = 0 gives unit widths (every frequency its own interval); alpha = 1
gives the dyadic ladder start(p) = 2**(p-1).  Negative frequencies are
covered implicitly by mirror symmetry: the interval for -p is the negation
of the interval for p.

The floor is evaluated exactly.  ``alpha`` is coerced to a Fraction (floats
through their shortest decimal repr, so 0.3 means 3/10) and
floor(i**(a/b)) is resolved by exact integer comparisons k**b <= i**a
around a floating-point seed.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "PartitionInterval",
    "AlphaPartition",
    "coerce_alpha",
    "floor_power",
    "build_partition",
    "partition_covering",
    "interval_of",
    "covering_ratios",
    "covering_bounds_hold",
]


def coerce_alpha(alpha) -> Fraction:
    """Interpret ``alpha`` as an exact rational in [0, 1].

    Fractions pass through; ints and floats are read through str(), so a
    float carries its decimal intent (0.3 -> 3/10, not the binary double).
    """
    if isinstance(alpha, Fraction):
        frac = alpha
    elif isinstance(alpha, (int, np.integer)) and not isinstance(alpha, bool):
        frac = Fraction(int(alpha))
    elif isinstance(alpha, float):
        frac = Fraction(str(alpha))
    else:
        raise TypeError(f"alpha must be a number or Fraction, got {alpha!r}")
    if not 0 <= frac <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {frac}")
    return frac


def floor_power(i: int, alpha: Fraction) -> int:
    """Exact floor(i ** alpha) for integer i >= 1 and rational alpha >= 0."""
    if i < 1:
        raise ValueError(f"base must be >= 1, got {i}")
    a, b = alpha.numerator, alpha.denominator
    if a == 0:
        return 1
    target = i**a
    k = int(float(i) ** (a / b))  # seed; corrected exactly below
    if k < 1:
        k = 1
    while k**b > target:
        k -= 1
    while (k + 1) ** b <= target:
        k += 1
    return k


@dataclass(frozen=True)
class PartitionInterval:
    """Half-open integer interval [start, stop) at ladder position p >= 0."""

    p: int
    start: int
    stop: int

    @property
    def width(self) -> int:
        return self.stop - self.start

    def frequencies(self) -> np.ndarray:
        return np.arange(self.start, self.stop)


@dataclass(frozen=True)
class AlphaPartition:
    alpha: Fraction
    intervals: tuple[PartitionInterval, ...]

    @property
    def p_max(self) -> int:
        return len(self.intervals) - 1

    @property
    def stop(self) -> int:
        """One past the largest covered frequency."""
        return self.intervals[-1].stop

    def interval(self, p: int) -> PartitionInterval:
        """Interval at |p|; the p < 0 interval is its negation (see band_frequencies)."""
        k = abs(p)
        if k > self.p_max:
            raise ValueError(f"p = {p} outside partition (p_max = {self.p_max})")
        return self.intervals[k]

    def band_frequencies(self, p: int) -> np.ndarray:
        """Signed integer frequencies of the band at p, ascending."""
        iv = self.interval(p)
        if p >= 0:
            return iv.frequencies()
        return -iv.frequencies()[::-1]

    def locate(self, eta: int) -> int:
        """Signed ladder index p with eta in band(p).

        Mirror convention: locate(-eta) = -locate(eta) for eta > 0.
        """
        mag = abs(int(eta))
        if mag >= self.stop:
            raise ValueError(
                f"frequency {eta} not covered (partition stops at {self.stop})"
            )
        starts = [iv.start for iv in self.intervals]
        p = bisect_right(starts, mag) - 1
        return p if eta >= 0 else -p


def build_partition(alpha, p_max: int) -> AlphaPartition:
    """Intervals 0..p_max of the recurrence."""
    if p_max < 0:
        raise ValueError(f"p_max must be >= 0, got {p_max}")
    frac = coerce_alpha(alpha)
    intervals = [PartitionInterval(0, 0, 1)]
    for p in range(1, p_max + 1):
        start = intervals[-1].stop
        width = floor_power(start, frac)
        intervals.append(PartitionInterval(p, start, start + width))
    return AlphaPartition(frac, tuple(intervals))


def partition_covering(alpha, limit: int) -> AlphaPartition:
    """Smallest partition whose intervals cover [0, limit)."""
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    frac = coerce_alpha(alpha)
    intervals = [PartitionInterval(0, 0, 1)]
    while intervals[-1].stop < limit:
        start = intervals[-1].stop
        width = floor_power(start, frac)
        intervals.append(PartitionInterval(len(intervals), start, start + width))
    return AlphaPartition(frac, tuple(intervals))


def interval_of(alpha, eta: int) -> PartitionInterval:
    """Interval containing the frequency |eta| (builds the ladder on demand)."""
    if eta == 0:
        return PartitionInterval(0, 0, 1)
    part = partition_covering(alpha, abs(int(eta)) + 1)
    return part.interval(part.locate(eta))


def covering_ratios(partition: AlphaPartition, p: int) -> tuple[float, float]:
    """(min, max) over the band of width(p) / eta**alpha.

    The recurrence keeps these ratios inside [2**-(alpha+1), 1] for p large
    enough; at alpha = 0 both are exactly 1.
    """
    iv = partition.interval(p)
    if iv.p == 0:
        raise ValueError("ratios are defined for p >= 1")
    alpha = float(partition.alpha)
    if partition.alpha == 0:
        return (1.0, 1.0)
    etas = iv.frequencies().astype(float)
    ratios = iv.width / etas**alpha
    return (float(ratios.min()), float(ratios.max()))


def covering_bounds_hold(partition: AlphaPartition, p: int) -> bool:
    """Exact rational check of 2**-(alpha+1) <= width/eta**alpha <= 1 on band p.

    With alpha = a/b the two sides reduce to integer comparisons:
        width**b <= eta**a            (ratio <= 1; worst eta = start)
        width**b * 2**(a+b) >= eta**a (ratio >= 2**-(alpha+1); worst eta = stop-1)
    """
    iv = partition.interval(p)
    if iv.p == 0:
        raise ValueError("covering bounds are stated for p >= 1")
    a, b = partition.alpha.numerator, partition.alpha.denominator
    w = iv.width
    upper_ok = w**b <= iv.start**a
    lower_ok = w**b * 2 ** (a + b) >= (iv.stop - 1) ** a
    return upper_ok and lower_ok
