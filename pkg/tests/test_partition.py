"""Partition recurrence: exact arithmetic, covering bounds, locate."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stockframe.partition import (
    AlphaPartition,
    build_partition,
    coerce_alpha,
    covering_bounds_hold,
    covering_ratios,
    floor_power,
    interval_of,
    partition_covering,
)

ALPHAS = [Fraction(0), Fraction(1, 4), Fraction(3, 10), Fraction(1, 2), Fraction(4, 5), Fraction(1)]


def floor_power_oracle(i: int, alpha: Fraction) -> int:
    """Independent floor(i**alpha): bracket then bisect in exact integers."""
    a, b = alpha.numerator, alpha.denominator
    if a == 0:
        return 1
    target = i**a
    hi = 1
    while hi**b <= target:
        hi *= 2
    lo = 0
    while lo < hi - 1:  # invariant: lo**b <= target < hi**b
        mid = (lo + hi) // 2
        if mid**b <= target:
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------- floor_power


@pytest.mark.parametrize("alpha", ALPHAS)
def test_floor_power_matches_counting_oracle(alpha):
    for i in range(1, 200):
        assert floor_power(i, alpha) == floor_power_oracle(i, alpha)


@given(
    i=st.integers(min_value=1, max_value=10_000),
    num=st.integers(min_value=0, max_value=12),
    den=st.integers(min_value=1, max_value=12),
)
@settings(max_examples=200, deadline=None)
def test_floor_power_defining_inequality(i, num, den):
    # k = floor(i**alpha) iff k**b <= i**a < (k+1)**b, checked in integers
    if num > den:
        num, den = den, num  # keep alpha <= 1
    alpha = Fraction(num, den)
    k = floor_power(i, alpha)
    a, b = alpha.numerator, alpha.denominator
    assert k**b <= i**a < (k + 1) ** b


def test_floor_power_float_seed_correction():
    # i**(a/b) in floats can land on the wrong side of an exact power;
    # cubes are exact integers so the answer is forced
    for k in (10**5, 10**5 + 1):
        assert floor_power(k**3, Fraction(1, 3)) == k


def test_floor_power_rejects_zero():
    with pytest.raises(ValueError):
        floor_power(0, Fraction(1, 2))


# ---------------------------------------------------------------- coerce


def test_coerce_alpha_reads_decimal_intent():
    assert coerce_alpha(0.3) == Fraction(3, 10)
    assert coerce_alpha(0.25) == Fraction(1, 4)
    assert coerce_alpha(1) == Fraction(1)
    assert coerce_alpha(Fraction(2, 7)) == Fraction(2, 7)


def test_coerce_alpha_range_and_type():
    with pytest.raises(ValueError):
        coerce_alpha(1.5)
    with pytest.raises(ValueError):
        coerce_alpha(-0.1)
    with pytest.raises(TypeError):
        coerce_alpha("0.5")
    with pytest.raises(TypeError):
        coerce_alpha(True)


# ---------------------------------------------------------------- recurrence


def test_unit_widths_at_alpha_zero():
    part = build_partition(0, 20)
    for p, iv in enumerate(part.intervals):
        assert (iv.start, iv.stop) == (p, p + 1)


def test_dyadic_at_alpha_one():
    part = build_partition(1, 12)
    assert (part.intervals[0].start, part.intervals[0].stop) == (0, 1)
    for p in range(1, 13):
        iv = part.intervals[p]
        assert iv.start == 2 ** (p - 1)
        assert iv.stop == 2**p


def test_half_alpha_table():
    # worked example: widths floor(sqrt(start))
    part = build_partition(0.5, 7)
    starts = [iv.start for iv in part.intervals]
    widths = [iv.width for iv in part.intervals]
    assert starts == [0, 1, 2, 3, 4, 6, 8, 10]
    assert widths == [1, 1, 1, 1, 2, 2, 2, 3]


@pytest.mark.parametrize("alpha", ALPHAS)
def test_intervals_abut_and_widths_match_recurrence(alpha):
    part = build_partition(alpha, 60)
    for p in range(1, len(part.intervals)):
        prev, iv = part.intervals[p - 1], part.intervals[p]
        assert iv.start == prev.stop
        assert iv.width == floor_power_oracle(iv.start, coerce_alpha(alpha))
        assert iv.width >= 1


# ---------------------------------------------------------------- covering


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_covering_bounds_exact_for_large_p(alpha):
    part = build_partition(alpha, 40)
    for p in range(10, 41):
        assert covering_bounds_hold(part, p)


@pytest.mark.parametrize("alpha", ALPHAS[1:])
def test_covering_ratios_agree_with_float_evaluation(alpha):
    part = build_partition(alpha, 30)
    for p in (5, 12, 25):
        lo, hi = covering_ratios(part, p)
        iv = part.interval(p)
        ratios = [iv.width / eta ** float(alpha) for eta in range(iv.start, iv.stop)]
        assert math.isclose(lo, min(ratios), rel_tol=1e-12)
        assert math.isclose(hi, max(ratios), rel_tol=1e-12)
        if covering_bounds_hold(part, p):
            assert hi <= 1.0 + 1e-12
            assert lo >= 2.0 ** -(float(alpha) + 1.0) - 1e-12


def test_covering_ratio_guard_at_p_zero():
    part = build_partition(0.5, 3)
    with pytest.raises(ValueError):
        covering_ratios(part, 0)
    with pytest.raises(ValueError):
        covering_bounds_hold(part, 0)


def test_partition_covering_is_minimal():
    for alpha in (0.3, 0.5, 1.0):
        for limit in (1, 7, 64, 1000):
            part = partition_covering(alpha, limit)
            assert part.stop >= limit
            if part.p_max > 0:
                assert part.intervals[-2].stop < limit


def test_partition_covering_rejects_bad_limit():
    with pytest.raises(ValueError):
        partition_covering(0.5, 0)
    with pytest.raises(ValueError):
        build_partition(0.5, -1)


# ---------------------------------------------------------------- locate


@given(
    eta=st.integers(min_value=-800, max_value=800),
    alpha_idx=st.integers(min_value=0, max_value=len(ALPHAS) - 1),
)
@settings(max_examples=150, deadline=None)
def test_locate_returns_containing_band(eta, alpha_idx):
    part = partition_covering(ALPHAS[alpha_idx], 801)
    p = part.locate(eta)
    band = part.band_frequencies(p)
    assert eta in band
    assert (p >= 0) == (eta >= 0)
    if eta > 0:
        assert part.locate(-eta) == -p


def test_locate_rejects_uncovered_frequency():
    part = build_partition(1, 4)  # stops at 16
    with pytest.raises(ValueError):
        part.locate(16)
    with pytest.raises(ValueError):
        part.locate(-16)
    assert part.locate(15) == 4


def test_interval_of_single_frequency():
    assert interval_of(0.5, 0).start == 0
    iv = interval_of(0.5, 11)
    assert iv.start <= 11 < iv.stop
    assert interval_of(0.5, -11) == iv


def test_band_frequencies_mirror():
    part = build_partition(0.5, 6)
    for p in range(1, 7):
        pos = part.band_frequencies(p)
        neg = part.band_frequencies(-p)
        assert list(neg) == [-j for j in pos[::-1]]


def test_partition_is_immutable():
    part = build_partition(0.5, 3)
    assert isinstance(part, AlphaPartition)
    with pytest.raises(AttributeError):
        part.alpha = Fraction(1)
