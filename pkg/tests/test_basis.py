"""Orthonormal basis: literal-sum oracle, Gram identity, round trip."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stockframe.basis import (
    BasisIndex,
    analyze_fast,
    analyze_naive,
    band_layout,
    basis_element,
    concentration,
    gram_deviation,
    gram_matrix,
    synthesize,
)
from stockframe.spectral import FrequencyGrid, SpectralSignal, TimeSamples, from_spectrum, to_spectrum

ALPHAS = [0, 0.25, 0.5, 0.75, 1]


def random_bandlimited(rng, n):
    """Random signal with no Nyquist content, i.e. inside the basis span."""
    coeffs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    coeffs[0] = 0.0  # -n/2 row
    return from_spectrum(SpectralSignal(FrequencyGrid(n), coeffs))


def literal_coefficient(alpha, x, p, tau):
    """Definitional inner product, no FFT anywhere.

    c_{p,tau} = (1/n) sum_t x(t) conj(e_{p,tau}(t)) with
    e_{p,tau}(t) = w^{-1/2} sum_{eta in band} e^{2 pi i eta (t - tau/w)}.
    """
    layout = band_layout(alpha, x.grid.size)
    lo, hi = layout.bands[p]
    w = hi - lo
    t = x.grid.times()
    acc = 0.0 + 0.0j
    for m in range(x.grid.size):
        e = sum(np.exp(2j * np.pi * eta * (t[m] - tau / w)) for eta in range(lo, hi))
        acc += x.values[m] * np.conj(e) / np.sqrt(w)
    return acc / x.grid.size


# ---------------------------------------------------------------- layout


def test_layout_covers_grid_without_nyquist():
    for alpha in ALPHAS:
        layout = band_layout(alpha, 64)
        seen = []
        for p in layout.p_list:
            lo, hi = layout.bands[p]
            assert lo < hi
            seen.extend(range(lo, hi))
        assert sorted(seen) == list(range(-31, 32))


def test_layout_clip_flag():
    # alpha = 1/2 at n = 64: the ladder band [28, 33) overshoots the fold
    layout = band_layout(0.5, 64)
    assert layout.clipped
    assert layout.bands[max(layout.p_list)] == (28, 32)
    # dyadic bands end exactly on powers of two, so nothing is cut
    assert not band_layout(1, 64).clipped
    assert not band_layout(0, 64).clipped


def test_element_rejects_band_outside_grid():
    with pytest.raises(ValueError):
        basis_element(1, BasisIndex(6, 0), 64)  # [32, 64) beyond half = 32


def test_layout_rejects_bad_sizes():
    with pytest.raises(ValueError):
        band_layout(0.5, 7)
    with pytest.raises(ValueError):
        band_layout(0.5, 2)


# ---------------------------------------------------------------- oracle chain


@pytest.mark.parametrize("alpha", [0, 0.5, 1])
def test_analyze_naive_matches_literal_sums(alpha):
    rng = np.random.default_rng(17)
    x = TimeSamples(FrequencyGrid(16), rng.standard_normal(16) + 1j * rng.standard_normal(16))
    coeffs = analyze_naive(alpha, x)
    for p in coeffs.layout.p_list:
        lo, hi = coeffs.layout.bands[p]
        for tau in range(hi - lo):
            want = literal_coefficient(alpha, x, p, tau)
            assert abs(coeffs[(p, tau)] - want) < 1e-12


@pytest.mark.parametrize("alpha", ALPHAS)
def test_analyze_fast_matches_naive(alpha):
    rng = np.random.default_rng(23)
    for n in (16, 64):
        x = TimeSamples(FrequencyGrid(n), rng.standard_normal(n) + 1j * rng.standard_normal(n))
        fast = analyze_fast(alpha, x)
        naive = analyze_naive(alpha, x)
        for p in fast.layout.p_list:
            assert np.max(np.abs(fast.data[p] - naive.data[p])) < 1e-10


@given(alpha=st.sampled_from(ALPHAS), seed=st.integers(0, 2**16))
@settings(max_examples=40, deadline=None)
def test_fast_naive_property(alpha, seed):
    rng = np.random.default_rng(seed)
    x = TimeSamples(FrequencyGrid(24), rng.standard_normal(24) + 1j * rng.standard_normal(24))
    fast = analyze_fast(alpha, x)
    naive = analyze_naive(alpha, x)
    diff = max(float(np.max(np.abs(fast.data[p] - naive.data[p]))) for p in fast.layout.p_list)
    assert diff < 1e-10


# ---------------------------------------------------------------- orthonormality


@pytest.mark.parametrize("alpha", ALPHAS)
def test_gram_is_identity(alpha):
    indices, gram = gram_matrix(alpha, 32)
    assert len(indices) == 31  # n - 1 elements; Nyquist row is excluded
    assert np.max(np.abs(gram - np.eye(len(indices)))) < 1e-10
    assert gram_deviation(alpha, 32) < 1e-10


def test_elements_have_unit_norm():
    for alpha in (0, 0.5, 1):
        for p in (-3, 0, 2):
            e = basis_element(alpha, BasisIndex(p, 0), 64)
            assert e.norm() == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- round trip


@pytest.mark.parametrize("alpha", ALPHAS)
def test_round_trip_on_basis_span(alpha):
    rng = np.random.default_rng(31)
    x = random_bandlimited(rng, 64)
    back = synthesize(analyze_fast(alpha, x))
    assert np.max(np.abs(back.values - x.values)) < 1e-10 * max(1.0, float(np.max(np.abs(x.values))))


def test_energy_is_preserved():
    rng = np.random.default_rng(37)
    x = random_bandlimited(rng, 64)
    coeffs = analyze_fast(0.5, x)
    assert coeffs.energy() == pytest.approx(x.norm() ** 2, rel=1e-12)


def test_nyquist_row_is_invisible():
    # the basis spans everything except the -n/2 line; analysis kills it
    grid = FrequencyGrid(16)
    spec = np.zeros(16, dtype=complex)
    spec[0] = 1.0
    x = from_spectrum(SpectralSignal(grid, spec))
    coeffs = analyze_fast(0.5, x)
    assert coeffs.energy() < 1e-25
    assert synthesize(coeffs).norm() < 1e-12


# ---------------------------------------------------------------- degeneration


def test_alpha_zero_reduces_to_fourier():
    rng = np.random.default_rng(41)
    x = TimeSamples(FrequencyGrid(32), rng.standard_normal(32) + 1j * rng.standard_normal(32))
    coeffs = analyze_fast(0, x)
    spec = to_spectrum(x)
    for p in coeffs.layout.p_list:
        lo, hi = coeffs.layout.bands[p]
        assert hi - lo == 1
        assert abs(coeffs[(p, 0)] - spec[lo]) < 1e-12


# ---------------------------------------------------------------- elements


def test_basis_element_is_translated_band_sum():
    # e_{p,tau} is the tau/w translate of e_{p,0}
    alpha, n, p = 0.5, 64, 4
    layout = band_layout(alpha, n)
    lo, hi = layout.bands[p]
    w = hi - lo
    base = basis_element(alpha, BasisIndex(p, 0), n)
    shifted = basis_element(alpha, BasisIndex(p, 1), n)
    t = base.grid.times()
    phase = sum(
        np.exp(2j * np.pi * eta * (t - 1.0 / w)) for eta in range(lo, hi)
    ) / np.sqrt(w)
    assert np.max(np.abs(shifted.values - phase)) < 1e-12


def test_element_rejects_out_of_range_tau():
    with pytest.raises(ValueError):
        basis_element(0.5, BasisIndex(4, 99), 64)


# ---------------------------------------------------------------- concentration


def test_concentration_is_monotone_in_cells():
    idx = BasisIndex(5, 3)
    half = concentration(1, idx, 256, cells=0.5)
    full = concentration(1, idx, 256, cells=1.0)
    assert 0 < half < full <= 1.0


def test_concentration_deep_negative_band():
    # regression: |p| used to be fed to the ladder as a frequency
    val = concentration(0.5, BasisIndex(-8, 0), 4096)
    assert 0.8 < val <= 1.0
