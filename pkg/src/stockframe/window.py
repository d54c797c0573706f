"""Spectral windows and per-band window stacks.

A window is described by its frequency profile phihat (real, nonnegative,
vectorized) plus, when available, a closed-form time profile.  The stack
of a window over a partition collects, for every signed band p, the band
sum

    Phi_p(omega) = sum_{eta in band(p)} phihat(omega - mu * eta)

evaluated on the grid frequencies; mu scales the integer band lattice.
The stack is what every frame computation consumes: admissibility
scans, sums of squares (frame-bound estimates), decay envelopes and the
conjugate filters all read these arrays.

Profiles are even functions evaluated through x**2, so the mirror band
arrays are bit-for-bit frequency reversals of each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .partition import AlphaPartition, partition_covering
from .spectral import FrequencyGrid

__all__ = [
    "Window",
    "gaussian_window",
    "truncated_gaussian",
    "table_window",
    "WindowStack",
    "build_stack",
    "AdmissibilityReport",
    "admissibility",
    "StackBounds",
    "stack_sum_bounds",
    "gaussian_floor",
    "wiener_upper_bound",
    "DecayFit",
    "decay_fit",
    "band_decay_profile",
    "band_mass_outside",
]

# Profile values below this are treated as zero when counting overlaps.
OVERLAP_THRESHOLD = 1e-12


@dataclass(frozen=True)
class Window:
    """Frequency-profile window.

    freq_profile: vectorized map omega -> phihat(omega), real, in [0, 1].
    time_profile: closed-form time evaluator or None.
    support_radius: smallest L with phihat = 0 outside [-L, L]; inf when
        the profile never vanishes (Gaussian).
    """

    kind: str
    freq_profile: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    time_profile: Callable[[np.ndarray], np.ndarray] | None = field(repr=False)
    support_radius: float

    @property
    def compact(self) -> bool:
        return math.isfinite(self.support_radius)


_GAUSS_AMP = 1.0 / math.sqrt(2.0)


def _gauss(x):
    return _GAUSS_AMP * np.exp(-np.pi * np.square(x))


def gaussian_window() -> Window:
    """Self-dual normalized Gaussian: both profiles are 2**-0.5 exp(-pi x^2)."""
    return Window("gaussian", _gauss, _gauss, math.inf)


def truncated_gaussian(eps: float) -> Window:
    """Gaussian profile cut to [-1-eps, 1+eps] with a cubic smoothstep blend.

    Identical to the Gaussian on [-1, 1], exactly zero outside the
    support, C^1 at both blend ends.  No closed-form time profile.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")

    def profile(x):
        x = np.asarray(x, dtype=float)
        mag = np.abs(x)
        u = np.clip((mag - 1.0) / eps, 0.0, 1.0)
        taper = 1.0 + u * u * (2.0 * u - 3.0)  # 1 -> 0 on the blend
        return np.where(mag >= 1.0 + eps, 0.0, _gauss(x) * taper)

    return Window(f"truncated_gaussian({eps:g})", profile, None, 1.0 + eps)


def table_window(omegas, values, kind: str = "table") -> Window:
    """Window interpolated linearly from a sample table, zero outside it."""
    omegas = np.asarray(omegas, dtype=float)
    values = np.asarray(values, dtype=float)
    if omegas.ndim != 1 or omegas.shape != values.shape or omegas.size < 2:
        raise ValueError("need matching 1-d tables with at least two points")
    if np.any(np.diff(omegas) <= 0):
        raise ValueError("table abscissae must be strictly increasing")
    if np.any(values < 0):
        raise ValueError("profile values must be nonnegative")

    def profile(x):
        return np.interp(np.asarray(x, dtype=float), omegas, values, left=0.0, right=0.0)

    radius = float(max(abs(omegas[0]), abs(omegas[-1])))
    return Window(kind, profile, None, radius)


@dataclass
class WindowStack:
    """Band sums of a window over a partition, sampled on a grid."""

    window: Window
    mu: float
    grid: FrequencyGrid
    partition: AlphaPartition
    bands: dict[int, np.ndarray] = field(repr=False)

    @property
    def p_list(self) -> list[int]:
        return sorted(self.bands)

    def band(self, p: int) -> np.ndarray:
        return self.bands[p]

    def sum_of_squares(self) -> np.ndarray:
        """H0 = sum_p Phi_p^2 on the grid."""
        out = np.zeros(self.grid.size)
        for arr in self.bands.values():
            out += arr * arr
        return out

    def lattice(self, p: int) -> np.ndarray:
        """Scaled band lattice mu * band(p), ascending."""
        return self.mu * self.partition.band_frequencies(p)

    def band_hull(self, p: int) -> tuple[float, float]:
        """Closed hull [min, max] of the scaled band lattice."""
        lat = self.lattice(p)
        return float(lat[0]), float(lat[-1])


def band_sum(window: Window, lattice: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """sum over the lattice of phihat(omega - point), vectorized."""
    out = np.zeros(omegas.shape, dtype=float)
    for point in lattice:
        out += window.freq_profile(omegas - point)
    return out


def build_stack(window: Window, mu: float, alpha, n: int) -> WindowStack:
    """Stack over the grid of size n.

    The partition is extended until its scaled lattice passes the grid
    edge, and every signed p with mu * start(|p|) <= n/2 gets a band, so
    each grid row (Nyquist included) has a lattice point within mu.
    """
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    grid = FrequencyGrid(n)
    limit = int(math.floor(grid.half / mu)) + 1
    partition = partition_covering(alpha, limit + 1)
    omegas = grid.frequencies().astype(float)
    bands: dict[int, np.ndarray] = {}
    for iv in partition.intervals:
        if mu * iv.start > grid.half:
            break
        for p in ({0} if iv.p == 0 else {iv.p, -iv.p}):
            sign = 1 if p >= 0 else -1
            lattice = mu * (sign * iv.frequencies())
            bands[p] = band_sum(window, lattice, omegas)
    return WindowStack(window, mu, grid, partition, bands)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Grid scan of the three window-stack conditions.

    c1: largest band value anywhere (uniform bound).
    c2: largest number of bands simultaneously above the overlap threshold.
    c3: worst-case best band value (inf over omega of max_p Phi_p).
    passed: c3 > 0, i.e. no spectral hole on the grid.
    painless: the window is compactly supported, so the vanishing-overlap
        argument applies once 1/q < 1/(2L + mu); a Gaussian reports
        passed=True, painless=False.
    """

    c1: float
    c2: int
    c3: float
    passed: bool
    painless: bool


def admissibility(stack: WindowStack, threshold: float = OVERLAP_THRESHOLD) -> AdmissibilityReport:
    mat = np.stack([stack.bands[p] for p in stack.p_list])
    c1 = float(mat.max())
    c2 = int((mat > threshold).sum(axis=0).max())
    c3 = float(mat.max(axis=0).min())
    return AdmissibilityReport(c1, c2, c3, c3 > 0.0, stack.window.compact)


@dataclass(frozen=True)
class StackBounds:
    """Extremes of H0 = sum_p Phi_p^2 over the grid."""

    a_low: float
    b_high: float


def stack_sum_bounds(stack: WindowStack) -> StackBounds:
    h0 = stack.sum_of_squares()
    return StackBounds(float(h0.min()), float(h0.max()))


def gaussian_floor(mu: float) -> float:
    """Proven lower bound (1/2) exp(-2 pi mu^2) for the Gaussian stack's H0."""
    return 0.5 * math.exp(-2.0 * math.pi * mu * mu)


def wiener_upper_bound(window: Window, mu: float, samples_per_cell: int = 64) -> float:
    """((1/mu + 1) * W)^2 with W the amalgam norm sum_k sup_{[k,k+1)} phihat.

    The per-cell sup is sampled; cells are accumulated outward until the
    profile leaves its support or falls below 1e-300.
    """
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    total = 0.0
    k = 0
    while True:
        cells_alive = False
        for sign in ((1,) if k == 0 else (1, -1)):
            lo = sign * k if sign > 0 else -(k + 1)
            pts = lo + np.arange(samples_per_cell) / samples_per_cell
            sup = float(window.freq_profile(pts).max())
            if sup > 1e-300:
                cells_alive = True
            total += sup
        if not cells_alive and k > window.support_radius:
            break
        if math.isfinite(window.support_radius) and k > window.support_radius + 1:
            break
        if k > 64:  # profile effectively dead long before this
            break
        k += 1
    return ((1.0 / mu + 1.0) * total) ** 2


@dataclass(frozen=True)
class DecayFit:
    """Power-law envelope fit phihat(omega) ~ c / (1 + |omega|)^n on [1, radius]."""

    n_est: float
    c_est: float


def decay_fit(window: Window, radius: float, n_samples: int = 256) -> DecayFit:
    """Least-squares fit of log phihat against log(1 + omega).

    Zero samples are skipped; a profile that is zero over the whole fit
    range (compact support inside the radius) reports n_est = inf.
    """
    if radius <= 1:
        raise ValueError(f"fit radius must exceed 1, got {radius}")
    omegas = np.linspace(1.0, radius, n_samples)
    vals = np.asarray(window.freq_profile(omegas), dtype=float)
    keep = vals > 0
    if keep.sum() < 2:
        return DecayFit(math.inf, math.nan)
    slope, intercept = np.polyfit(np.log1p(omegas[keep]), np.log(vals[keep]), 1)
    return DecayFit(float(-slope), float(math.exp(intercept)))


def _hull_distance(omegas: np.ndarray, hull: tuple[float, float]) -> np.ndarray:
    lo, hi = hull
    return np.maximum(0.0, np.maximum(lo - omegas, omegas - hi))


def band_decay_profile(stack: WindowStack, p: int, n_decay: float, c_decay: float) -> float:
    """Empirical envelope constant of a band against a reference power law.

    Returns max over the grid of Phi_p(omega) (1 + dist(omega, hull))^(n_decay-1)
    divided by c_decay; dist is distance to the closed hull of the scaled
    band lattice (zero inside the band).  Across p the values stay
    comparable when the window really decays at order n_decay.
    """
    if not math.isfinite(n_decay):
        raise ValueError("need a finite decay order (fit one with decay_fit)")
    omegas = stack.grid.frequencies().astype(float)
    dist = _hull_distance(omegas, stack.band_hull(p))
    env = stack.bands[p] * (1.0 + dist) ** (n_decay - 1.0)
    return float(env.max() / c_decay)


def band_mass_outside(stack: WindowStack, p: int, factor: float = 3.0) -> float:
    """Fraction of a band's grid mass outside a widened hull neighborhood."""
    omegas = stack.grid.frequencies().astype(float)
    lo, hi = stack.band_hull(p)
    pad = factor * max(hi - lo, stack.mu)
    inside = (omegas >= lo - pad) & (omegas <= hi + pad)
    total = float(stack.bands[p].sum())
    if total == 0.0:
        return 0.0
    return float(stack.bands[p][~inside].sum() / total)
