"""Periodized signal model on a uniform grid.

Signals live on the unit circle: a grid of even size ``n`` carries time
samples at t = 0, 1/n, ..., (n-1)/n and spectral coefficients at the
integer frequencies j = -n/2, ..., n/2 - 1 (ascending storage order).
The forward transform carries the 1/n factor,

    coeff(j) = (1/n) * sum_m values[m] * exp(-2*pi*i*j*m/n),

so the coefficient array of a trigonometric polynomial holds its
coefficients verbatim, and the spectral dot product equals the L2([0,1))
inner product of the underlying polynomials.  The inverse transform
carries no factor.  Consequences used throughout the package:

    sum_m x[m] * conj(y[m])  =  n * sum_j xhat[j] * conj(yhat[j])

and the L2 norm of a signal is sqrt((1/n) sum |values|^2) in time,
sqrt(sum |coeff|^2) in frequency.

Frequency content that an operation would move outside the grid is
dropped; operations that can drop content report the dropped mass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FrequencyGrid",
    "TimeSamples",
    "SpectralSignal",
    "to_spectrum",
    "from_spectrum",
    "poisson_residual",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid of even size ``n``, frequencies -n/2 .. n/2-1."""

    size: int

    def __post_init__(self):
        n = self.size
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise TypeError(f"grid size must be an integer, got {n!r}")
        if n < 4 or n % 2:
            raise ValueError(f"grid size must be even and >= 4, got {n}")

    @property
    def half(self) -> int:
        return self.size // 2

    def frequencies(self) -> np.ndarray:
        """Integer frequencies in storage order (ascending)."""
        return np.arange(-self.half, self.half)

    def times(self) -> np.ndarray:
        """Sample positions t = m/n on [0, 1)."""
        return np.arange(self.size) / self.size

    def index_of(self, j: int) -> int:
        """Storage index of frequency j."""
        if not -self.half <= j < self.half:
            raise ValueError(f"frequency {j} outside grid of size {self.size}")
        return int(j) + self.half


def _as_complex(values, n: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.shape != (n,):
        raise ValueError(f"expected shape ({n},), got {arr.shape}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSamples:
    """Complex samples at t = m/n.  Values are frozen after construction."""

    grid: FrequencyGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _as_complex(self.values, self.grid.size))

    def dot(self, other: "TimeSamples") -> complex:
        """Plain sample dot product sum x * conj(y)."""
        return complex(np.vdot(other.values, self.values))

    def norm(self) -> float:
        """L2([0,1)) norm: sqrt of the mean squared modulus."""
        return float(np.linalg.norm(self.values) / np.sqrt(self.grid.size))


@dataclass(frozen=True)
class SpectralSignal:
    """Spectral coefficients on a grid, stored in ascending frequency order."""

    grid: FrequencyGrid
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_complex(self.coeffs, self.grid.size))

    def __getitem__(self, j: int) -> complex:
        return complex(self.coeffs[self.grid.index_of(j)])

    def dot(self, other: "SpectralSignal") -> complex:
        """L2([0,1)) inner product of the underlying polynomials."""
        return complex(np.vdot(other.coeffs, self.coeffs))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def to_spectrum(x: TimeSamples) -> SpectralSignal:
    """Forward transform; carries the 1/n factor."""
    n = x.grid.size
    coeffs = np.fft.fftshift(np.fft.fft(x.values)) / n
    return SpectralSignal(x.grid, coeffs)


def from_spectrum(s: SpectralSignal) -> TimeSamples:
    """Inverse transform; carries no factor."""
    n = s.grid.size
    values = np.fft.ifft(np.fft.ifftshift(s.coeffs)) * n
    return TimeSamples(s.grid, values)


def poisson_residual(time_profile, freq_profile, gamma: float, x, n_terms: int = 12):
    """Absolute defect of the periodization identity

        gamma * sum_m phi(x + gamma*m)  =  sum_m phihat(m/gamma) e^{2 pi i m x / gamma}

    with both sides truncated to |m| <= n_terms.  ``x`` may be a scalar or an
    array; the residual has the same shape.  Meaningful only for profiles
    decaying fast enough that the truncation is below the target tolerance.
    """
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if time_profile is None:
        raise ValueError("window has no closed-form time evaluator")
    xs = np.asarray(x, dtype=float)
    ms = np.arange(-n_terms, n_terms + 1)
    lhs = gamma * np.sum(time_profile(xs[..., None] + gamma * ms), axis=-1)
    rhs = np.sum(
        freq_profile(ms / gamma) * np.exp(2j * np.pi * ms * xs[..., None] / gamma),
        axis=-1,
    )
    return np.abs(lhs - rhs)
