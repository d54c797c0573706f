"""Dyadic box tilings of Z^d and the separable frames built on them.

The 1D dyadic partition generalizes by coronae: at level p >= 1 the cube
[-2b, 2b)^d with b = 2**(p-1) splits into 4^d boxes of side b indexed by
ell in {-2,-1,0,1}^d, box_s = [ell_s b, (ell_s+1) b).  The 2^d boxes with
every ell_s in {-1, 0} reproduce the inner cube [-b, b)^d and belong to
finer levels, so level p keeps the 4^d - 2^d = 2^d (2^d - 1) admissible
boxes that tile the shell [-2b, 2b)^d minus [-b, b)^d.  One DC box
[-1, 1)^d with integer lattice {-1, 0}^d plugs the center.  Levels
1..p_max plus DC tile Z^d intersect [-2^p_max, 2^p_max)^d exactly, each
point in exactly one box.

The frame attaches to each box the separable window stack

    Phi_box(omega) = prod_s F_{p,ell_s}(omega_s),
    F_{p,l}(x) = sum_{eta = l b}^{(l+1) b - 1} window(x - mu eta),

with per-axis modulation period m = q b (q translations per lattice node
and axis).  The DC box gets unit normalization, q translations per axis
and shift unit q.  Elements, the Walnut shift sum, certified bounds and
the conjugate-filter dual all mirror the 1D case with nu^d in place of
nu; per-axis separability makes the tail sups factor exactly:

    sup_j prod_s F(j_s - s_s) F(j_s) = prod_s sup_x F(x - s_s) F(x).

Only alpha = 1 admits this construction; the fractional partitions lack
a self-similar corona.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from itertools import product

import numpy as np

from .frame1d import FrameGapError
from .window import Window, band_sum

__all__ = [
    "BoxIndex",
    "NdTiling",
    "admissible_ells",
    "build_tiling",
    "NdFrameSpec",
    "make_nd_frame_spec",
    "to_spectrum_nd",
    "from_spectrum_nd",
    "element_nd",
    "analyze_nd",
    "synthesize_nd",
    "frame_operator_apply_nd",
    "walnut_apply_nd",
    "NdBoundReport",
    "walnut_bounds_nd",
    "NdConjugate",
    "conjugate_filter_nd",
    "reconstruct_nd",
]


def to_spectrum_nd(values: np.ndarray) -> np.ndarray:
    """Forward transform per the 1D convention on every axis (1/n^d factor)."""
    return np.fft.fftshift(np.fft.fftn(values)) / values.size


def from_spectrum_nd(coeffs: np.ndarray) -> np.ndarray:
    """Inverse of to_spectrum_nd; carries no factor."""
    return np.fft.ifftn(np.fft.ifftshift(coeffs)) * coeffs.size

AXIS_CAP = {1: 4096, 2: 256, 3: 32}
COEFF_CAP = 1 << 24


@dataclass(frozen=True)
class BoxIndex:
    """One tile: level p and corner index ell; ell = None is the DC box."""

    p: int
    ell: tuple[int, ...] | None

    def __str__(self) -> str:
        if self.ell is None:
            return "DC"
        return f"p={self.p},ell=({','.join(str(e) for e in self.ell)})"


def admissible_ells(d: int) -> list[tuple[int, ...]]:
    """Corner indices of the shell boxes, lexicographic order."""
    return [ell for ell in product((-2, -1, 0, 1), repeat=d)
            if any(e in (-2, 1) for e in ell)]


@dataclass(frozen=True)
class NdTiling:
    d: int
    p_max: int
    boxes: tuple[BoxIndex, ...]

    def scale(self, box: BoxIndex) -> int:
        """Box side length: 2**(p-1), or 2 for the DC box."""
        if box.ell is None:
            return 2
        return 1 << (box.p - 1)

    def axis_ranges(self, box: BoxIndex) -> list[tuple[int, int]]:
        """Half-open integer extent of the box along each axis."""
        if box.ell is None:
            return [(-1, 1)] * self.d
        b = self.scale(box)
        return [(e * b, (e + 1) * b) for e in box.ell]

    def lattice_axes(self, box: BoxIndex) -> list[np.ndarray]:
        return [np.arange(lo, hi) for lo, hi in self.axis_ranges(box)]

    def point_count(self, box: BoxIndex) -> int:
        return (2 if box.ell is None else self.scale(box)) ** self.d

    def locate(self, point: tuple[int, ...]) -> BoxIndex:
        """The unique box containing an integer point (raises outside)."""
        if len(point) != self.d:
            raise ValueError(f"point has {len(point)} coordinates, tiling is {self.d}-dimensional")
        point = tuple(int(v) for v in point)  # numpy ints lack bit_length
        m = max(max(point), max(-v - 1 for v in point))
        if m < 1:
            return BoxIndex(0, None)
        p = m.bit_length()
        if p > self.p_max:
            raise ValueError(f"point {point} outside the tiled cube [-{1 << self.p_max}, {1 << self.p_max})^d")
        b = 1 << (p - 1)
        return BoxIndex(p, tuple(v // b for v in point))


def build_tiling(d: int, p_max: int) -> NdTiling:
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if p_max < 1:
        raise ValueError(f"p_max must be >= 1, got {p_max}")
    boxes = [BoxIndex(0, None)]
    for p in range(1, p_max + 1):
        boxes.extend(BoxIndex(p, ell) for ell in admissible_ells(d))
    return NdTiling(d, p_max, tuple(boxes))


@dataclass
class NdFrameSpec:
    """Separable frame on an n^d grid; axis window factors stored once.

    Axis factors are keyed by (p, ell_s); the full box stack is their
    outer product, materialized on demand to respect the coefficient
    memory budget at d = 3.
    """

    window: Window
    mu: float
    q: int
    d: int
    n: int
    tiling: NdTiling
    axis_factors: dict[tuple[int, int], np.ndarray] = field(repr=False)
    dc_factor: np.ndarray = field(repr=False)

    @property
    def half(self) -> int:
        return self.n // 2

    @property
    def nu(self) -> float:
        return 1.0 / self.q

    def axis_frequencies(self) -> np.ndarray:
        return np.arange(-self.half, self.half)

    def box_factors(self, box: BoxIndex) -> list[np.ndarray]:
        if box.ell is None:
            return [self.dc_factor] * self.d
        return [self.axis_factors[(box.p, e)] for e in box.ell]

    def box_stack(self, box: BoxIndex) -> np.ndarray:
        return reduce(np.multiply.outer, self.box_factors(box))

    def box_period(self, box: BoxIndex) -> int:
        """Per-axis modulation period m: q per lattice node along the axis."""
        if box.ell is None:
            return self.q
        return self.q * self.tiling.scale(box)

    def box_norm(self, box: BoxIndex) -> float:
        if box.ell is None:
            return 1.0
        return float(self.tiling.scale(box)) ** (self.d / 2.0)

    def sum_of_squares(self) -> np.ndarray:
        h0 = np.zeros((self.n,) * self.d)
        for box in self.tiling.boxes:
            stack = self.box_stack(box)
            h0 += stack * stack
        return h0


def make_nd_frame_spec(window: Window, mu: float, q: int, d: int, n: int,
                       p_max: int | None = None) -> NdFrameSpec:
    if d not in AXIS_CAP:
        raise ValueError(f"dimension must be one of {sorted(AXIS_CAP)}, got {d}")
    if n % 2 != 0 or n < 4:
        raise ValueError(f"grid size must be even and >= 4, got {n}")
    if n > AXIS_CAP[d]:
        raise ValueError(f"axis size capped at {AXIS_CAP[d]} for d = {d}, got {n}")
    if not (isinstance(q, (int, np.integer)) and q >= 1):
        raise ValueError(f"q must be a positive integer, got {q!r}")
    mu = float(mu)
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    half = n // 2
    if p_max is None:
        # smallest p with mu 2^p >= n/2, so the floor cell of any grid
        # frequency lands inside the tiled cube
        p_max = max(1, math.ceil(math.log2(half / mu)))
    tiling = build_tiling(d, p_max)
    omegas = np.arange(-half, half, dtype=float)
    factors: dict[tuple[int, int], np.ndarray] = {}
    for p in range(1, p_max + 1):
        b = 1 << (p - 1)
        for e in (-2, -1, 0, 1):
            factors[(p, e)] = band_sum(window, mu * np.arange(e * b, (e + 1) * b), omegas)
    dc = band_sum(window, mu * np.arange(-1, 1), omegas)
    return NdFrameSpec(window, mu, int(q), d, n, tiling, factors, dc)


def _check_field(spec: NdFrameSpec, fhat: np.ndarray) -> np.ndarray:
    fhat = np.asarray(fhat)
    if fhat.shape != (spec.n,) * spec.d:
        raise ValueError(f"expected shape {(spec.n,) * spec.d}, got {fhat.shape}")
    return fhat.astype(np.complex128, copy=False)


def element_nd(spec: NdFrameSpec, box: BoxIndex, kvec: tuple[int, ...]) -> np.ndarray:
    """Spectral array of one frame element, axes in ascending frequency."""
    m = spec.box_period(box)
    if len(kvec) != spec.d or not all(0 <= k < m for k in kvec):
        raise ValueError(f"kvec {kvec} outside (0..{m - 1})^{spec.d}")
    j = spec.axis_frequencies()
    axes = [np.exp(-2j * np.pi * j * k / m) for k in kvec]
    return reduce(np.multiply.outer, axes) * spec.box_stack(box) / spec.box_norm(box)


def _coeff_budget(spec: NdFrameSpec) -> None:
    total = sum(spec.box_period(box) ** spec.d for box in spec.tiling.boxes)
    if total > COEFF_CAP:
        raise ValueError(
            f"coefficient count {total} exceeds the cap {COEFF_CAP}; "
            f"reduce q or p_max"
        )


def _jmods(spec: NdFrameSpec, m: int) -> list[np.ndarray]:
    jm = spec.axis_frequencies() % m
    return [jm] * spec.d


def _scatter_index(jmods: list[np.ndarray]) -> tuple[np.ndarray, ...]:
    d = len(jmods)
    out = []
    for s, jm in enumerate(jmods):
        shape = [1] * d
        shape[s] = -1
        out.append(jm.reshape(shape))
    return tuple(out)


def _box_analyze(spec: NdFrameSpec, fhat: np.ndarray, box: BoxIndex,
                 stack: np.ndarray) -> np.ndarray:
    m = spec.box_period(box)
    vals = fhat * stack
    folded = np.zeros((m,) * spec.d, dtype=np.complex128)
    np.add.at(folded, _scatter_index(_jmods(spec, m)), vals)
    return (m ** spec.d) * np.fft.ifftn(folded) / spec.box_norm(box)


def _box_synthesize(spec: NdFrameSpec, cbox: np.ndarray, box: BoxIndex,
                    stack: np.ndarray) -> np.ndarray:
    spread = np.fft.fftn(cbox)[np.ix_(*_jmods(spec, spec.box_period(box)))]
    return stack * spread / spec.box_norm(box)


def analyze_nd(spec: NdFrameSpec, fhat: np.ndarray) -> dict[BoxIndex, np.ndarray]:
    """<f, element> over all boxes; input is the spectral field on the grid."""
    fhat = _check_field(spec, fhat)
    _coeff_budget(spec)
    return {box: _box_analyze(spec, fhat, box, spec.box_stack(box))
            for box in spec.tiling.boxes}


def synthesize_nd(spec: NdFrameSpec, coeffs: dict[BoxIndex, np.ndarray],
                  stacks: dict[BoxIndex, np.ndarray] | None = None) -> np.ndarray:
    acc = np.zeros((spec.n,) * spec.d, dtype=np.complex128)
    for box, cbox in coeffs.items():
        stack = spec.box_stack(box) if stacks is None else stacks[box]
        acc += _box_synthesize(spec, cbox, box, stack)
    return acc


def frame_operator_apply_nd(spec: NdFrameSpec, fhat: np.ndarray) -> np.ndarray:
    return synthesize_nd(spec, analyze_nd(spec, fhat))


def _axis_extent(arr: np.ndarray) -> tuple[int, int] | None:
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return None
    return int(nz[0]), int(nz[-1])


def _axis_limits(spec: NdFrameSpec, box: BoxIndex, k_max: int | None) -> list[int] | None:
    step = spec.q * spec.tiling.scale(box) if box.ell is not None else spec.q
    limits = []
    for fac in spec.box_factors(box):
        ext = _axis_extent(fac)
        if ext is None:
            return None
        lim = (ext[1] - ext[0]) // step
        if k_max is not None:
            lim = min(lim, k_max)
        limits.append(lim)
    return limits


def _shift_nd(values: np.ndarray, shifts: tuple[int, ...]) -> np.ndarray:
    out = np.zeros_like(values)
    src, dst = [], []
    for s, n in zip(shifts, values.shape):
        if abs(s) >= n:
            return out
        if s >= 0:
            dst.append(slice(s, n))
            src.append(slice(0, n - s))
        else:
            dst.append(slice(0, n + s))
            src.append(slice(-s, n))
    out[tuple(dst)] = values[tuple(src)]
    return out


def walnut_apply_nd(spec: NdFrameSpec, fhat: np.ndarray,
                    synthesis_stacks: dict[BoxIndex, np.ndarray] | None = None,
                    k_max: int | None = None) -> np.ndarray:
    """Direct shift-sum evaluation of S f; matches analyze/synthesize."""
    fhat = _check_field(spec, fhat)
    acc = np.zeros((spec.n,) * spec.d, dtype=np.complex128)
    for box in spec.tiling.boxes:
        stack = spec.box_stack(box)
        psi = stack if synthesis_stacks is None else synthesis_stacks[box]
        base = fhat * stack
        step = spec.box_period(box)
        limits = _axis_limits(spec, box, k_max)
        if limits is None:
            continue
        for kvec in product(*(range(-l, l + 1) for l in limits)):
            shifts = tuple(k * step for k in kvec)
            acc += _shift_nd(base, shifts) * psi
    return (spec.q ** spec.d) * acc


@dataclass(frozen=True)
class NdBoundReport:
    h0_inf: float
    h0_sup: float
    h_tail: float
    nu: float
    d: int

    @property
    def lower(self) -> float:
        return max(0.0, (self.h0_inf - self.h_tail) / self.nu ** self.d)

    @property
    def upper(self) -> float:
        return (self.h0_sup + self.h_tail) / self.nu ** self.d


def walnut_bounds_nd(spec: NdFrameSpec, k_max: int | None = None) -> NdBoundReport:
    """Certified bounds; separability turns the tail into a product formula.

    With per-axis sups a_s(k) = sup_x F_s(x - k step) F_s(x), the box tail
    sum_{k != 0} prod_s a_s(|k_s|) equals prod_s (a_s(0) + 2 sum_{k>=1})
    minus prod_s a_s(0) exactly.
    """
    if k_max is None:
        k_max = math.ceil(spec.n / (2 * spec.q))
    h0 = spec.sum_of_squares()
    h_tail = 0.0
    for box in spec.tiling.boxes:
        step = spec.box_period(box)
        limits = _axis_limits(spec, box, k_max)
        if limits is None:
            continue
        diag, tails = [], []
        for fac, lim in zip(spec.box_factors(box), limits):
            diag.append(float(np.max(fac * fac)))
            tails.append(2.0 * sum(float(np.max(fac[k * step:] * fac[:-k * step]))
                                   for k in range(1, lim + 1) if k * step < spec.n))
        # expand prod(a + t) - prod(a) term by term: the tails can sit far
        # below one ulp of the diagonal, where the factored form cancels
        for mask in range(1, 1 << spec.d):
            term = 1.0
            for s in range(spec.d):
                term *= tails[s] if mask >> s & 1 else diag[s]
            h_tail += term
    return NdBoundReport(float(h0.min()), float(h0.max()), h_tail,
                         spec.nu, spec.d)


@dataclass
class NdConjugate:
    """Conjugate-filter dual: Omega_box = nu^d Phi_box / H0, built on demand."""

    spec: NdFrameSpec = field(repr=False)
    h0: np.ndarray = field(repr=False)

    def band(self, box: BoxIndex) -> np.ndarray:
        return (self.spec.nu ** self.spec.d) * self.spec.box_stack(box) / self.h0

    def partition_residual(self) -> float:
        """max |sum_box Omega Phi - nu^d|."""
        acc = np.zeros((self.spec.n,) * self.spec.d)
        for box in self.spec.tiling.boxes:
            acc += self.band(box) * self.spec.box_stack(box)
        return float(np.max(np.abs(acc - self.spec.nu ** self.spec.d)))


def conjugate_filter_nd(spec: NdFrameSpec, floor: float = 1e-14) -> NdConjugate:
    h0 = spec.sum_of_squares()
    low = float(h0.min())
    if low <= floor:
        flat = int(np.argmin(h0))
        where = np.unravel_index(flat, h0.shape)
        freq = tuple(int(w) - spec.half for w in where)
        raise FrameGapError(
            f"stack sum of squares reaches {low:.3e} <= {floor:g} "
            f"(worst at frequency {freq}); the system is not a frame on this grid"
        )
    return NdConjugate(spec, h0)


def reconstruct_nd(spec: NdFrameSpec, fhat: np.ndarray,
                   conj: NdConjugate | None = None) -> tuple[np.ndarray, float]:
    """Analyze against the conjugate family, synthesize with the primal one."""
    fhat = _check_field(spec, fhat)
    _coeff_budget(spec)
    if conj is None:
        conj = conjugate_filter_nd(spec)
    coeffs = {box: _box_analyze(spec, fhat, box, conj.band(box))
              for box in spec.tiling.boxes}
    rec = synthesize_nd(spec, coeffs)
    scale = float(np.linalg.norm(fhat)) or 1.0
    return rec, float(np.linalg.norm(rec - fhat)) / scale
