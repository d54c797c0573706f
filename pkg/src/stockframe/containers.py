"""Binary and CSV containers for grid signals.

SFR1 (one-dimensional record):
    bytes 0..3   magic "SFR1"
    bytes 4..7   u32 little-endian grid size n
    byte  8      domain flag: 0 = time samples, 1 = spectral coefficients
    then         2*n float64 little-endian, interleaved (re, im)

SFR2 (d-dimensional record):
    bytes 0..3   magic "SFR2"
    bytes 4..7   u32 little-endian dimension d
    then         d u32 little-endian per-axis sizes
    then         u8 domain flag as above
    then         2*prod(sizes) float64 little-endian interleaved (re, im),
                 C order over the axes

A file may hold several records back to back; ``read_sfr1_all`` consumes
them in order.  CSV exports are plain ``index,re,im`` tables.
"""

from __future__ import annotations

import csv
import struct
from typing import BinaryIO, Union

import numpy as np

from .spectral import FrequencyGrid, SpectralSignal, TimeSamples

MAGIC1 = b"SFR1"
MAGIC2 = b"SFR2"

DOMAIN_TIME = 0
DOMAIN_FREQUENCY = 1

Signal = Union[TimeSamples, SpectralSignal]


class ContainerError(ValueError):
    """Malformed or truncated container data."""


def _interleave(values: np.ndarray) -> bytes:
    flat = np.empty(2 * values.size, dtype="<f8")
    flat[0::2] = values.real.ravel()
    flat[1::2] = values.imag.ravel()
    return flat.tobytes()


def _deinterleave(raw: bytes, count: int) -> np.ndarray:
    flat = np.frombuffer(raw, dtype="<f8", count=2 * count)
    return flat[0::2] + 1j * flat[1::2]


def _read_exact(fh: BinaryIO, count: int, what: str) -> bytes:
    raw = fh.read(count)
    if len(raw) != count:
        raise ContainerError(f"truncated container: expected {count} bytes of {what}")
    return raw


def write_sfr1(path, signal: Signal, append: bool = False) -> None:
    if isinstance(signal, TimeSamples):
        domain, values = DOMAIN_TIME, signal.values
    elif isinstance(signal, SpectralSignal):
        domain, values = DOMAIN_FREQUENCY, signal.coeffs
    else:
        raise TypeError(f"expected TimeSamples or SpectralSignal, got {type(signal)!r}")
    mode = "ab" if append else "wb"
    with open(path, mode) as fh:
        fh.write(MAGIC1)
        fh.write(struct.pack("<I", signal.grid.size))
        fh.write(struct.pack("B", domain))
        fh.write(_interleave(values))


def _read_sfr1_record(fh: BinaryIO) -> Signal | None:
    magic = fh.read(4)
    if not magic:
        return None
    if magic != MAGIC1:
        raise ContainerError(f"bad magic {magic!r}, expected {MAGIC1!r}")
    (n,) = struct.unpack("<I", _read_exact(fh, 4, "size"))
    (domain,) = struct.unpack("B", _read_exact(fh, 1, "domain flag"))
    if domain not in (DOMAIN_TIME, DOMAIN_FREQUENCY):
        raise ContainerError(f"unknown domain flag {domain}")
    data = _deinterleave(_read_exact(fh, 16 * n, "payload"), n)
    grid = FrequencyGrid(int(n))
    if domain == DOMAIN_TIME:
        return TimeSamples(grid, data)
    return SpectralSignal(grid, data)


def read_sfr1(path) -> Signal:
    """Read the first (usually only) record of an SFR1 file."""
    with open(path, "rb") as fh:
        record = _read_sfr1_record(fh)
    if record is None:
        raise ContainerError("empty container")
    return record


def read_sfr1_all(path) -> list[Signal]:
    records = []
    with open(path, "rb") as fh:
        while True:
            record = _read_sfr1_record(fh)
            if record is None:
                return records
            records.append(record)


def write_sfr2(path, values: np.ndarray, domain: int, append: bool = False) -> None:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim < 1:
        raise ValueError("expected an array of dimension >= 1")
    if domain not in (DOMAIN_TIME, DOMAIN_FREQUENCY):
        raise ValueError(f"unknown domain flag {domain}")
    mode = "ab" if append else "wb"
    with open(path, mode) as fh:
        fh.write(MAGIC2)
        fh.write(struct.pack("<I", arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
        fh.write(struct.pack("B", domain))
        fh.write(_interleave(arr))


def read_sfr2(path) -> tuple[np.ndarray, int]:
    """Read an SFR2 record; returns (complex array, domain flag)."""
    with open(path, "rb") as fh:
        magic = _read_exact(fh, 4, "magic")
        if magic != MAGIC2:
            raise ContainerError(f"bad magic {magic!r}, expected {MAGIC2!r}")
        (ndim,) = struct.unpack("<I", _read_exact(fh, 4, "dimension"))
        if not 1 <= ndim <= 8:
            raise ContainerError(f"implausible dimension {ndim}")
        shape = struct.unpack(f"<{ndim}I", _read_exact(fh, 4 * ndim, "shape"))
        (domain,) = struct.unpack("B", _read_exact(fh, 1, "domain flag"))
        if domain not in (DOMAIN_TIME, DOMAIN_FREQUENCY):
            raise ContainerError(f"unknown domain flag {domain}")
        count = int(np.prod(shape))
        data = _deinterleave(_read_exact(fh, 16 * count, "payload"), count)
    return data.reshape(shape), domain


def write_csv_signal(path, index: np.ndarray, values: np.ndarray, index_name: str = "index") -> None:
    """Write an (index, re, im) table; floats use exact shortest repr."""
    values = np.asarray(values, dtype=np.complex128)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([index_name, "re", "im"])
        for idx, v in zip(index, values):
            writer.writerow([repr(float(idx)) if isinstance(idx, float) else idx,
                             repr(float(v.real)), repr(float(v.imag))])


def read_csv_signal(path) -> tuple[np.ndarray, np.ndarray]:
    """Read an (index, re, im) table back; returns (index, complex values)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 3:
            raise ContainerError("CSV must have an index,re,im header")
        index, values = [], []
        for row in reader:
            if not row:
                continue
            if len(row) < 3:
                raise ContainerError(f"short CSV row: {row!r}")
            index.append(float(row[0]))
            values.append(complex(float(row[1]), float(row[2])))
    return np.asarray(index), np.asarray(values, dtype=np.complex128)
