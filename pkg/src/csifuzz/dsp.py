"""
Shared numerics: unnormalized DFT/IDFT with explicit zero padding, Q1.15
fixed-point tap quantization, and seeded RNG substreams.

Transform convention: forward X[k] = sum_m x[m] exp(-2j*pi*k*m/n) with no
normalization; the inverse carries the 1/n factor, so idft(dft(x, n))
returns x zero-padded to length n.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

Q15_SCALE = 1 << 15           # 15 fractional bits
TAP_CODE_MIN = -(1 << 14)     # decodes to -0.5
TAP_CODE_MAX = (1 << 14) - 1  # decodes to 0.5 - 2**-15


class TapAxis(Enum):
    REAL = 0
    IMAG = 1


@dataclass(frozen=True)
class FixedPointTap:
    """Axis-aligned complex tap stored as a signed Q1.15 code.

    The decoded component is code / 2**15 and lies in [-0.5, 0.5).
    """

    axis: TapAxis
    code: int

    def __post_init__(self):
        if not TAP_CODE_MIN <= self.code <= TAP_CODE_MAX:
            raise ValueError(
                f"tap code {self.code} outside [{TAP_CODE_MIN}, {TAP_CODE_MAX}]"
            )

    def decode(self) -> complex:
        mag = self.code / Q15_SCALE
        if self.axis is TapAxis.REAL:
            return complex(mag, 0.0)
        return complex(0.0, mag)


def _as_complex_vec(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(x.view(np.float64))):
        raise ValueError(f"{name} contains NaN or Inf")
    return x


def dft(x, n: int) -> np.ndarray:
    """Forward DFT of x zero-padded to length n (unnormalized)."""
    x = _as_complex_vec(x, "x")
    if n <= 0:
        raise ValueError(f"DFT size must be positive, got {n}")
    if n < x.size:
        raise ValueError(f"DFT size {n} shorter than input length {x.size}")
    return np.fft.fft(x, n)


def idft(X) -> np.ndarray:
    """Inverse DFT (carries the 1/n factor)."""
    X = _as_complex_vec(X, "X")
    if X.size == 0:
        raise ValueError("IDFT input must be non-empty")
    return np.fft.ifft(X)


def quantize_tap(value: complex, axis: TapAxis) -> FixedPointTap:
    """Quantize an axis-aligned complex value to a Q1.15 tap code.

    Round to nearest with ties away from zero; codes saturate at the top of
    the range (16383). The off-axis component must be exactly zero and the
    on-axis component must lie in [-0.5, 0.5).
    """
    value = complex(value)
    if axis is TapAxis.REAL:
        comp, off = value.real, value.imag
    else:
        comp, off = value.imag, value.real
    if off != 0.0:
        raise ValueError(f"off-axis component must be zero, got {value} on {axis.name}")
    if not np.isfinite(comp):
        raise ValueError("tap component must be finite")
    if not -0.5 <= comp < 0.5:
        raise ValueError(f"tap component {comp} outside [-0.5, 0.5)")
    code = int(np.floor(abs(comp) * Q15_SCALE + 0.5))
    if comp < 0:
        code = -code
    code = min(code, TAP_CODE_MAX)
    return FixedPointTap(axis=axis, code=code)


def substream(seed, *path: int) -> np.random.Generator:
    """Generator for a reproducible substream keyed by (seed, *path).

    Passing an existing Generator returns it unchanged, so APIs can accept
    either a seed or a live stream.
    """
    if isinstance(seed, np.random.Generator):
        if path:
            raise ValueError("cannot derive a keyed substream from a live Generator")
        return seed
    return np.random.default_rng([int(seed), *map(int, path)])
