"""
Transmitter-side CSI fuzzer: a 3-tap FIR that imposes the artificial CIR
[1, c1, c2] on outgoing time-domain samples. c1 and c2 are constrained to be
purely real or purely imaginary with the nonzero component in [-0.5, 0.5).
The undelayed path has coefficient exactly 1, so the original sample stream
passes through with zero added delay.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dsp import FixedPointTap, TapAxis, dft, quantize_tap, substream

TAP_LIMIT = 0.5


def _check_tap(c: complex, name: str) -> None:
    if not (np.isfinite(c.real) and np.isfinite(c.imag)):
        raise ValueError(f"{name} must be finite")
    if c.real != 0.0 and c.imag != 0.0:
        raise ValueError(f"{name} must be purely real or purely imaginary, got {c}")
    comp = c.real if c.imag == 0.0 else c.imag
    if not -TAP_LIMIT <= comp < TAP_LIMIT:
        raise ValueError(f"{name} component {comp} outside [-0.5, 0.5)")


@dataclass(frozen=True)
class FuzzerTaps:
    """The (c1, c2) tap pair. When disabled the effective CIR is [1, 0, 0]."""

    c1: complex = 0j
    c2: complex = 0j
    enabled: bool = True

    def __post_init__(self):
        object.__setattr__(self, "c1", complex(self.c1))
        object.__setattr__(self, "c2", complex(self.c2))
        _check_tap(self.c1, "c1")
        _check_tap(self.c2, "c2")

    def cir(self) -> np.ndarray:
        """Effective artificial CIR [1, c1, c2] (identity when disabled)."""
        if not self.enabled:
            return np.array([1.0, 0.0, 0.0], dtype=np.complex128)
        return np.array([1.0, self.c1, self.c2], dtype=np.complex128)

    def quantized(self) -> tuple[FixedPointTap, FixedPointTap]:
        c1, c2 = (self.cir()[1], self.cir()[2])
        return (_quantize_auto(c1), _quantize_auto(c2))


IDENTITY_TAPS = FuzzerTaps(0j, 0j, enabled=False)


def _quantize_auto(c: complex) -> FixedPointTap:
    axis = TapAxis.IMAG if c.imag != 0.0 else TapAxis.REAL
    return quantize_tap(c, axis)


def apply_fir(x, taps: FuzzerTaps) -> np.ndarray:
    """Run samples through the fuzzer FIR.

    y[n] = x[n] + c1*x[n-1] + c2*x[n-2]; the full convolution tail is kept,
    so the output is two samples longer than the input.
    """
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.size == 0:
        raise ValueError("input must be non-empty")
    return np.convolve(x, taps.cir(), mode="full")


def apply_fir_switched(x, taps_a: FuzzerTaps, taps_b: FuzzerTaps, switch_idx: int) -> np.ndarray:
    """FIR with a mid-stream coefficient change at sample switch_idx.

    Models a register update landing in the middle of a frame: samples
    before switch_idx are filtered with taps_a, the rest with taps_b, with
    the delay line carried across the boundary. Used by the scan experiment's
    mid-frame mode; frame-atomic updates are the default everywhere else.
    """
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    if x.size == 0:
        raise ValueError("input must be non-empty")
    if not 0 <= switch_idx <= x.size:
        raise ValueError(f"switch index {switch_idx} outside [0, {x.size}]")
    xp = np.concatenate([np.zeros(2, dtype=np.complex128), x, np.zeros(2, dtype=np.complex128)])
    y = xp[2:] + 0j
    n = np.arange(y.size)
    c1 = np.where(n < switch_idx, taps_a.cir()[1], taps_b.cir()[1])
    c2 = np.where(n < switch_idx, taps_a.cir()[2], taps_b.cir()[2])
    return y + c1 * xp[1:-1] + c2 * xp[:-2]


def artificial_response(taps: FuzzerTaps, dft_size: int) -> np.ndarray:
    """Frequency response of the artificial CIR over all dft_size bins."""
    if dft_size < 3:
        raise ValueError(f"DFT size must be at least 3, got {dft_size}")
    return dft(taps.cir(), dft_size)


@dataclass(frozen=True)
class FuzzerRegister:
    """32-bit register word packing both quantized taps.

    Layout: bit 31 = c1 axis flag (1 = imaginary), bits 30..16 = c1 code as
    15-bit two's complement, bit 15 = c2 axis flag, bits 14..0 = c2 code.
    The layout is fixed so register words in traces stay stable.
    """

    word: int

    def __post_init__(self):
        if not 0 <= self.word < (1 << 32):
            raise ValueError(f"register word {self.word:#x} is not a 32-bit value")

    def hex(self) -> str:
        return f"0x{self.word:08x}"


def pack_register(c1: FixedPointTap, c2: FixedPointTap) -> FuzzerRegister:
    word = (
        (c1.axis.value << 31)
        | ((c1.code & 0x7FFF) << 16)
        | (c2.axis.value << 15)
        | (c2.code & 0x7FFF)
    )
    return FuzzerRegister(word)


def unpack_register(reg: FuzzerRegister) -> tuple[FixedPointTap, FixedPointTap]:
    def sext15(v: int) -> int:
        return v - (1 << 15) if v & (1 << 14) else v

    c1 = FixedPointTap(TapAxis((reg.word >> 31) & 1), sext15((reg.word >> 16) & 0x7FFF))
    c2 = FixedPointTap(TapAxis((reg.word >> 15) & 1), sext15(reg.word & 0x7FFF))
    return c1, c2


def taps_register(taps: FuzzerTaps) -> FuzzerRegister:
    """Quantize both taps and pack them into a register word."""
    return pack_register(*taps.quantized())


def random_taps(seed, low: float = -0.5, high: float = 0.5) -> FuzzerTaps:
    """Draw random legal taps: uniform axis choice, uniform component in [low, high).

    Deterministic per seed; seed may also be a live Generator for use in
    per-frame schedules.
    """
    if not (-TAP_LIMIT <= low < high <= TAP_LIMIT):
        raise ValueError(f"tap range [{low}, {high}) is empty or outside [-0.5, 0.5]")
    rng = substream(seed)

    def draw() -> complex:
        comp = rng.uniform(low, high)
        return complex(0.0, comp) if rng.integers(2) else complex(comp, 0.0)

    return FuzzerTaps(c1=draw(), c2=draw())
