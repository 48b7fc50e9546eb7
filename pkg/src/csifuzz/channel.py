"""Environment models: static multipath FIR, AWGN, per-frame drift.

Delay budget: the cyclic prefix must cover the environment delay spread plus
the 2 extra taps the transmit FIR contributes, so cir length is capped at
cp_length - 2 = 14.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dsp import _as_complex_vec, dft, substream
from .errors import ConfigError

MAX_ENV_TAPS = 14  # cp length 16 minus the 2 transmit FIR taps

# short coupling CIR standing in for a direct RX/TX antenna loopback path
LOOPBACK_CIR = (1.0, 0.05 - 0.02j)


@dataclass(frozen=True)
class ChannelModel:
    """Static or quasi-static FIR environment with additive Gaussian noise."""

    cir: tuple = (1.0,)
    noise_variance: float = 0.0
    drift: float = 0.0

    def __post_init__(self):
        cir = tuple(complex(c) for c in self.cir)
        if not 1 <= len(cir) <= MAX_ENV_TAPS:
            raise ConfigError(
                f"environment cir must have 1..{MAX_ENV_TAPS} taps, got {len(cir)}"
            )
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in cir):
            raise ConfigError("environment cir must be finite")
        if not 0 <= float(self.noise_variance) < np.inf:
            raise ConfigError(f"noise_variance must be >= 0, got {self.noise_variance}")
        if not 0 <= float(self.drift) < np.inf:
            raise ConfigError(f"drift must be >= 0, got {self.drift}")
        object.__setattr__(self, "cir", cir)
        object.__setattr__(self, "noise_variance", float(self.noise_variance))
        object.__setattr__(self, "drift", float(self.drift))

    def cir_array(self) -> np.ndarray:
        return np.asarray(self.cir, dtype=np.complex128)


def propagate(frame, ch: ChannelModel, seed):
    """Convolve with the environment CIR and add complex Gaussian noise.

    Accepts an OfdmFrame (returns a frame with received samples) or a raw
    sample vector (returns a vector). Noise draws are sequential in sample
    order (interleaved re/im), so two signals differing only in length share
    their common-prefix noise when given the same seed.
    """
    if hasattr(frame, "samples"):
        from dataclasses import replace as _replace

        return _replace(frame, samples=propagate(frame.samples, ch, seed))
    x = _as_complex_vec(frame, "samples")
    if x.size == 0:
        raise ValueError("samples must be non-empty")
    y = np.convolve(x, ch.cir_array(), mode="full")
    if ch.noise_variance > 0:
        rng = substream(seed)
        z = rng.standard_normal(2 * y.size)
        y = y + (z[0::2] + 1j * z[1::2]) * np.sqrt(ch.noise_variance / 2.0)
    return y


def env_response(ch: ChannelModel, dft_size: int) -> np.ndarray:
    """Frequency response of the environment CIR over all dft_size bins."""
    if dft_size < len(ch.cir):
        raise ValueError(f"DFT size {dft_size} shorter than cir")
    return dft(ch.cir_array(), dft_size)


def drift_step(ch: ChannelModel, seed, frame_index: int) -> ChannelModel:
    """One quasi-static step: perturb each tap by CN(0, (drift*|tap|)^2).

    Deterministic per (seed, frame_index); drift = 0 returns the model as is.
    """
    if ch.drift == 0.0:
        return ch
    rng = substream(seed, frame_index)
    taps = ch.cir_array()
    scale = ch.drift * np.abs(taps) / np.sqrt(2.0)
    z = rng.standard_normal(2 * taps.size)
    taps = taps + (z[0::2] + 1j * z[1::2]) * scale
    return replace(ch, cir=tuple(taps))


def deep_fade_cir(k0: int, fft_size: int = 64) -> tuple:
    """Two-tap environment whose response is exactly zero on bin k0."""
    return (1.0, -np.exp(2j * np.pi * k0 / fft_size))
