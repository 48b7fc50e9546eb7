"""Frame-level OFDM pipeline: modulate, channel-estimate, demodulate.

A frame is 2 training symbols then data symbols, each cp+64 samples, run
through the transmit FIR as a whole (so even identity taps leave a 2-sample
tail). Time-domain scaling puts mean sample power at 1, which makes
SNR = 1 / noise variance per complex sample.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..dsp import dft, idft
from ..fuzzer import FuzzerTaps, apply_fir
from .coding import N_TAIL, conv_encode, deinterleave, interleave, viterbi_decode
from .modem import ERASURE_CSI_FLOOR, demap_llrs, map_bits
from .params import (
    DATA_IDX,
    DATA_IN_USED,
    N_DATA,
    N_USED,
    PILOT_IDX,
    PILOT_VALUES,
    USED_BINS,
    USED_IDX,
    PhyConfig,
)

# ifft output is scaled so 52 unit-power bins give mean sample power 1
_TX_SCALE = 64.0 / np.sqrt(N_USED)


@dataclass(frozen=True)
class OfdmFrame:
    samples: np.ndarray
    payload_bits: np.ndarray
    config: PhyConfig
    seed: int | None = None

    @property
    def n_data_symbols(self) -> int:
        return (len(self.samples) - self.config.preamble_len) // self.config.symbol_len


@dataclass(frozen=True)
class CsiVector:
    """Channel estimate on the 52 used subcarriers, ordered like USED_BINS."""

    values: np.ndarray
    frame_index: int = 0
    bins: tuple = field(default=USED_BINS, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if v.size != len(self.bins):
            raise ValueError(f"expected {len(self.bins)} values, got {v.size}")
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("CSI values must be finite")
        object.__setattr__(self, "values", v)

    def __getitem__(self, k: int) -> complex:
        return complex(self.values[self.bins.index(k)])

    def data_view(self) -> np.ndarray:
        return self.values[DATA_IN_USED]


class DemodResult(NamedTuple):
    bits: np.ndarray
    llrs: np.ndarray
    n_erased: int


def _pad_payload(bits, cfg: PhyConfig) -> np.ndarray:
    b = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if b.size == 0 or np.any(b > 1):
        raise ValueError("payload must be non-empty 0/1 bits")
    n_sym = -(-(b.size + N_TAIL) // cfg.n_dbps)
    return np.concatenate([b, np.zeros(n_sym * cfg.n_dbps - N_TAIL - b.size, dtype=np.uint8)])


def _symbols_to_time(grids: np.ndarray, cp: int) -> np.ndarray:
    """(n_sym, 64) frequency grids -> concatenated cp+64 sample symbols."""
    t = np.fft.ifft(grids, axis=1) * _TX_SCALE
    return np.concatenate([t[:, -cp:], t], axis=1).reshape(-1)


def modulate_frame(bits, cfg: PhyConfig, taps: FuzzerTaps, seed: int | None = None) -> OfdmFrame:
    """Encode, interleave, map, build OFDM symbols, prepend training, filter.

    The payload is zero-padded up to a whole number of symbols; the padded
    sequence is what payload_bits records and what demodulation returns.
    """
    payload = _pad_payload(bits, cfg)
    coded = interleave(conv_encode(payload), cfg.n_cbps)
    syms = map_bits(coded, cfg.modulation).reshape(-1, N_DATA)

    grids = np.zeros((syms.shape[0], 64), dtype=np.complex128)
    grids[:, DATA_IDX] = syms
    grids[:, PILOT_IDX] = PILOT_VALUES

    ltf = np.zeros((2, 64), dtype=np.complex128)
    ltf[:, USED_IDX] = cfg.ltf_used()

    samples = np.concatenate(
        [_symbols_to_time(ltf, cfg.cp_length), _symbols_to_time(grids, cfg.cp_length)]
    )
    return OfdmFrame(apply_fir(samples, taps), payload, cfg, seed)


def _rx_grids(samples: np.ndarray, cfg: PhyConfig, start: int, count: int) -> np.ndarray:
    """FFT of `count` symbols beginning at sample `start`, CP stripped."""
    sl = cfg.symbol_len
    block = samples[start : start + count * sl].reshape(count, sl)[:, cfg.cp_length :]
    return np.fft.fft(block, axis=1) / _TX_SCALE


def estimate_csi(rx_samples, cfg: PhyConfig, frame_index: int = 0) -> CsiVector:
    """Average the two training symbols and divide by the known values."""
    rx = np.asarray(rx_samples, dtype=np.complex128).reshape(-1)
    if rx.size < cfg.preamble_len:
        raise ValueError("frame shorter than the training preamble")
    f = _rx_grids(rx, cfg, 0, 2)
    est = (f[0, USED_IDX] + f[1, USED_IDX]) / (2.0 * cfg.ltf_used())
    return CsiVector(est, frame_index)


def frame_llrs(rx_samples, csi: CsiVector, cfg: PhyConfig) -> tuple[np.ndarray, int]:
    """Equalize the data symbols and produce deinterleaved soft metrics.

    Returns (llrs, n_erased); bins with |CSI| below the erasure floor get
    zero metrics and are counted once per data symbol they blank.
    """
    rx = np.asarray(rx_samples, dtype=np.complex128).reshape(-1)
    n_sym = (rx.size - cfg.preamble_len) // cfg.symbol_len
    if n_sym < 1:
        raise ValueError("no data symbols in frame")
    grids = _rx_grids(rx, cfg, cfg.preamble_len, n_sym)

    h = csi.data_view()
    alive = np.abs(h) >= ERASURE_CSI_FLOOR
    n_erased = int(np.count_nonzero(~alive)) * n_sym
    h_safe = np.where(alive, h, 1.0)
    eq = grids[:, DATA_IDX] / h_safe
    w = np.where(alive, np.abs(h) ** 2, 0.0)

    llrs = demap_llrs(eq.reshape(-1), np.broadcast_to(w, eq.shape).reshape(-1), cfg.modulation)
    return deinterleave(llrs, cfg.n_cbps), n_erased


def demodulate_frame(rx_samples, csi: CsiVector, cfg: PhyConfig) -> DemodResult:
    """Soft metrics then Viterbi; returns the padded payload-length bits."""
    llrs, n_erased = frame_llrs(rx_samples, csi, cfg)
    return DemodResult(viterbi_decode(llrs), llrs, n_erased)
