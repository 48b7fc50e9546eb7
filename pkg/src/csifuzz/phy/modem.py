"""Bit <-> constellation mapping and soft demapping.

Gray-coded axes; all constellations have unit average power. LLR convention:
positive means bit 0. Demapper output is max-log per bit, scaled by |CSI|^2
so weak subcarriers cast weak votes.
"""
from __future__ import annotations

import numpy as np

from .params import Modulation

_QAM16_STEP = 1.0 / np.sqrt(10.0)
ERASURE_CSI_FLOOR = 1e-6


def _axis_amp(b_sign: np.ndarray, b_mag: np.ndarray) -> np.ndarray:
    # per-axis Gray map: 00 -> +1, 01 -> +3, 10 -> -1, 11 -> -3 (times step)
    return (1.0 - 2.0 * b_sign) * (2.0 * b_mag + 1.0) * _QAM16_STEP


def map_bits(bits, modulation: Modulation) -> np.ndarray:
    b = np.asarray(bits, dtype=np.float64).reshape(-1)
    n = modulation.n_bpsc
    if b.size % n:
        raise ValueError(f"bit count {b.size} not a multiple of {n}")
    if modulation is Modulation.BPSK:
        return (1.0 - 2.0 * b).astype(np.complex128)
    if modulation is Modulation.QPSK:
        g = b.reshape(-1, 2)
        return ((1.0 - 2.0 * g[:, 0]) + 1j * (1.0 - 2.0 * g[:, 1])) / np.sqrt(2.0)
    g = b.reshape(-1, 4)
    return _axis_amp(g[:, 0], g[:, 1]) + 1j * _axis_amp(g[:, 2], g[:, 3])


def demap_llrs(eq: np.ndarray, weights: np.ndarray, modulation: Modulation) -> np.ndarray:
    """Per-bit soft metrics for equalized symbols eq with per-symbol weights.

    Returns n_bpsc metrics per symbol, in the same bit order map_bits consumes.
    """
    eq = np.asarray(eq, dtype=np.complex128).reshape(-1)
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.shape != eq.shape:
        raise ValueError("weights must match symbols")
    if modulation is Modulation.BPSK:
        return w * eq.real
    if modulation is Modulation.QPSK:
        out = np.empty(2 * eq.size)
        out[0::2] = w * eq.real
        out[1::2] = w * eq.imag
        return out
    out = np.empty(4 * eq.size)
    for off, ax in ((0, eq.real), (2, eq.imag)):
        out[off::4] = w * ax
        out[off + 1 :: 4] = w * (2.0 * _QAM16_STEP - np.abs(ax))
    return out
