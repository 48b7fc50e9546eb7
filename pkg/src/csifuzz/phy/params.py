"""OFDM numerology: 64-point grid, 16-sample CP, 48 data + 4 pilot subcarriers.

Subcarrier indices are signed (k in -26..26, DC excluded); index k maps to
FFT bin k mod 64. The training symbol is the usual +-1 sequence on the 52
used subcarriers, sent twice at the head of every frame.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError


class Modulation(enum.Enum):
    BPSK = "bpsk"
    QPSK = "qpsk"
    QAM16 = "qam16"

    @property
    def n_bpsc(self) -> int:
        return {Modulation.BPSK: 1, Modulation.QPSK: 2, Modulation.QAM16: 4}[self]


PILOT_BINS = (-21, -7, 7, 21)
PILOT_VALUES = (1.0, 1.0, 1.0, -1.0)

# training-symbol values on k = -26..-1 then k = +1..+26
_LTF_LEFT = (1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1)
_LTF_RIGHT = (1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1)

USED_BINS = tuple(range(-26, 0)) + tuple(range(1, 27))
DATA_BINS = tuple(k for k in USED_BINS if k not in PILOT_BINS)
LTF_VALUES = dict(zip(USED_BINS, _LTF_LEFT + _LTF_RIGHT))

N_USED = len(USED_BINS)  # 52
N_DATA = len(DATA_BINS)  # 48


@dataclass(frozen=True)
class PhyConfig:
    """Link configuration. Only the 64/16 numerology is supported."""

    modulation: Modulation = Modulation.QPSK
    fft_size: int = 64
    cp_length: int = 16
    data_subcarriers: tuple = field(default=DATA_BINS, repr=False)
    pilot_subcarriers: tuple = field(default=PILOT_BINS, repr=False)

    def __post_init__(self):
        if self.fft_size != 64 or self.cp_length != 16:
            raise ConfigError(
                f"unsupported numerology {self.fft_size}/{self.cp_length}, need 64/16"
            )
        data = set(self.data_subcarriers)
        pilots = set(self.pilot_subcarriers)
        if data & pilots:
            raise ConfigError("data and pilot subcarriers overlap")
        if data | pilots != set(USED_BINS) or 0 in data | pilots:
            raise ConfigError("data + pilot sets must partition the 52 used bins")

    @property
    def n_bpsc(self) -> int:
        return self.modulation.n_bpsc

    @property
    def n_cbps(self) -> int:
        return N_DATA * self.n_bpsc

    @property
    def n_dbps(self) -> int:
        return self.n_cbps // 2  # rate-1/2 code

    @property
    def symbol_len(self) -> int:
        return self.cp_length + self.fft_size  # 80

    @property
    def preamble_len(self) -> int:
        return 2 * self.symbol_len  # two training symbols

    def ltf_used(self) -> np.ndarray:
        """Training values over USED_BINS order."""
        return np.array([LTF_VALUES[k] for k in USED_BINS], dtype=np.complex128)


def grid_indices(bins) -> np.ndarray:
    """Signed subcarrier indices -> FFT bin positions."""
    return np.asarray([k % 64 for k in bins], dtype=np.intp)


USED_IDX = grid_indices(USED_BINS)
DATA_IDX = grid_indices(DATA_BINS)
PILOT_IDX = grid_indices(PILOT_BINS)
# positions of the data bins within the USED_BINS ordering
DATA_IN_USED = np.asarray([USED_BINS.index(k) for k in DATA_BINS], dtype=np.intp)
