"""Authorized-receiver de-fuzzing: divide the known artificial response out
of an observed CSI vector to get back the environment response."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedError
from .fuzzer import FuzzerTaps, artificial_response
from .phy.frame import CsiVector
from .phy.params import USED_BINS

CONDITION_THRESHOLD = 1e-3


@dataclass(frozen=True)
class RecoveredCsi:
    """Environment estimate on the used subcarriers plus a conditioning score.

    condition_report is min |H_art(k)| over the used bins; values near zero
    mean the division amplified noise on some bins.
    """

    values: np.ndarray
    condition_report: float
    bins: tuple = USED_BINS

    def __getitem__(self, k: int) -> complex:
        return complex(self.values[self.bins.index(k)])


def recover(csi: CsiVector, taps: FuzzerTaps, cfg=None,
            threshold: float = CONDITION_THRESHOLD) -> RecoveredCsi:
    """values[k] = csi[k] / H_art(k) on the bins where csi is defined.

    Legal taps keep min |H_art| >= 1 - |c1| - |c2|, so the guard can only
    trip near the |c1| + |c2| -> 1 corner; it turns silent noise
    amplification into an explicit error naming the offending bins.
    """
    fft_size = cfg.fft_size if cfg is not None else 64
    full = artificial_response(taps, fft_size)
    bins = tuple(csi.bins)
    h_art = full[[k % fft_size for k in bins]]
    mags = np.abs(h_art)
    lo = float(mags.min())
    if lo <= threshold:
        bad = [bins[i] for i in np.flatnonzero(mags <= threshold)]
        raise IllConditionedError(
            f"|H_art| <= {threshold} on bins {bad}; recovery would amplify noise",
            bins=bad,
        )
    return RecoveredCsi(csi.values / h_art, lo, bins)


def unauthorized_distortion(csi_fuzzed: CsiVector, csi_clean: CsiVector) -> float:
    """Distortion score an observer without the taps would measure.

    RMS of |a/b - 1| over the bins after removing overall scale and a single
    global phase (neither carries any frequency-selectivity information).
    Zero without fuzzing (or with the correct taps divided out); grows with
    the imposed selectivity.
    """
    a = np.asarray(csi_fuzzed.values, dtype=np.complex128)
    b = np.asarray(csi_clean.values, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError("CSI vectors must share subcarrier support")
    if np.any(b == 0) or np.any(a == 0):
        raise ValueError("distortion undefined with zero-valued bins")
    r = (a / np.mean(np.abs(a))) / (b / np.mean(np.abs(b)))
    s = np.sum(r)
    if np.abs(s) > 0:
        r = r * (np.conj(s) / np.abs(s))
    return float(np.sqrt(np.mean(np.abs(r - 1.0) ** 2)))
