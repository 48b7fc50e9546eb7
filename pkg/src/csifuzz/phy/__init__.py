from .coding import conv_encode, deinterleave, interleave, viterbi_decode
from .frame import (
    CsiVector,
    DemodResult,
    OfdmFrame,
    demodulate_frame,
    estimate_csi,
    frame_llrs,
    modulate_frame,
)
from .modem import ERASURE_CSI_FLOOR, demap_llrs, map_bits
from .params import (
    DATA_BINS,
    PILOT_BINS,
    USED_BINS,
    Modulation,
    PhyConfig,
)

__all__ = [
    "conv_encode",
    "viterbi_decode",
    "interleave",
    "deinterleave",
    "map_bits",
    "demap_llrs",
    "ERASURE_CSI_FLOOR",
    "modulate_frame",
    "estimate_csi",
    "demodulate_frame",
    "frame_llrs",
    "OfdmFrame",
    "CsiVector",
    "DemodResult",
    "PhyConfig",
    "Modulation",
    "USED_BINS",
    "DATA_BINS",
    "PILOT_BINS",
]
