"""OFDM link simulator with a transmitter-side CSI fuzzer.

A 3-tap transmit FIR imposes an artificial channel impulse response
[1, c1, c2] on every outgoing frame, reshaping the CSI any observer
estimates while an authorized receiver that knows the taps divides the
artificial response back out. Includes link-parity and tap-search
experiments plus a covert channel that signals through the choice of
artificial CIR over time.
"""

from .channel import LOOPBACK_CIR, ChannelModel, deep_fade_cir, drift_step, env_response, propagate
from .covert import (
    DEFAULT_ALPHABET,
    CirAlphabet,
    CovertDecodeResult,
    covert_decode,
    covert_encode,
    crc16,
    frame_message,
)
from .dsp import FixedPointTap, TapAxis, dft, idft, quantize_tap, substream
from .errors import ConfigError, CovertDecodeError, CsiFuzzError, IllConditionedError
from .fuzzer import (
    IDENTITY_TAPS,
    FuzzerRegister,
    FuzzerTaps,
    apply_fir,
    apply_fir_switched,
    artificial_response,
    pack_register,
    random_taps,
    taps_register,
    unpack_register,
)
from .harness import (
    ExperimentConfig,
    load_config,
    read_table,
    read_trace,
    run_covert,
    run_csi_demo,
    run_parity,
    run_preboost,
    run_scan,
    simulate_covert_csi,
    write_table,
    write_trace,
)
from .phy import (
    CsiVector,
    DemodResult,
    Modulation,
    OfdmFrame,
    PhyConfig,
    conv_encode,
    deinterleave,
    demodulate_frame,
    estimate_csi,
    frame_llrs,
    interleave,
    map_bits,
    modulate_frame,
    viterbi_decode,
)
from .recovery import RecoveredCsi, recover, unauthorized_distortion

__version__ = "0.1.0"
