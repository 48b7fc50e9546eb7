"""Signaling in the channel estimates themselves.

The sender keys each frame's transmit FIR to one of four patterns; the
symbol stream is the sequence of artificial responses a cooperating
observer sees in its per-frame CSI. Every eighth frame carries identity
taps as a pilot so the observer can divide the physical channel out before
matching patterns. The message rides entirely on CSI; payload bits are
untouched random filler here.
"""
from csifuzz import (
    DEFAULT_ALPHABET,
    ChannelModel,
    ExperimentConfig,
    Modulation,
    covert_decode,
    covert_encode,
    run_covert,
    simulate_covert_csi,
    taps_register,
)

MSG = b"meet at the usual place at nine"

schedule = covert_encode(MSG)
print(f"message: {MSG!r} ({len(MSG)} bytes)")
print(f"schedule: {len(schedule)} frames, alphabet of {DEFAULT_ALPHABET.m} patterns, "
      f"pilot every {DEFAULT_ALPHABET.pilot_period} frames")
print("first eight registers:",
      " ".join(taps_register(t).hex() for t in schedule[:8]))

cfg = ExperimentConfig(experiment="covert-demo", seed=5,
                       modulation=Modulation.BPSK, n_data_symbols=1,
                       channel=ChannelModel((1.0, 0.3, -0.2j), noise_variance=0.01))
stream = simulate_covert_csi(schedule, cfg)
res = covert_decode(stream, DEFAULT_ALPHABET, cfg.phy())
print(f"\ndecoded over a 3-tap channel at 20 dB: {res.payload!r}")
print(f"round trip ok: {res.payload == MSG}")

# channel drift between pilots is the enemy: the pilot reference goes stale
print("\nsymbol errors vs drift (same message, drifting channel):")
for drift in (0.0, 0.1, 0.2, 0.3, 0.5):
    c = ExperimentConfig(experiment="covert-demo-drift", seed=5,
                         modulation=Modulation.BPSK, n_data_symbols=1,
                         channel=ChannelModel((1.0, 0.3, -0.2j),
                                              noise_variance=0.01, drift=drift))
    out = run_covert(c, MSG)
    print(f"  drift {drift:5.3f}: {out['symbol_errors']} of {out['n_symbols']} "
          f"symbols wrong, crc ok: {out['crc_ok']}")
