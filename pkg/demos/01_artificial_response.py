"""What the transmit FIR programs onto the subcarrier grid.

Three taps [1, c1, c2] impose an artificial frequency response
H(k) = 1 + c1 e^{-j2pi k/64} + c2 e^{-j4pi k/64} on every outgoing frame.
This sweeps a few legal settings, shows the 32-bit register each one packs
into, and sketches the magnitude ripple across the 52 used subcarriers.
"""
import numpy as np

from csifuzz import FuzzerTaps, artificial_response, taps_register
from csifuzz.phy.params import USED_BINS

SETTINGS = [
    FuzzerTaps(0.35j, 0.1),     # the workhorse setting used by the experiments
    FuzzerTaps(0.45, 0.0),      # single strong real echo
    FuzzerTaps(-0.3j, -0.3j),   # both taps imaginary, deeper ripple
    FuzzerTaps(0.0, 0.0),       # identity: filter transparent
]

for taps in SETTINGS:
    h = artificial_response(taps, 64)
    used = np.abs([h[k % 64] for k in USED_BINS])
    reg = taps_register(taps)
    print(f"taps ({taps.c1:g}, {taps.c2:g})  register {reg.hex()}  "
          f"|H| over used bins: min {used.min():.3f}  max {used.max():.3f}")

print()
print("magnitude profile for (0.35j, 0.1), one row per used subcarrier:")
h = artificial_response(FuzzerTaps(0.35j, 0.1), 64)
for k in USED_BINS:
    m = abs(h[k % 64])
    print(f"  k={k:+3d}  {m:5.3f}  {'#' * int(round(m * 30))}")
