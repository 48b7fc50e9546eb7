"""Using the fuzzer as a one-shot pre-equalizer on a hostile channel.

The environment here has a deep fade notched onto one data subcarrier.
Stage 1 screens a coarse grid of legal tap settings; stage 2 re-runs the
best one head to head against taps-off with paired noise and reports a
one-sided significance test. A good setting steers transmit energy into
the notch and lowers PER below the taps-off baseline. Takes ~30 s.
"""
from csifuzz import ExperimentConfig, run_preboost

cfg = ExperimentConfig(experiment="preboost-demo", seed=7,
                       out_dir="demo_out/preboost", n_frames=200)
res = run_preboost(cfg, stage2_frames=2000)

grid = sorted(res["grid"], key=lambda r: r["per"])
print(f"stage 1 at {res['snr_db']} dB, taps-off PER {res['per_off_stage1']:.4f}; "
      f"best five grid points:")
for r in grid[:5]:
    print(f"  c1={r['c1']:>7} c2={r['c2']:>7}  PER {r['per']:.4f}")

print(f"\nstage 2, winner ({res['winner_c1']}, {res['winner_c2']}) vs taps-off:")
print(f"  PER boost {res['per_boost']:.4f}  PER off {res['per_off']:.4f}  "
      f"z = {res['z_stat']:.2f}  significant at 95%: {res['significant']}")
print("\ngrid table written to demo_out/preboost/preboost.csv")
