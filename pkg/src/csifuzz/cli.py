"""Command line front end.

Subcommands: response, csi-demo, parity, preboost, scan, covert send|recv.
Every run is deterministic for a fixed --seed; file outputs land in
--out-dir. Exit codes: 0 ok, 2 bad config/usage, 3 ill-conditioned taps,
4 I/O failure, 5 covert decode failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .covert import DEFAULT_ALPHABET, CirAlphabet, covert_decode
from .errors import ConfigError, CovertDecodeError, IllConditionedError
from .fuzzer import FuzzerTaps, artificial_response, taps_register
from .harness import (
    ExperimentConfig,
    config_from_mapping,
    load_config,
    read_trace,
    run_csi_demo,
    run_parity,
    run_preboost,
    run_scan,
    simulate_covert_csi,
    write_table,
    write_trace,
)
from .phy import USED_BINS
from .phy.params import USED_IDX

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ILL_CONDITIONED = 3
EXIT_IO = 4
EXIT_COVERT = 5


def _parse_tap(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ConfigError(f"cannot parse tap value {text!r}; use forms like 0.1, -0.35j")


def _load_alphabet(path: str | None) -> CirAlphabet:
    if path is None:
        return DEFAULT_ALPHABET
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise IOError(f"cannot read alphabet {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"cannot parse alphabet {path}: {exc}") from exc
    try:
        pats = tuple(
            FuzzerTaps(complex(p["c1"][0], p["c1"][1]), complex(p["c2"][0], p["c2"][1]))
            for p in doc["patterns"]
        )
        return CirAlphabet(patterns=pats, pilot_period=int(doc.get("pilot_period", 8)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad alphabet file {path}: {exc}") from exc


def _base_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else config_from_mapping({})
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.out_dir is not None:
        cfg = replace(cfg, out_dir=args.out_dir)
    return cfg


def _cmd_response(args) -> int:
    taps = FuzzerTaps(_parse_tap(args.c1), _parse_tap(args.c2))
    reg = taps_register(taps)
    h = artificial_response(taps, 64)[USED_IDX]
    rows = [
        {"subcarrier": k, "re": float(v.real), "im": float(v.imag), "abs": float(abs(v))}
        for k, v in zip(USED_BINS, h)
    ]
    cfg = _base_config(args)
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "response.csv")
    write_table(path, rows)
    mags = np.abs(h)
    print(f"taps c1={taps.c1} c2={taps.c2}")
    print(f"register {reg.hex()}")
    print(f"|H| min {mags.min():.6f} max {mags.max():.6f} over {len(rows)} subcarriers")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_csi_demo(args) -> int:
    out = run_csi_demo(_base_config(args))
    print(f"frames {out['n_frames']}")
    print(f"distortion on-vs-off {out['distortion_on_vs_off']:.4f}")
    print(f"max recovery error {out['max_recovery_err']:.3e}")
    for name, path in out["paths"].items():
        print(f"trace {name}: {path}")
    return EXIT_OK


def _cmd_parity(args) -> int:
    cfg = _base_config(args)
    rows = run_parity(cfg)
    for r in rows:
        ratio = r["per_on"] / r["per_off"] if r["per_off"] > 0 else float("nan")
        print(
            f"snr {r['snr_db']:.1f} dB: per_off {r['per_off']:.4g} "
            f"per_on {r['per_on']:.4g} ratio {ratio:.3f} "
            f"ber_off {r['ber_off']:.4g} ber_on {r['ber_on']:.4g}"
        )
    print(f"wrote {os.path.join(cfg.out_dir, 'parity.csv')}")
    return EXIT_OK


def _cmd_preboost(args) -> int:
    cfg = _base_config(args)
    out = run_preboost(cfg, snr_db=args.snr_db, stage2_frames=args.stage2_frames)
    print(f"snr {out['snr_db']:.1f} dB, deep-fade environment")
    print(f"taps-off per {out['per_off']:.4g}")
    print(f"best taps c1={out['winner_c1']} c2={out['winner_c2']} per {out['per_boost']:.4g}")
    print(f"z {out['z_stat']:.2f} -> {'significant' if out['significant'] else 'not significant'}")
    print(f"wrote {os.path.join(cfg.out_dir, 'preboost.csv')}")
    return EXIT_OK


def _cmd_scan(args) -> int:
    out = run_scan(_base_config(args), allow_midframe=args.allow_midframe)
    n = len(out["bit_errors"])
    print(f"frames {n}, mid-frame updates {'on' if args.allow_midframe else 'off'}")
    print(f"all decoded: {out['all_decoded']}")
    print(f"raw metrics clean: {out['clean_metrics']}")
    if not out["clean_metrics"]:
        worst = max(out["raw_metric_errors"])
        print(f"corrupted coded decisions per frame, worst {worst}")
    print(f"trace {out['trace_path']}")
    print(f"schedule {out['schedule_path']}")
    return EXIT_OK


def _cmd_covert_send(args) -> int:
    cfg = _base_config(args)
    alphabet = _load_alphabet(args.alphabet)
    try:
        msg = bytes.fromhex(args.msg)
    except ValueError:
        raise ConfigError(f"--msg must be hex bytes, got {args.msg!r}")
    from .covert import covert_encode
    from .fuzzer import taps_register as _reg

    schedule = covert_encode(msg, alphabet)
    stream = simulate_covert_csi(schedule, cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "covert_csi.json")
    write_trace(
        path,
        cfg.experiment,
        [
            {"frame": i, "register": _reg(t).hex(), "csi": c.values}
            for i, (t, c) in enumerate(zip(schedule, stream))
        ],
    )
    print(f"message {len(msg)} bytes -> {len(schedule)} frames "
          f"(pilot every {alphabet.pilot_period})")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_covert_recv(args) -> int:
    alphabet = _load_alphabet(args.alphabet)
    _, records = read_trace(args.csi)
    from .phy import CsiVector

    stream = [CsiVector(r["csi"], frame_index=r["frame"]) for r in records]
    res = covert_decode(stream, alphabet)
    print(f"decoded {len(res.payload)} bytes from {len(stream)} frames")
    print(res.payload.hex())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML or JSON experiment config")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out-dir", default=None)

    p = argparse.ArgumentParser(prog="csifuzz", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("response", parents=[common],
                       help="print the register word and per-subcarrier response of a taps setting")
    r.add_argument("--c1", default="0.35j")
    r.add_argument("--c2", default="0.1")
    r.set_defaults(fn=_cmd_response)

    d = sub.add_parser("csi-demo", parents=[common],
                       help="capture off/on/recovered CSI traces over a loopback path")
    d.set_defaults(fn=_cmd_csi_demo)

    a = sub.add_parser("parity", parents=[common],
                       help="PER/BER vs SNR with the transmit filter off and on")
    a.set_defaults(fn=_cmd_parity)

    b = sub.add_parser("preboost", parents=[common],
                       help="search taps that beat taps-off in a deep-fade environment")
    b.add_argument("--snr-db", type=float, default=None)
    b.add_argument("--stage2-frames", type=int, default=10_000)
    b.set_defaults(fn=_cmd_preboost)

    s = sub.add_parser("scan", parents=[common],
                       help="random register per frame; verify every frame decodes")
    s.add_argument("--allow-midframe", action="store_true",
                   help="let the next register land mid-frame (degrades raw metrics)")
    s.set_defaults(fn=_cmd_scan)

    c = sub.add_parser("covert", help="covert channel over CSI traces")
    csub = c.add_subparsers(dest="covert_command", required=True)
    cs = csub.add_parser("send", parents=[common], help="encode a message into a CSI trace")
    cs.add_argument("--msg", required=True, help="payload as hex bytes")
    cs.add_argument("--alphabet", default=None, help="JSON alphabet file")
    cs.set_defaults(fn=_cmd_covert_send)
    cr = csub.add_parser("recv", parents=[common], help="decode a message from a CSI trace")
    cr.add_argument("--csi", required=True, help="CSI trace produced by covert send")
    cr.add_argument("--alphabet", default=None)
    cr.set_defaults(fn=_cmd_covert_recv)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IllConditionedError as exc:
        print(f"ill-conditioned taps: {exc}", file=sys.stderr)
        return EXIT_ILL_CONDITIONED
    except (IOError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CovertDecodeError as exc:
        print(f"covert decode failed: {exc}", file=sys.stderr)
        if exc.payload:
            print(f"best effort payload: {exc.payload.hex()}", file=sys.stderr)
        return EXIT_COVERT
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
