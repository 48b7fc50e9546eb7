"""Experiment runner: CSI demo traces, link-parity Monte Carlo, pre-boost
search, random tap scan, and covert-stream simulation.

Reproducibility contract: every stochastic cell draws from a substream keyed
by (master seed, cell indices), so results are independent of execution
order and runs with equal seeds produce byte-identical output files. Output
writers emit no timestamps and rely on repr round-tripping for floats.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, replace

import numpy as np

from .channel import LOOPBACK_CIR, ChannelModel, deep_fade_cir, drift_step, propagate
from .covert import DEFAULT_ALPHABET, CirAlphabet, covert_decode, covert_encode
from .dsp import substream
from .errors import ConfigError, CovertDecodeError
from .fuzzer import (
    IDENTITY_TAPS,
    FuzzerTaps,
    apply_fir_switched,
    random_taps,
    taps_register,
)
from .phy.coding import N_TAIL, conv_encode, viterbi_decode
from .phy.frame import CsiVector, estimate_csi, frame_llrs, modulate_frame
from .phy.params import USED_BINS, Modulation, PhyConfig
from .recovery import recover, unauthorized_distortion

TRACE_VERSION = 1
_VITERBI_CHUNK = 2048

DEFAULT_TAPS = FuzzerTaps(0.35j, 0.1)
PARITY_ENV_CIR = (1.0, -0.4j)
DEFAULT_PARITY_SNRS = (3.0, 4.0, 5.0)
PREBOOST_FADE_BIN = 10  # a data subcarrier; pilots sit at +-7, +-21
PREBOOST_SNR_DB = 4.5  # taps-off PER sits a few percent here, room to improve


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared run settings; channel None means the experiment's default."""

    experiment: str = "demo"
    seed: int = 1
    out_dir: str = "."
    modulation: Modulation = Modulation.QPSK
    n_frames: int = 1000
    n_data_symbols: int = 8
    snr_db_grid: tuple = DEFAULT_PARITY_SNRS
    taps: FuzzerTaps = DEFAULT_TAPS
    channel: ChannelModel | None = None

    def __post_init__(self):
        if self.n_frames < 1:
            raise ConfigError("n_frames must be >= 1")
        if self.n_data_symbols < 1:
            raise ConfigError("n_data_symbols must be >= 1")
        if not isinstance(self.taps, FuzzerTaps):
            raise ConfigError("taps must be a FuzzerTaps instance")
        if self.channel is not None and not isinstance(self.channel, ChannelModel):
            raise ConfigError("channel must be a ChannelModel instance")

    def phy(self) -> PhyConfig:
        return PhyConfig(modulation=self.modulation)

    def resolve_channel(self, default_cir) -> ChannelModel:
        return self.channel if self.channel is not None else ChannelModel(default_cir)


def _as_complex(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if isinstance(pair, (list, tuple)) and len(pair) == 2:
        return complex(float(pair[0]), float(pair[1]))
    raise ConfigError(f"expected number or [re, im] pair, got {pair!r}")


def config_from_mapping(data: dict) -> ExperimentConfig:
    """Build a config from a parsed TOML/JSON mapping."""
    try:
        kwargs = {}
        for key in ("experiment", "seed", "out_dir", "n_frames", "n_data_symbols"):
            if key in data:
                kwargs[key] = data[key]
        if "modulation" in data:
            kwargs["modulation"] = Modulation(str(data["modulation"]).lower())
        if "snr_db_grid" in data:
            kwargs["snr_db_grid"] = tuple(float(s) for s in data["snr_db_grid"])
        if "taps" in data:
            t = data["taps"]
            kwargs["taps"] = FuzzerTaps(
                _as_complex(t.get("c1", 0)), _as_complex(t.get("c2", 0)),
                enabled=bool(t.get("enabled", True)),
            )
        if "channel" in data:
            c = data["channel"]
            kwargs["channel"] = ChannelModel(
                cir=tuple(_as_complex(x) for x in c.get("cir", [1.0])),
                noise_variance=float(c.get("noise_variance", 0.0)),
                drift=float(c.get("drift", 0.0)),
            )
        return ExperimentConfig(**kwargs)
    except (TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(f"bad experiment config: {exc}") from exc


def load_config(path: str) -> ExperimentConfig:
    """Read an ExperimentConfig from a .toml or .json file."""
    try:
        if path.endswith(".toml"):
            try:
                import tomllib
            except ModuleNotFoundError:
                import tomli as tomllib
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        else:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
    except OSError as exc:
        raise IOError(f"cannot read config {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    return config_from_mapping(data)


# ---------------------------------------------------------------- trace files

def _csi_pairs(values: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in values]


def write_trace(path: str, experiment: str, records: list) -> None:
    """Write a CSI trace: records are dicts {frame, register, csi(ndarray)}."""
    doc = {
        "header": {
            "version": TRACE_VERSION,
            "fft_size": 64,
            "subcarriers": list(USED_BINS),
            "experiment": experiment,
        },
        "records": [
            {
                "frame": int(r["frame"]),
                "register": str(r["register"]),
                "csi": _csi_pairs(np.asarray(r["csi"])),
            }
            for r in records
        ],
    }
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, separators=(",", ":"))
            fh.write("\n")
    except OSError as exc:
        raise IOError(f"cannot write trace {path}: {exc}") from exc


def read_trace(path: str) -> tuple[dict, list]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise IOError(f"cannot read trace {path}: {exc}") from exc
    header = doc["header"]
    if header.get("version") != TRACE_VERSION:
        raise ValueError(f"unsupported trace version {header.get('version')}")
    n_used = len(header["subcarriers"])
    records = []
    for r in doc["records"]:
        csi = np.array([complex(re, im) for re, im in r["csi"]])
        if csi.size != n_used:
            raise ValueError(f"record {r['frame']} has {csi.size} bins, expected {n_used}")
        records.append({"frame": int(r["frame"]), "register": r["register"], "csi": csi})
    return header, records


def write_table(path: str, rows: list[dict]) -> None:
    """CSV writer with repr floats so numbers survive a read round trip."""
    if not rows:
        raise ValueError("no rows to write")
    cols = list(rows[0].keys())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in (row[c] for c in cols)])
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise IOError(f"cannot write table {path}: {exc}") from exc


def read_table(path: str) -> list[dict]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            rdr = csv.DictReader(fh)
            rows = []
            for row in rdr:
                out = {}
                for k, v in row.items():
                    try:
                        out[k] = int(v)
                    except ValueError:
                        try:
                            out[k] = float(v)
                        except ValueError:
                            out[k] = v
                rows.append(out)
            return rows
    except OSError as exc:
        raise IOError(f"cannot read table {path}: {exc}") from exc


# ------------------------------------------------------------ link primitives

def _payload_bits(phy: PhyConfig, n_symbols: int, rng) -> np.ndarray:
    n = phy.n_dbps * n_symbols - N_TAIL
    return rng.integers(0, 2, n, dtype=np.uint8)


def _link_frame(bits, taps, channel, phy, noise_rng):
    """Modulate, propagate, estimate, demap. Returns (llrs, n_erased)."""
    tx = modulate_frame(bits, phy, taps)
    rx = propagate(tx.samples, channel, noise_rng)
    csi = estimate_csi(rx, phy)
    return frame_llrs(rx, csi, phy)


def _batch_decode(llr_list: list, payloads: np.ndarray) -> tuple[int, int]:
    """Viterbi over stacked frames; returns (bit errors, frame errors)."""
    bit_err = 0
    frame_err = 0
    llrs = np.asarray(llr_list)
    for lo in range(0, llrs.shape[0], _VITERBI_CHUNK):
        chunk = slice(lo, lo + _VITERBI_CHUNK)
        bits = viterbi_decode(llrs[chunk])
        diff = bits != payloads[chunk]
        bit_err += int(diff.sum())
        frame_err += int(diff.any(axis=1).sum())
    return bit_err, frame_err


def _per_ber_cell(cfg: ExperimentConfig, snr_idx: int, snr_db: float,
                  taps: FuzzerTaps, tap_idx: int = 0) -> tuple[float, float]:
    """Monte Carlo PER/BER for one (snr, taps) cell with per-frame substreams.

    The noise substream key does not include the taps, so fuzzer-on and
    fuzzer-off runs see identical noise and bit draws (paired comparison).
    """
    phy = cfg.phy()
    base = cfg.resolve_channel(PARITY_ENV_CIR)
    ch = replace(base, noise_variance=10.0 ** (-snr_db / 10.0))
    llr_list, payloads = [], []
    for f in range(cfg.n_frames):
        bits = _payload_bits(phy, cfg.n_data_symbols, substream(cfg.seed, snr_idx, f, 0))
        llrs, _ = _link_frame(bits, taps, ch, phy, substream(cfg.seed, snr_idx, f, 1))
        llr_list.append(llrs)
        payloads.append(bits)
    n_bits = len(payloads) * payloads[0].size
    bit_err, frame_err = _batch_decode(llr_list, np.asarray(payloads))
    return frame_err / cfg.n_frames, bit_err / n_bits


# ------------------------------------------------------------------ csi demo

def run_csi_demo(cfg: ExperimentConfig) -> dict:
    """Fuzzer-off, fuzzer-on, and recovered CSI traces over a loopback path.

    Noiseless capture of what a monitoring receiver sees with and without
    the transmit FIR, plus the authorized recovery of the off-trace from the
    on-trace. Returns trace paths and summary scores.
    """
    phy = cfg.phy()
    ch = replace(cfg.resolve_channel(LOOPBACK_CIR), noise_variance=0.0, drift=0.0)
    reg_on = taps_register(cfg.taps).hex()
    reg_off = taps_register(IDENTITY_TAPS).hex()

    off_rec, on_rec, rec_rec = [], [], []
    max_recovery_err = 0.0
    for f in range(cfg.n_frames):
        bits = _payload_bits(phy, cfg.n_data_symbols, substream(cfg.seed, f, 0))
        rx_off = propagate(modulate_frame(bits, phy, IDENTITY_TAPS).samples, ch, None)
        rx_on = propagate(modulate_frame(bits, phy, cfg.taps).samples, ch, None)
        csi_off = estimate_csi(rx_off, phy, f)
        csi_on = estimate_csi(rx_on, phy, f)
        rec = recover(csi_on, cfg.taps, phy)
        max_recovery_err = max(max_recovery_err, float(np.max(np.abs(rec.values - csi_off.values))))
        off_rec.append({"frame": f, "register": reg_off, "csi": csi_off.values})
        on_rec.append({"frame": f, "register": reg_on, "csi": csi_on.values})
        rec_rec.append({"frame": f, "register": reg_on, "csi": rec.values})

    paths = {}
    os.makedirs(cfg.out_dir, exist_ok=True)
    for name, recs in (("off", off_rec), ("on", on_rec), ("recovered", rec_rec)):
        paths[name] = os.path.join(cfg.out_dir, f"csi_{name}.json")
        write_trace(paths[name], f"{cfg.experiment}:{name}", recs)

    distortion = unauthorized_distortion(
        CsiVector(on_rec[0]["csi"]), CsiVector(off_rec[0]["csi"])
    )
    return {
        "paths": paths,
        "distortion_on_vs_off": distortion,
        "max_recovery_err": max_recovery_err,
        "n_frames": cfg.n_frames,
    }


# -------------------------------------------------------------------- parity

def run_parity(cfg: ExperimentConfig) -> list[dict]:
    """PER/BER vs SNR with the transmit FIR off and on, paired noise draws.

    Writes parity.csv; rows are {snr_db, per_off, per_on, ber_off, ber_on}.
    """
    rows = []
    for si, snr_db in enumerate(cfg.snr_db_grid):
        per_off, ber_off = _per_ber_cell(cfg, si, snr_db, IDENTITY_TAPS)
        per_on, ber_on = _per_ber_cell(cfg, si, snr_db, cfg.taps)
        rows.append(
            {
                "snr_db": float(snr_db),
                "per_off": per_off,
                "per_on": per_on,
                "ber_off": ber_off,
                "ber_on": ber_on,
            }
        )
    os.makedirs(cfg.out_dir, exist_ok=True)
    write_table(os.path.join(cfg.out_dir, "parity.csv"), rows)
    return rows


# ------------------------------------------------------------------ preboost

def _preboost_grid() -> list[FuzzerTaps]:
    """Coarse legal tap grid searched in stage 1 (identity included)."""
    mags = (-0.4, -0.2, 0.2, 0.4)
    opts = [0j] + [complex(m, 0) for m in mags] + [complex(0, m) for m in mags]
    return [FuzzerTaps(c1, c2) for c1 in opts for c2 in opts]


def _frame_errors(cfg: ExperimentConfig, snr_db: float, taps: FuzzerTaps,
                  n_frames: int, stage: int) -> np.ndarray:
    """Per-frame error indicators (paired across taps via shared substreams)."""
    phy = cfg.phy()
    base = cfg.resolve_channel(deep_fade_cir(PREBOOST_FADE_BIN))
    ch = replace(base, noise_variance=10.0 ** (-snr_db / 10.0))
    llr_list, payloads = [], []
    for f in range(n_frames):
        bits = _payload_bits(phy, cfg.n_data_symbols, substream(cfg.seed, stage, f, 0))
        llrs, _ = _link_frame(bits, taps, ch, phy, substream(cfg.seed, stage, f, 1))
        llr_list.append(llrs)
        payloads.append(bits)
    payloads = np.asarray(payloads)
    llrs = np.asarray(llr_list)
    errs = np.empty(n_frames, dtype=bool)
    for lo in range(0, n_frames, _VITERBI_CHUNK):
        chunk = slice(lo, min(lo + _VITERBI_CHUNK, n_frames))
        bits = viterbi_decode(llrs[chunk])
        errs[chunk] = (bits != payloads[chunk]).any(axis=1)
    return errs


def run_preboost(cfg: ExperimentConfig, snr_db: float | None = None,
                 stage2_frames: int = 10_000) -> dict:
    """Search the tap grid for a setting that beats taps-off on a deep fade.

    Stage 1 screens the grid at cfg.n_frames frames per point with paired
    noise; stage 2 re-runs the winner against taps-off head to head and
    reports a one-sided paired test at 95% confidence. Writes preboost.csv.
    """
    snr = float(snr_db if snr_db is not None else
                (cfg.snr_db_grid[0] if len(cfg.snr_db_grid) == 1 else PREBOOST_SNR_DB))
    rows = []
    err_off = _frame_errors(cfg, snr, IDENTITY_TAPS, cfg.n_frames, stage=1)
    per_off = float(err_off.mean())
    best = (per_off + 1.0, IDENTITY_TAPS)
    for taps in _preboost_grid():
        errs = _frame_errors(cfg, snr, taps, cfg.n_frames, stage=1)
        per = float(errs.mean())
        rows.append(
            {
                "c1": f"{taps.c1.real:g}{taps.c1.imag:+g}j",
                "c2": f"{taps.c2.real:g}{taps.c2.imag:+g}j",
                "per": per,
            }
        )
        if per < best[0]:
            best = (per, taps)

    winner = best[1]
    e_off = _frame_errors(cfg, snr, IDENTITY_TAPS, stage2_frames, stage=2)
    e_win = _frame_errors(cfg, snr, winner, stage2_frames, stage=2)
    d = e_off.astype(np.float64) - e_win.astype(np.float64)
    mean = float(d.mean())
    std = float(d.std(ddof=1))
    z = mean / (std / np.sqrt(stage2_frames)) if std > 0 else 0.0
    result = {
        "snr_db": snr,
        "per_off_stage1": per_off,
        "grid": rows,
        "winner_c1": winner.c1,
        "winner_c2": winner.c2,
        "per_off": float(e_off.mean()),
        "per_boost": float(e_win.mean()),
        "z_stat": z,
        "significant": bool(z > 1.645),  # one-sided 95%
    }
    os.makedirs(cfg.out_dir, exist_ok=True)
    write_table(os.path.join(cfg.out_dir, "preboost.csv"), rows)
    return result


# ---------------------------------------------------------------------- scan

def run_scan(cfg: ExperimentConfig, allow_midframe: bool = False) -> dict:
    """Random taps per frame, noiseless; all frames must decode cleanly.

    With allow_midframe the next frame's register lands in the middle of the
    current frame (as a late asynchronous write would), mixing two filters
    inside one FFT window. That corrupts the raw per-bit metrics, reported
    as raw_metric_errors (exactly zero under frame-atomic updates), though
    the convolutional code often repairs the final bits at these noiseless
    settings. Writes a schedule JSON and a CSI trace.
    """
    phy = cfg.phy()
    ch = replace(cfg.resolve_channel((1.0,)), noise_variance=0.0, drift=0.0)
    schedule = [random_taps(substream(cfg.seed, f, 2)) for f in range(cfg.n_frames)]

    records, sched_rows, bit_errors, raw_errors = [], [], [], []
    for f, taps in enumerate(schedule):
        bits = _payload_bits(phy, cfg.n_data_symbols, substream(cfg.seed, f, 0))
        frame = modulate_frame(bits, phy, taps)
        if allow_midframe and f + 1 < len(schedule):
            base = modulate_frame(bits, phy, IDENTITY_TAPS).samples[:-2]
            # land the new coefficients in the middle of a data symbol's FFT
            # window, where a late register write would mix two filters
            n_sym = (base.size - phy.preamble_len) // phy.symbol_len
            switch = (phy.preamble_len + (n_sym // 2) * phy.symbol_len
                      + phy.cp_length + phy.fft_size // 2)
            tx = apply_fir_switched(base, taps, schedule[f + 1], switch)
        else:
            tx = frame.samples
        rx = propagate(tx, ch, None)
        csi = estimate_csi(rx, phy, f)
        llrs, _ = frame_llrs(rx, csi, phy)
        coded = conv_encode(frame.payload_bits)
        raw_errors.append(int(np.count_nonzero((llrs < 0).astype(np.uint8) != coded)))
        err = int(np.count_nonzero(viterbi_decode(llrs) != frame.payload_bits))
        bit_errors.append(err)
        reg = taps_register(taps).hex()
        records.append({"frame": f, "register": reg, "csi": csi.values})
        sched_rows.append(
            {
                "frame": f,
                "register": reg,
                "c1": [taps.c1.real, taps.c1.imag],
                "c2": [taps.c2.real, taps.c2.imag],
            }
        )

    os.makedirs(cfg.out_dir, exist_ok=True)
    trace_path = os.path.join(cfg.out_dir, "scan_trace.json")
    sched_path = os.path.join(cfg.out_dir, "scan_schedule.json")
    write_trace(trace_path, cfg.experiment, records)
    try:
        with open(sched_path, "w", encoding="utf-8") as fh:
            json.dump({"experiment": cfg.experiment, "frames": sched_rows}, fh,
                      separators=(",", ":"))
            fh.write("\n")
    except OSError as exc:
        raise IOError(f"cannot write schedule {sched_path}: {exc}") from exc

    return {
        "schedule": schedule,
        "bit_errors": bit_errors,
        "raw_metric_errors": raw_errors,
        "all_decoded": all(e == 0 for e in bit_errors),
        "clean_metrics": all(e == 0 for e in raw_errors),
        "trace_path": trace_path,
        "schedule_path": sched_path,
    }


# -------------------------------------------------------------------- covert

def simulate_covert_csi(schedule: list[FuzzerTaps], cfg: ExperimentConfig) -> list:
    """Transmit the taps schedule frame by frame and return the CSI stream.

    The channel takes one drift step per frame (random walk); noise and
    payload bits come from per-frame substreams.
    """
    phy = cfg.phy()
    ch = cfg.resolve_channel((1.0,))
    stream = []
    for f, taps in enumerate(schedule):
        ch = drift_step(ch, cfg.seed, f)
        bits = _payload_bits(phy, cfg.n_data_symbols, substream(cfg.seed, f, 0))
        tx = modulate_frame(bits, phy, taps)
        rx = propagate(tx.samples, ch, substream(cfg.seed, f, 1))
        stream.append(estimate_csi(rx, phy, f))
    return stream


def run_covert(cfg: ExperimentConfig, msg: bytes,
               alphabet: CirAlphabet = DEFAULT_ALPHABET) -> dict:
    """End-to-end covert transfer of msg; reports SER against ground truth."""
    schedule = covert_encode(msg, alphabet)
    sent = [
        alphabet.patterns.index(t)
        for i, t in enumerate(schedule)
        if i % alphabet.pilot_period != 0
    ]
    stream = simulate_covert_csi(schedule, cfg)
    try:
        res = covert_decode(stream, alphabet, cfg.phy(), expected_symbols=sent)
        payload, symbols, errors, crc_ok = res.payload, res.symbols, res.symbol_errors, True
    except CovertDecodeError as exc:
        symbols = exc.symbols
        n = min(len(sent), len(symbols))
        errors = int(np.count_nonzero(np.asarray(sent[:n]) != symbols[:n]))
        payload, crc_ok = exc.payload, False
    return {
        "n_symbols": len(sent),
        "symbol_errors": int(errors),
        "ser": int(errors) / max(len(sent), 1),
        "crc_ok": crc_ok,
        "payload": payload,
        "n_frames": len(schedule),
    }
