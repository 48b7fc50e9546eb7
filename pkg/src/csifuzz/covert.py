"""Covert channel over time sequences of artificial CIRs.

Each data frame carries one base-M symbol as a choice of fuzzer taps; an
identity-taps pilot frame is inserted on a fixed period. The receiver takes
the ratio of each data-frame CSI to the most recent pilot CSI, which cancels
the environment in static conditions, then picks the nearest alphabet
response. Framing is a 2-byte big-endian length prefix, the message bytes,
and a CRC-16 over length + message.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CovertDecodeError
from .fuzzer import IDENTITY_TAPS, FuzzerTaps, artificial_response
from .phy.frame import CsiVector
from .phy.params import USED_IDX

_PILOT_CSI_FLOOR = 1e-9


def crc16(data: bytes) -> int:
    """CRC-16, polynomial 0x1021, init 0xffff, no reflection or xor-out."""
    crc = 0xFFFF
    for byte in data:
        crc ^= byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ 0x1021 if crc & 0x8000 else crc << 1) & 0xFFFF
    return crc


def frame_message(msg: bytes) -> bytes:
    """Length prefix + payload + CRC-16 over both."""
    if len(msg) > 0xFFFF:
        raise ValueError("message longer than the 16-bit length field")
    body = len(msg).to_bytes(2, "big") + bytes(msg)
    return body + crc16(body).to_bytes(2, "big")


def _bytes_to_symbols(data: bytes, m: int) -> np.ndarray:
    """Big-endian bit packing into log2(m)-bit symbols, zero-padded."""
    bits_per = (m - 1).bit_length()
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    pad = (-bits.size) % bits_per
    bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    weights = 1 << np.arange(bits_per - 1, -1, -1)
    return bits.reshape(-1, bits_per) @ weights


def _symbols_to_bytes(symbols: np.ndarray, m: int) -> bytes:
    bits_per = (m - 1).bit_length()
    sym = np.asarray(symbols, dtype=np.int64).reshape(-1, 1)
    bits = ((sym >> np.arange(bits_per - 1, -1, -1)) & 1).reshape(-1)
    bits = bits[: (bits.size // 8) * 8]
    return np.packbits(bits.astype(np.uint8)).tobytes()


@dataclass(frozen=True)
class CirAlphabet:
    """Ordered taps patterns (size M, a power of two) plus the pilot period."""

    patterns: tuple
    pilot_period: int = 8
    d_min: float = 0.1

    def __post_init__(self):
        pats = tuple(self.patterns)
        m = len(pats)
        if m < 2 or m & (m - 1):
            raise ValueError(f"alphabet size must be a power of two >= 2, got {m}")
        if not all(isinstance(p, FuzzerTaps) for p in pats):
            raise TypeError("patterns must be FuzzerTaps")
        if self.pilot_period < 2:
            raise ValueError("pilot_period must be >= 2")
        if not self.d_min > 0:
            raise ValueError("d_min must be positive")
        resp = self.responses()
        for a in range(m):
            for b in range(a + 1, m):
                d = float(np.sqrt(np.mean(np.abs(resp[a] - resp[b]) ** 2)))
                if d < self.d_min:
                    raise ValueError(
                        f"patterns {a} and {b} are only {d:.4f} apart (< d_min={self.d_min})"
                    )
        object.__setattr__(self, "patterns", pats)

    @property
    def m(self) -> int:
        return len(self.patterns)

    def responses(self) -> np.ndarray:
        """(M, 52) artificial responses on the used subcarriers."""
        return np.stack(
            [artificial_response(p, 64)[USED_IDX] for p in self.patterns]
        )


DEFAULT_ALPHABET = CirAlphabet(
    patterns=(
        FuzzerTaps(0.35j, 0.1),
        FuzzerTaps(-0.35j, 0.1),
        FuzzerTaps(0.35, 0.1j),
        FuzzerTaps(-0.35, 0.1j),
    )
)


@dataclass(frozen=True)
class CovertDecodeResult:
    payload: bytes
    symbols: np.ndarray
    distances: np.ndarray
    symbol_errors: Optional[int] = None


def covert_encode(msg: bytes, alphabet: CirAlphabet = DEFAULT_ALPHABET) -> list[FuzzerTaps]:
    """Per-frame taps schedule: framed message symbols with pilots interleaved.

    Frame i is a pilot (identity taps) whenever i % pilot_period == 0, so the
    schedule always opens with a pilot the decoder can reference.
    """
    symbols = _bytes_to_symbols(frame_message(msg), alphabet.m)
    schedule: list[FuzzerTaps] = []
    it = iter(symbols)
    nxt = next(it, None)
    i = 0
    while nxt is not None:
        if i % alphabet.pilot_period == 0:
            schedule.append(IDENTITY_TAPS)
        else:
            schedule.append(alphabet.patterns[int(nxt)])
            nxt = next(it, None)
        i += 1
    return schedule


def _nearest_patterns(csi_stream: Sequence[CsiVector], alphabet: CirAlphabet):
    """Classify each data frame against the alphabet via the pilot ratio."""
    resp = alphabet.responses()
    pilot = None
    symbols, dists = [], []
    for i, csi in enumerate(csi_stream):
        if i % alphabet.pilot_period == 0:
            pilot = np.asarray(csi.values, dtype=np.complex128)
            continue
        if pilot is None:
            raise ValueError("stream must start with a pilot frame")
        alive = np.abs(pilot) > _PILOT_CSI_FLOOR
        if not np.any(alive):
            raise ValueError(f"pilot CSI before frame {i} is entirely below floor")
        q = np.asarray(csi.values)[alive] / pilot[alive]
        d = np.sqrt(np.mean(np.abs(q[None, :] - resp[:, alive]) ** 2, axis=1))
        symbols.append(int(np.argmin(d)))  # argmin takes the lowest index on ties
        dists.append(float(d.min()))
    return np.asarray(symbols, dtype=np.int64), np.asarray(dists)


def covert_decode(
    csi_stream: Sequence[CsiVector],
    alphabet: CirAlphabet = DEFAULT_ALPHABET,
    cfg=None,
    expected_symbols=None,
) -> CovertDecodeResult:
    """Decode a CSI stream back to message bytes.

    Returns the payload with per-symbol nearest distances; when
    expected_symbols is given (simulation ground truth) the result carries
    the symbol error count. CRC or framing failure raises CovertDecodeError
    holding the best-effort bytes and distances.
    """
    symbols, dists = _nearest_patterns(csi_stream, alphabet)
    errors = None
    if expected_symbols is not None:
        exp = np.asarray(expected_symbols, dtype=np.int64)
        n = min(exp.size, symbols.size)
        errors = int(np.count_nonzero(exp[:n] != symbols[:n])) + abs(exp.size - symbols.size)

    raw = _symbols_to_bytes(symbols, alphabet.m)

    def fail(reason: str, best: bytes):
        raise CovertDecodeError(reason, payload=best, symbols=symbols, distances=dists)

    if len(raw) < 4:
        fail(f"stream too short for framing: {len(raw)} bytes", raw)
    n = int.from_bytes(raw[:2], "big")
    if len(raw) < 4 + n:
        fail(f"length field {n} exceeds decoded {len(raw)} bytes", raw[2:])
    body, crc_rx = raw[: 2 + n], int.from_bytes(raw[2 + n : 4 + n], "big")
    if crc16(body) != crc_rx:
        fail("CRC mismatch", body[2:])
    return CovertDecodeResult(body[2:], symbols, dists, errors)
