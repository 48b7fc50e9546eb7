"""Rate-1/2 convolutional code (K=7, generators 133/171 octal) with a soft
Viterbi decoder, plus the per-symbol block interleaver."""
from __future__ import annotations

import numpy as np

# generator impulse responses, newest bit first
_G_A = np.array([1, 0, 1, 1, 0, 1, 1], dtype=np.uint8)  # 133 octal
_G_B = np.array([1, 1, 1, 1, 0, 0, 1], dtype=np.uint8)  # 171 octal
N_TAIL = 6


def _check_bits(bits) -> np.ndarray:
    b = np.asarray(bits)
    if b.ndim != 1 or b.size == 0:
        raise ValueError("bits must be a non-empty 1-d sequence")
    b = b.astype(np.uint8)
    if np.any(b > 1):
        raise ValueError("bits must be 0/1")
    return b


def conv_encode(bits) -> np.ndarray:
    """Encode with 6 zero tail bits; output interleaves the two generator
    streams (A then B per input bit), length 2*(len(bits)+6)."""
    b = _check_bits(bits)
    b = np.concatenate([b, np.zeros(N_TAIL, dtype=np.uint8)])
    a = np.convolve(b, _G_A)[: b.size] % 2
    bb = np.convolve(b, _G_B)[: b.size] % 2
    out = np.empty(2 * b.size, dtype=np.uint8)
    out[0::2] = a
    out[1::2] = bb
    return out


# trellis tables: state = previous 6 input bits, newest in bit 5.
# next state after input u is (u << 5) | (state >> 1); register for output
# computation is (u << 6) | state with the generators indexed newest-first.
def _build_trellis():
    ns = np.arange(64)
    u = ns >> 5
    p0 = (ns & 31) << 1
    p1 = p0 + 1

    def outs(pred, u):
        reg = (u << 6) | pred
        taps = (reg[:, None] >> np.arange(6, -1, -1)) & 1
        a = taps[:, _G_A.astype(bool)].sum(axis=1) & 1
        b = taps[:, _G_B.astype(bool)].sum(axis=1) & 1
        return a, b

    a0, b0 = outs(p0, u)
    a1, b1 = outs(p1, u)
    # branch metric signs: +llr votes for coded bit 0
    return (
        p0.astype(np.intp),
        p1.astype(np.intp),
        (1.0 - 2.0 * a0, 1.0 - 2.0 * b0),
        (1.0 - 2.0 * a1, 1.0 - 2.0 * b1),
    )


_P0, _P1, (_SA0, _SB0), (_SA1, _SB1) = _build_trellis()


def viterbi_decode(llrs) -> np.ndarray:
    """Maximum-likelihood decode of soft metrics (positive llr = bit 0).

    Accepts one frame (shape (2*(L+6),)) or a batch (B, 2*(L+6)); returns the
    L information bits per frame with the 6 tail bits stripped. The trellis
    starts and ends in state 0 (the encoder appends zero tail bits).
    """
    m = np.asarray(llrs, dtype=np.float64)
    single = m.ndim == 1
    if single:
        m = m[None, :]
    if m.ndim != 2 or m.shape[1] == 0 or m.shape[1] % 2:
        raise ValueError("llrs must have even, nonzero length")
    n_steps = m.shape[1] // 2
    if n_steps <= N_TAIL:
        raise ValueError(f"too few metrics for a terminated frame: {m.shape[1]}")
    nb = m.shape[0]

    pm = np.full((nb, 64), -1e15)
    pm[:, 0] = 0.0
    bp = np.empty((nb, n_steps, 64), dtype=bool)
    for t in range(n_steps):
        la = m[:, 2 * t, None]
        lb = m[:, 2 * t + 1, None]
        cand0 = pm[:, _P0] + la * _SA0 + lb * _SB0
        cand1 = pm[:, _P1] + la * _SA1 + lb * _SB1
        take = cand1 > cand0
        bp[:, t, :] = take
        pm = np.where(take, cand1, cand0)

    rows = np.arange(nb)
    state = np.zeros(nb, dtype=np.intp)
    bits = np.empty((nb, n_steps), dtype=np.uint8)
    for t in range(n_steps - 1, -1, -1):
        bits[:, t] = state >> 5
        took = bp[rows, t, state]
        state = np.where(took, _P1[state], _P0[state])
    bits = bits[:, : n_steps - N_TAIL]
    return bits[0] if single else bits


def _interleave_perm(n_cbps: int) -> np.ndarray:
    """Output position for each input index k (two-step block permutation)."""
    n_bpsc = max(n_cbps // 48, 1)
    s = max(n_bpsc // 2, 1)
    k = np.arange(n_cbps)
    i = (n_cbps // 16) * (k % 16) + k // 16
    j = s * (i // s) + (i + n_cbps - (16 * i) // n_cbps) % s
    return j


def interleave(values, n_cbps: int) -> np.ndarray:
    """Permute within each n_cbps block; works on bits or soft metrics."""
    v = np.asarray(values)
    if v.ndim != 1 or v.size == 0 or v.size % n_cbps:
        raise ValueError(f"length {v.size} not a multiple of n_cbps={n_cbps}")
    j = _interleave_perm(n_cbps)
    out = np.empty_like(v)
    blocks = v.reshape(-1, n_cbps)
    ob = out.reshape(-1, n_cbps)
    ob[:, j] = blocks
    return out


def deinterleave(values, n_cbps: int) -> np.ndarray:
    v = np.asarray(values)
    if v.ndim != 1 or v.size == 0 or v.size % n_cbps:
        raise ValueError(f"length {v.size} not a multiple of n_cbps={n_cbps}")
    j = _interleave_perm(n_cbps)
    return v.reshape(-1, n_cbps)[:, j].reshape(-1)
