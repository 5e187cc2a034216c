"""m-ary adaptive arithmetic coding with KT or Laplace frequencies.

Integer range coder with 32 bits of state (low/high registers), underflow
counting for straddled intervals, and exact model frequencies; only interval
endpoints are rounded.  Output bits are MSB-first within bytes and the final
partial byte is zero padded.  The decoder must be told the symbol count.

Length contract: ``8 * len(encode(x)) <= ceil(-log2 q(x)) + 1 + SLACK_BITS``.
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import TruncatedStreamError
from .probmodel import Mode, fenwick_add, fenwick_ones, fenwick_prefix, fenwick_search

STATE_BITS = 32
_FULL = (1 << STATE_BITS) - 1
_HALF = 1 << (STATE_BITS - 1)
_QUARTER = 1 << (STATE_BITS - 2)
# after renormalization high - low + 1 > QUARTER, so a total up to QUARTER never
# collapses a symbol interval
MAX_TOTAL = _QUARTER
SLACK_BITS = 32


def max_symbols(m: int, mode: Mode | str) -> int:
    """Longest stream whose final frequency total still fits the coder precision."""
    mode = Mode.parse(mode)
    return (MAX_TOTAL - m) // mode.increment + 1


@numba.njit(cache=True)
def _put_bit(out, nbits, bit):
    # out comes from np.empty: clear each byte as it is started
    if nbits & 7 == 0:
        out[nbits >> 3] = 0
    if bit:
        out[nbits >> 3] |= np.uint8(0x80 >> (nbits & 7))
    return nbits + 1


@numba.njit(cache=True)
def _encode_kernel(symbols, m, incr, out):
    tree = fenwick_ones(m)
    low = np.int64(0)
    high = np.int64(_FULL)
    pending = 0
    nbits = 0
    total = np.int64(m)
    for t in range(symbols.shape[0]):
        s = np.int64(symbols[t])
        rng = high - low + 1
        c_lo = fenwick_prefix(tree, s)
        c_hi = fenwick_prefix(tree, s + 1)
        high = low + (c_hi * rng) // total - 1
        low = low + (c_lo * rng) // total
        fenwick_add(tree, s, incr)
        total += incr
        while True:
            if high < _HALF:
                nbits = _put_bit(out, nbits, 0)
                for _ in range(pending):
                    nbits = _put_bit(out, nbits, 1)
                pending = 0
            elif low >= _HALF:
                nbits = _put_bit(out, nbits, 1)
                for _ in range(pending):
                    nbits = _put_bit(out, nbits, 0)
                pending = 0
                low -= _HALF
                high -= _HALF
            elif low >= _QUARTER and high < _HALF + _QUARTER:
                pending += 1
                low -= _QUARTER
                high -= _QUARTER
            else:
                break
            low = low << 1
            high = (high << 1) | 1
    # terminate: one bit selects a point inside [low, high]
    if low < _QUARTER:
        nbits = _put_bit(out, nbits, 0)
        pending += 1
        for _ in range(pending):
            nbits = _put_bit(out, nbits, 1)
    else:
        nbits = _put_bit(out, nbits, 1)
        pending += 1
        for _ in range(pending):
            nbits = _put_bit(out, nbits, 0)
    return nbits


@numba.njit(cache=True)
def _get_bit(data, pos):
    if (pos >> 3) < data.shape[0]:
        return (data[pos >> 3] >> (7 - (pos & 7))) & 1
    return 0


@numba.njit(cache=True)
def _decode_kernel(data, m, incr, count, out):
    tree = fenwick_ones(m)
    low = np.int64(0)
    high = np.int64(_FULL)
    code = np.int64(0)
    pos = 0
    for _ in range(STATE_BITS):
        code = (code << 1) | _get_bit(data, pos)
        pos += 1
    total = np.int64(m)
    for t in range(count):
        rng = high - low + 1
        value = ((code - low + 1) * total - 1) // rng
        s = fenwick_search(tree, value)
        c_lo = fenwick_prefix(tree, s)
        c_hi = fenwick_prefix(tree, s + 1)
        high = low + (c_hi * rng) // total - 1
        low = low + (c_lo * rng) // total
        out[t] = s
        fenwick_add(tree, s, incr)
        total += incr
        while True:
            if high < _HALF:
                pass
            elif low >= _HALF:
                low -= _HALF
                high -= _HALF
                code -= _HALF
            elif low >= _QUARTER and high < _HALF + _QUARTER:
                low -= _QUARTER
                high -= _QUARTER
                code -= _QUARTER
            else:
                break
            low = low << 1
            high = (high << 1) | 1
            code = (code << 1) | _get_bit(data, pos)
            pos += 1
    # bits the encoder emitted: every register shift plus the two terminating bits
    return pos - STATE_BITS + 2


def encode(symbols, m: int, mode: Mode | str = Mode.KT) -> bytes:
    """Arithmetic-code a sequence of 0-based symbols in [0, m).

    Raises:
        ValueError: symbol out of range, m < 2, or a stream too long for the
            coder's 32-bit precision.
    """
    mode = Mode.parse(mode)
    if m < 2:
        raise ValueError("alphabet size m must be at least 2")
    seq = np.ascontiguousarray(symbols)
    if seq.dtype.kind not in "iu":
        seq = seq.astype(np.int64)
    if seq.size:
        if int(seq.max()) >= m or (seq.dtype.kind == "i" and int(seq.min()) < 0):
            raise ValueError(f"symbols must lie in [0, {m - 1}]")
        if seq.size > max_symbols(m, mode):
            raise ValueError(
                f"stream of {seq.size} symbols exceeds coder precision "
                f"(max {max_symbols(m, mode)} for m={m}, {mode.value})")
    # each symbol costs at most log2(MAX_TOTAL) + 1 bits
    cap = (seq.size * (STATE_BITS + 1) + 2 * STATE_BITS) // 8 + 16
    out = np.empty(cap, dtype=np.uint8)
    nbits = _encode_kernel(seq, np.int64(m), np.int64(mode.increment), out)
    return out[: (nbits + 7) // 8].tobytes()


def decode(data: bytes, m: int, mode: Mode | str, count: int) -> np.ndarray:
    """Inverse of :func:`encode`; trailing bytes beyond the code are ignored.

    Raises:
        TruncatedStreamError: ``data`` is shorter than the encoder's output.
    """
    mode = Mode.parse(mode)
    if m < 2:
        raise ValueError("alphabet size m must be at least 2")
    if count < 0:
        raise ValueError("symbol count must be non-negative")
    if count > max_symbols(m, mode):
        raise ValueError("symbol count exceeds coder precision")
    buf = np.frombuffer(bytes(data), dtype=np.uint8)
    out = np.zeros(count, dtype=np.uint16 if m <= 1 << 16 else np.int64)
    used = _decode_kernel(buf, np.int64(m), np.int64(mode.increment), np.int64(count), out)
    need = (used + 7) // 8
    if need > buf.size:
        raise TruncatedStreamError(f"code stream truncated: need {need} bytes, got {buf.size}")
    return out


def encoded_bits(data: bytes) -> int:
    return 8 * len(data)
