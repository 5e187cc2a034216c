"""In-repo comparison compressors: CSR size accounting and Hilbert + LZ78."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .graph import LabeledGraph


def _ceil_log2(x: int) -> int:
    """ceil(log2 x) for x >= 1, with 0 bumped to 1 so every field has a width."""
    return max(1, (int(x) - 1).bit_length())


def csr_size_bits(g: LabeledGraph) -> int:
    """Upper-triangle CSR: (n+1) offsets of ceil(log2(e+1)) bits plus e neighbor ids
    of ceil(log2 n) bits each."""
    e = g.num_edges()
    return (g.n + 1) * _ceil_log2(e + 1) + e * _ceil_log2(g.n)


# -- Hilbert curve ------------------------------------------------------------


def hilbert_d2xy(side: int, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cell (x, y) visited at step ``d`` of the Hilbert curve on a side x side grid.

    Standard iterative construction with a U-shaped base cell; vectorized over d.
    """
    if side < 1 or side & (side - 1):
        raise ValueError("side must be a power of two")
    t = np.asarray(d, dtype=np.int64).copy()
    x = np.zeros_like(t)
    y = np.zeros_like(t)
    s = 1
    while s < side:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        # rotate quadrant
        flip = (ry == 0) & (rx == 1)
        x = np.where(flip, s - 1 - x, x)
        y = np.where(flip, s - 1 - y, y)
        swap = ry == 0
        x, y = np.where(swap, y, x), np.where(swap, x, y)
        x = x + s * rx
        y = y + s * ry
        t = t // 4
        s *= 2
    return x, y


@dataclass(frozen=True)
class HilbertOrder:
    side: int
    rows: np.ndarray
    cols: np.ndarray

    @classmethod
    def for_side(cls, side: int) -> "HilbertOrder":
        x, y = hilbert_d2xy(side, np.arange(side * side))
        return cls(side, y, x)


def hilbert_side(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def hilbert_linearize(g: LabeledGraph) -> np.ndarray:
    """Full adjacency matrix, zero-padded to a power-of-two side, read along the
    Hilbert curve; returns side^2 bits."""
    side = hilbert_side(g.n)
    order = HilbertOrder.for_side(side)
    adj = np.zeros((side, side), dtype=np.uint8)
    adj[: g.n, : g.n] = g.to_dense()
    return adj[order.rows, order.cols]


# -- LZ78 over a binary alphabet ----------------------------------------------
# Phrase t (0-based) is sent as an index into {empty, phrase_0, ..., phrase_{t-1}}
# using max(1, ceil(log2(t+1))) bits, followed by one literal bit.  A trailing
# partial match is closed by re-sending its longest proper prefix plus its last bit.


def _index_width(t: int) -> int:
    return max(1, int(t).bit_length())


@numba.njit(cache=True)
def _lz78_parse(bits):
    n = bits.shape[0]
    child = np.full((n + 1, 2), -1, dtype=np.int64)
    parent = np.zeros(n + 1, dtype=np.int64)
    last = np.zeros(n + 1, dtype=np.uint8)
    idx = np.zeros(n + 1, dtype=np.int64)
    lit = np.zeros(n + 1, dtype=np.uint8)
    nodes = 1  # node 0 = empty phrase
    nphr = 0
    cur = 0
    for t in range(n):
        b = bits[t]
        nxt = child[cur, b]
        if nxt >= 0:
            cur = nxt
            continue
        child[cur, b] = nodes
        parent[nodes] = cur
        last[nodes] = b
        idx[nphr] = cur
        lit[nphr] = b
        nodes += 1
        nphr += 1
        cur = 0
    if cur != 0:
        idx[nphr] = parent[cur]
        lit[nphr] = last[cur]
        nphr += 1
    return idx[:nphr], lit[:nphr]


def lz78_phrases(bits) -> tuple[np.ndarray, np.ndarray]:
    """Parse into (prefix index, literal) pairs; index 0 is the empty phrase."""
    arr = np.ascontiguousarray(np.asarray(bits, dtype=np.uint8))
    if arr.size and arr.max() > 1:
        raise ValueError("LZ78 input must be binary")
    return _lz78_parse(arr)


def lz78_size_bits(bits) -> int:
    idx, _ = lz78_phrases(bits)
    c = idx.size
    if c == 0:
        return 0
    widths = np.maximum(1, np.ceil(np.log2(np.arange(1, c + 1))).astype(np.int64))
    return int(widths.sum()) + c


def lz78_encode_bits(bits) -> np.ndarray:
    """Encode a 0/1 sequence; returns the code as a 0/1 uint8 array."""
    idx, lit = lz78_phrases(bits)
    out = []
    for t, (i, b) in enumerate(zip(idx.tolist(), lit.tolist())):
        w = _index_width(t)
        out.extend((i >> (w - 1 - s)) & 1 for s in range(w))
        out.append(b)
    return np.array(out, dtype=np.uint8)


def lz78_decode_bits(code) -> np.ndarray:
    code = np.asarray(code, dtype=np.uint8).tolist()
    phrases: list[tuple[int, ...]] = [()]
    out: list[int] = []
    pos = 0
    t = 0
    while pos < len(code):
        w = _index_width(t)
        if pos + w + 1 > len(code):
            raise ValueError("LZ78 code ends inside a phrase")
        i = 0
        for s in range(w):
            i = (i << 1) | code[pos + s]
        pos += w
        if i >= len(phrases):
            raise ValueError(f"LZ78 phrase index {i} out of range")
        phrase = phrases[i] + (code[pos],)
        pos += 1
        phrases.append(phrase)
        out.extend(phrase)
        t += 1
    return np.array(out, dtype=np.uint8)


def hilbert_lz78_size_bits(g: LabeledGraph) -> int:
    return lz78_size_bits(hilbert_linearize(g))
