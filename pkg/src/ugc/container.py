"""End-to-end compressor and the ``.ugc`` container format.

Layout (little-endian, 34-byte header)::

    magic      4s   b"UGC1"
    version    u8   1
    flags      u8   bit0: 0 = KT, 1 = Laplace
    n_original u64
    k          u32
    ut_len     u64  bytes of the off-diagonal stream
    d_len      u64  bytes of the diagonal stream (0 when k = 1)
    ut stream, d stream
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from . import arith
from .blockcodec import BlockSymbolSequences, decompose, recompose
from .errors import ContainerFormatError
from .graph import LabeledGraph, num_pairs
from .probmodel import Mode

MAGIC = b"UGC1"
VERSION = 1
HEADER = struct.Struct("<4sBBQIQQ")
HEADER_SIZE = HEADER.size  # 34
MAX_K = 4
_FLAG_LAPLACE = 0x01


def default_k(n: int) -> int:
    """max(1, floor(sqrt(0.5 log2 n))), capped at MAX_K."""
    if n < 1:
        raise ValueError("n must be positive")
    k = math.isqrt(int(0.5 * math.log2(n))) if n > 1 else 0
    # isqrt of the floor equals floor of the sqrt for nonnegative reals
    return min(MAX_K, max(1, k))


@dataclass(frozen=True)
class ContainerHeader:
    n_original: int
    k: int
    mode: Mode
    ut_len: int
    d_len: int

    def pack(self) -> bytes:
        flags = _FLAG_LAPLACE if self.mode is Mode.LAPLACE else 0
        return HEADER.pack(MAGIC, VERSION, flags, self.n_original, self.k,
                           self.ut_len, self.d_len)


def read_header(data: bytes) -> ContainerHeader:
    if len(data) < HEADER_SIZE:
        raise ContainerFormatError(f"container shorter than its {HEADER_SIZE}-byte header")
    magic, version, flags, n, k, ut_len, d_len = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ContainerFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ContainerFormatError(f"unsupported version {version}")
    if flags & ~_FLAG_LAPLACE:
        raise ContainerFormatError(f"unsupported flags 0x{flags:02x}")
    if n < 1:
        raise ContainerFormatError("vertex count must be positive")
    if not 1 <= k <= MAX_K:
        raise ContainerFormatError(f"block size k={k} outside 1..{MAX_K}")
    if k == 1 and d_len != 0:
        raise ContainerFormatError("k=1 container must not carry a diagonal stream")
    if HEADER_SIZE + ut_len + d_len != len(data):
        raise ContainerFormatError(
            f"stream lengths {ut_len}+{d_len} do not match payload of "
            f"{len(data) - HEADER_SIZE} bytes")
    mode = Mode.LAPLACE if flags & _FLAG_LAPLACE else Mode.KT
    return ContainerHeader(n, k, mode, ut_len, d_len)


def compress(g: LabeledGraph, k: int | None = None, mode: Mode | str = Mode.KT) -> bytes:
    """Block-decompose ``g`` and code both streams with fresh adaptive models."""
    if k is None:
        k = default_k(g.n)
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= MAX_K:
        raise ValueError(f"block size k must be in 1..{MAX_K}, got {k!r}")
    mode = Mode.parse(mode)
    seqs = decompose(g, int(k))
    m = seqs.m
    ut = arith.encode(seqs.ut, m, mode)
    # for k = 1 every diagonal block is 0 and is not stored
    d = arith.encode(seqs.diag, m, mode) if k > 1 else b""
    header = ContainerHeader(g.n, int(k), mode, len(ut), len(d))
    return header.pack() + ut + d


def decompress(data: bytes) -> LabeledGraph:
    """Inverse of :func:`compress`.

    Raises:
        ContainerFormatError: malformed header or length fields.
        CorruptDataError: a code stream does not decode to a valid graph.
    """
    data = bytes(data)
    h = read_header(data)
    nb = -(-h.n_original // h.k)
    m = 1 << (h.k * h.k)
    ut_bytes = data[HEADER_SIZE:HEADER_SIZE + h.ut_len]
    d_bytes = data[HEADER_SIZE + h.ut_len:]
    ut = arith.decode(ut_bytes, m, h.mode, num_pairs(nb))
    if h.k > 1:
        diag = arith.decode(d_bytes, m, h.mode, nb)
    else:
        diag = np.zeros(nb, dtype=np.uint16)
    return recompose(BlockSymbolSequences(h.n_original, h.k, ut, diag))


def compressed_bits(g: LabeledGraph, k: int | None = None, mode: Mode | str = Mode.KT) -> int:
    return 8 * len(compress(g, k, mode))
