"""k x k block decomposition of the adjacency matrix into two symbol streams.

The matrix is zero-padded to n' = ceil(n/k) blocks per side.  Off-diagonal
blocks above the diagonal form ``ut`` in column-major block order
(B_12, B_13, B_23, B_14, ...); diagonal blocks form ``diag``.  A block becomes
a symbol in [0, 2^(k^2)) by scanning it row-major with the first bit as the
most significant.  Symbols are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import CorruptDataError
from .graph import LabeledGraph, num_pairs

MAX_BLOCK_K = 8  # k^2 <= 64 bits per symbol


def symbol_dtype(k: int) -> np.dtype:
    bits = k * k
    for dt in (np.uint8, np.uint16, np.uint32, np.uint64):
        if bits <= 8 * np.dtype(dt).itemsize:
            return np.dtype(dt)
    raise ValueError(f"block size k={k} too large (max {MAX_BLOCK_K})")


def _check_k(k: int) -> None:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"block size k must be a positive integer, got {k!r}")
    if k > MAX_BLOCK_K:
        raise ValueError(f"block size k={k} too large (max {MAX_BLOCK_K})")


@dataclass(frozen=True, eq=False)
class BlockSymbolSequences:
    n_original: int
    k: int
    ut: np.ndarray
    diag: np.ndarray

    @property
    def n_blocks(self) -> int:
        return -(-self.n_original // self.k)

    @property
    def n_padded(self) -> int:
        return self.n_blocks * self.k

    @property
    def m(self) -> int:
        return 1 << (self.k * self.k)

    def validate(self) -> None:
        nb = self.n_blocks
        if self.ut.shape != (num_pairs(nb),) or self.diag.shape != (nb,):
            raise CorruptDataError(
                f"stream lengths {self.ut.shape}, {self.diag.shape} do not match "
                f"n={self.n_original}, k={self.k}")
        top = self.m - 1
        for name, s in (("ut", self.ut), ("diag", self.diag)):
            if s.size and (int(s.max()) > top or (s.dtype.kind == "i" and int(s.min()) < 0)):
                raise CorruptDataError(f"{name} symbol out of range [0, {top}]")


def block_to_symbol(block) -> int:
    """Row-major, MSB-first packing of a k x k 0/1 matrix."""
    b = np.asarray(block)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("block must be square")
    if np.any((b != 0) & (b != 1)):
        raise ValueError("block entries must be 0 or 1")
    s = 0
    for bit in b.ravel().tolist():
        s = (s << 1) | int(bit)
    return s


def symbol_to_block(symbol: int, k: int) -> np.ndarray:
    nbits = k * k
    if not 0 <= symbol < (1 << nbits):
        raise ValueError(f"symbol {symbol} out of range for k={k}")
    bits = [(symbol >> (nbits - 1 - t)) & 1 for t in range(nbits)]
    return np.array(bits, dtype=np.uint8).reshape(k, k)


_TILE = 64  # blocks per tile side; keeps row reads and column writes cache-resident


@numba.njit(cache=True)
def _decompose_kernel(packed, n, k, ut, diag):
    # The bits are row-major but B_ut is column-major, so walk in square
    # tiles of blocks to keep both sides of the transposition in cache.
    one = np.uint64(1)
    top = k * k - 1
    nb = (n + k - 1) // k
    for J0 in range(0, nb, _TILE):
        jend = min((J0 + _TILE) * k, n)
        for I0 in range(0, J0 + 1, _TILE):
            iend = min((I0 + _TILE) * k, n)
            for i in range(I0 * k, iend):
                I = i // k
                r = i - I * k
                row = i * n - i * (i + 1) // 2 - i - 1
                for j in range(max(i + 1, J0 * k), jend):
                    t = row + j
                    byte = packed[t >> 3]
                    if byte != 0 and (byte >> (7 - (t & 7))) & 1:
                        J = j // k
                        c = j - J * k
                        if I == J:
                            diag[I] = diag[I] | ((one << np.uint64(top - (r * k + c)))
                                                 | (one << np.uint64(top - (c * k + r))))
                        else:
                            u = J * (J - 1) // 2 + I
                            ut[u] = ut[u] | (one << np.uint64(top - (r * k + c)))


@numba.njit(cache=True)
def _recompose_kernel(ut, diag, n, k, out):
    one = np.uint64(1)
    top = k * k - 1
    nb = (n + k - 1) // k
    for J0 in range(0, nb, _TILE):
        jend = min((J0 + _TILE) * k, n)
        for I0 in range(0, J0 + 1, _TILE):
            iend = min((I0 + _TILE) * k, n)
            for i in range(I0 * k, iend):
                I = i // k
                r = i - I * k
                row = i * n - i * (i + 1) // 2 - i - 1
                for j in range(max(i + 1, J0 * k), jend):
                    J = j // k
                    c = j - J * k
                    s = diag[I] if I == J else ut[J * (J - 1) // 2 + I]
                    out[row + j] = (s >> np.uint64(top - (r * k + c))) & one


def decompose(g: LabeledGraph, k: int) -> BlockSymbolSequences:
    _check_k(k)
    nb = -(-g.n // k)
    dt = symbol_dtype(k)
    ut = np.zeros(num_pairs(nb), dtype=dt)
    diag = np.zeros(nb, dtype=dt)
    _decompose_kernel(g.packed_bits, g.n, k, ut, diag)
    return BlockSymbolSequences(g.n, k, ut, diag)


def _diag_block_ok(symbols: np.ndarray, k: int) -> np.ndarray:
    """Mask of diagonal symbols whose block is symmetric with zero diagonal."""
    nbits = k * k
    s = symbols.astype(np.uint64)
    bits = ((s[:, None] >> np.arange(nbits - 1, -1, -1, dtype=np.uint64)) & np.uint64(1))
    blocks = bits.reshape(-1, k, k)
    sym = np.all(blocks == blocks.transpose(0, 2, 1), axis=(1, 2))
    zero_diag = np.all(np.diagonal(blocks, axis1=1, axis2=2) == 0, axis=1)
    return sym & zero_diag


def recompose(seqs: BlockSymbolSequences) -> LabeledGraph:
    """Inverse of :func:`decompose`.

    Raises:
        CorruptDataError: symbol out of range, or a diagonal block that is
            asymmetric or has a nonzero diagonal.
    """
    _check_k(seqs.k)
    seqs.validate()
    k, n = seqs.k, seqs.n_original
    if seqs.diag.size:
        bad = ~_diag_block_ok(seqs.diag, k)
        if bad.any():
            idx = int(np.argmax(bad))
            raise CorruptDataError(
                f"diagonal block {idx + 1} (symbol {int(seqs.diag[idx])}) is not a valid "
                "simple-graph block")
    out = np.empty(num_pairs(n), dtype=np.uint8)
    _recompose_kernel(seqs.ut.astype(np.uint64), seqs.diag.astype(np.uint64), n, k, out)
    # padding rows and columns are never read
    return LabeledGraph(n, out)
