"""Labeled simple graphs stored as a packed upper-triangle bit vector.

Pair (i, j) with i < j lives at a fixed row-major position of the upper
triangle: A_12, A_13, ..., A_1n, A_23, ..., A_{n-1,n}.  Vertex indices in the
public API are 1-based; dense numpy matrices are 0-based as usual.
"""

from __future__ import annotations

import io
import logging
import re
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import EdgeListError

log = logging.getLogger(__name__)

_HEADER_RE = re.compile(r"^#\s*n\s*=\s*(\d+)\s*$")


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(n: int, i, j):
    """Row-major upper-triangle position of the 1-based pair (i, j), i < j.

    Works elementwise on numpy arrays.
    """
    i0 = i - 1
    return i0 * n - (i0 * (i0 + 1)) // 2 + (j - i - 1)


def _upper_mask(n: int) -> np.ndarray:
    return np.triu(np.ones((n, n), dtype=bool), 1)


class LabeledGraph:
    """Immutable simple undirected graph on vertices 1..n.

    Args:
        n: vertex count, at least 1.
        ut_bits: packed (``np.packbits``, big-endian) upper-triangle bits, or an
            unpacked 0/1 array of length n(n-1)/2.
    """

    __slots__ = ("_n", "_packed")

    def __init__(self, n: int, ut_bits: np.ndarray):
        n = int(n)
        if n < 1:
            raise ValueError(f"vertex count must be positive, got {n}")
        npairs = num_pairs(n)
        bits = np.asarray(ut_bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise ValueError("ut_bits must be one-dimensional")
        if bits.size == npairs and (npairs == 0 or bits.max() <= 1):
            packed = np.packbits(bits)
        elif bits.size == (npairs + 7) // 8:
            packed = bits.copy()
            # keep padding bits zero so equality is well defined
            spare = 8 * packed.size - npairs
            if spare:
                packed[-1] &= (0xFF << spare) & 0xFF
        else:
            raise ValueError(
                f"expected {npairs} bits (or {(npairs + 7) // 8} packed bytes) for n={n}, "
                f"got array of size {bits.size}"
            )
        packed.flags.writeable = False
        self._n = n
        self._packed = packed

    # -- constructors -------------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "LabeledGraph":
        return cls(n, np.zeros(num_pairs(n), dtype=np.uint8))

    @classmethod
    def complete(cls, n: int) -> "LabeledGraph":
        return cls(n, np.ones(num_pairs(n), dtype=np.uint8))

    @classmethod
    def from_dense(cls, adj: np.ndarray) -> "LabeledGraph":
        """Build from a square 0/1 matrix; only the strict upper triangle is read."""
        adj = np.asarray(adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency matrix must be square")
        n = adj.shape[0]
        return cls(n, (adj[_upper_mask(n)] != 0).astype(np.uint8))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "LabeledGraph":
        """Build from 1-based (i, j) pairs. Self-loops are rejected."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64).reshape(-1, 2)
        bits = np.zeros(num_pairs(n), dtype=np.uint8)
        if arr.size:
            if arr.min() < 1 or arr.max() > n:
                raise ValueError(f"vertex index out of range 1..{n}")
            lo = arr.min(axis=1)
            hi = arr.max(axis=1)
            if np.any(lo == hi):
                raise ValueError("self-loops are not allowed in a simple graph")
            bits[pair_index(n, lo, hi)] = 1
        return cls(n, bits)

    # -- accessors ----------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def num_pairs(self) -> int:
        return num_pairs(self._n)

    @property
    def packed_bits(self) -> np.ndarray:
        return self._packed

    @property
    def ut_bits(self) -> np.ndarray:
        """Unpacked upper-triangle bits (row-major), length n(n-1)/2."""
        return np.unpackbits(self._packed, count=self.num_pairs)

    def num_edges(self) -> int:
        return int(np.unpackbits(self._packed).sum())

    def get_edge(self, i: int, j: int) -> int:
        n = self._n
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"vertex pair ({i}, {j}) out of range 1..{n}")
        if i == j:
            return 0
        if i > j:
            i, j = j, i
        pos = int(pair_index(n, i, j))
        return (int(self._packed[pos >> 3]) >> (7 - (pos & 7))) & 1

    def edges(self) -> np.ndarray:
        """1-based (i, j), i < j, in canonical order; shape (e, 2)."""
        n = self._n
        if n < 2:
            return np.zeros((0, 2), dtype=np.int64)
        rows, cols = np.triu_indices(n, 1)
        on = self.ut_bits.astype(bool)
        return np.stack([rows[on] + 1, cols[on] + 1], axis=1).astype(np.int64)

    def to_dense(self) -> np.ndarray:
        """Symmetric n x n uint8 adjacency matrix with zero diagonal."""
        n = self._n
        adj = np.zeros((n, n), dtype=np.uint8)
        adj[_upper_mask(n)] = self.ut_bits
        return adj | adj.T

    def degrees(self) -> np.ndarray:
        return self.to_dense().sum(axis=1, dtype=np.int64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._packed, other._packed)

    def __hash__(self) -> int:
        return hash((self._n, self._packed.tobytes()))

    def __repr__(self) -> str:
        return f"LabeledGraph(n={self._n}, edges={self.num_edges()})"


# -- edge-list text format --------------------------------------------------


@dataclass
class EdgeListStats:
    records: int = 0
    duplicates: int = 0
    self_loops: int = 0
    index_base: int = 1

    @property
    def dropped(self) -> int:
        return self.duplicates + self.self_loops


def _lines(source) -> Iterable[str]:
    if isinstance(source, bytes):
        return io.StringIO(source.decode()).readlines()
    if isinstance(source, str):
        return source.splitlines()
    return source


def load_edgelist(source: str | bytes | TextIO | Iterable[str],
                  index_base: int | None = None,
                  return_stats: bool = False):
    """Parse an edge list into a LabeledGraph.

    One edge per line as two integers separated by whitespace (commas are
    accepted too); further columns are ignored. Lines starting with ``#`` or
    ``%`` are comments, except a ``# n=<n>`` header which fixes the vertex
    count. Ids are treated as 0-based if any 0 appears, unless ``index_base``
    says otherwise. Duplicates and self-loops are dropped with a warning.

    Raises:
        EdgeListError: malformed token, negative id, or no way to infer n.
    """
    if index_base not in (None, 0, 1):
        raise ValueError("index_base must be 0, 1 or None")
    header_n = None
    us: list[int] = []
    vs: list[int] = []
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line:
            continue
        if line[0] in "#%":
            m = _HEADER_RE.match(line)
            if m:
                header_n = int(m.group(1))
            continue
        tokens = line.replace(",", " ").split()
        if len(tokens) < 2:
            raise EdgeListError(f"expected two vertex ids, got {line!r}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(f"non-integer vertex id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListError(f"negative vertex id in {line!r}", lineno)
        us.append(u)
        vs.append(v)

    stats = EdgeListStats(records=len(us))
    u_arr = np.asarray(us, dtype=np.int64)
    v_arr = np.asarray(vs, dtype=np.int64)
    if index_base is None:
        index_base = 0 if (u_arr.size and min(u_arr.min(), v_arr.min()) == 0) else 1
    elif index_base == 1 and u_arr.size and min(u_arr.min(), v_arr.min()) == 0:
        raise EdgeListError("vertex id 0 found but index_base=1")
    stats.index_base = index_base
    u_arr = u_arr + (1 - index_base)
    v_arr = v_arr + (1 - index_base)

    n = int(max(u_arr.max(), v_arr.max())) if u_arr.size else 0
    if header_n is not None:
        n = max(n, header_n)
    if n < 1:
        raise EdgeListError("cannot determine vertex count: no edges and no '# n=' header")

    loops = u_arr == v_arr
    stats.self_loops = int(loops.sum())
    lo = np.minimum(u_arr, v_arr)[~loops]
    hi = np.maximum(u_arr, v_arr)[~loops]
    idx = pair_index(n, lo, hi)
    unique = np.unique(idx)
    stats.duplicates = int(idx.size - unique.size)
    if stats.dropped:
        warnings.warn(
            f"edge list: dropped {stats.dropped} records "
            f"({stats.duplicates} duplicates, {stats.self_loops} self-loops)",
            stacklevel=2,
        )
    bits = np.zeros(num_pairs(n), dtype=np.uint8)
    bits[unique] = 1
    g = LabeledGraph(n, bits)
    return (g, stats) if return_stats else g


def read_edgelist(path: str | Path, index_base: int | None = None,
                  return_stats: bool = False):
    with open(path, "r") as fh:
        return load_edgelist(fh, index_base=index_base, return_stats=return_stats)


def write_edgelist(g: LabeledGraph) -> str:
    """Serialize to 1-based canonical-order text with a ``# n=<n>`` header."""
    e = g.edges()
    body = "".join(f"{i} {j}\n" for i, j in e.tolist())
    return f"# n={g.n}\n" + body
