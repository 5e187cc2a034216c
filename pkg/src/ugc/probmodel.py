"""KT and Laplace sequential probability assignments.

Both estimators are kept as integer frequencies so every conditional is an
exact rational:

    KT:       freq_i = 2 N_i + 1,  total = 2 j + m   (= (N_i + 1/2) / (j + m/2))
    Laplace:  freq_i = N_i + 1,    total = j + m

Cumulative frequencies live in a Fenwick tree, shared with the arithmetic
coder's compiled kernels.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numba
import numpy as np

MAX_EXACT_N = 10_000


class Mode(str, enum.Enum):
    KT = "kt"
    LAPLACE = "laplace"

    @classmethod
    def parse(cls, value: "Mode | str") -> "Mode":
        if isinstance(value, Mode):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown mode {value!r}; expected 'kt' or 'laplace'") from None

    @property
    def increment(self) -> int:
        """Frequency added to a symbol each time it is observed."""
        return 2 if self is Mode.KT else 1


# -- Fenwick tree over int64 frequencies (0-based symbols) --------------------


@numba.njit(cache=True)
def fenwick_build(freqs):
    n = freqs.shape[0]
    tree = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        tree[i + 1] = freqs[i]
    for i in range(1, n + 1):
        parent = i + (i & -i)
        if parent <= n:
            tree[parent] += tree[i]
    return tree


@numba.njit(cache=True)
def fenwick_ones(m):
    """Tree for m symbols that all have frequency 1."""
    tree = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, m + 1):
        tree[i] = i & -i
    return tree


@numba.njit(cache=True)
def fenwick_add(tree, symbol, delta):
    i = symbol + 1
    n = tree.shape[0] - 1
    while i <= n:
        tree[i] += delta
        i += i & -i


@numba.njit(cache=True)
def fenwick_prefix(tree, stop):
    """Sum of frequencies of symbols < stop."""
    s = 0
    i = stop
    while i > 0:
        s += tree[i]
        i -= i & -i
    return s


@numba.njit(cache=True)
def fenwick_search(tree, value):
    """Largest symbol s with prefix(s) <= value, i.e. prefix(s) <= value < prefix(s+1).

    Requires 0 <= value < total and all frequencies positive.
    """
    n = tree.shape[0] - 1
    pos = 0
    step = 1
    while step * 2 <= n:
        step *= 2
    rem = value
    while step > 0:
        nxt = pos + step
        if nxt <= n and tree[nxt] <= rem:
            pos = nxt
            rem -= tree[nxt]
        step //= 2
    return pos


# -- adaptive model -----------------------------------------------------------


class AdaptiveModel:
    """Per-stream symbol counts realizing the KT or Laplace assignment.

    Args:
        m: alphabet size, at least 2.
        mode: ``Mode.KT`` or ``Mode.LAPLACE``.
    """

    def __init__(self, m: int, mode: Mode | str = Mode.KT):
        if m < 2:
            raise ValueError("alphabet size m must be at least 2")
        self.m = int(m)
        self.mode = Mode.parse(mode)
        self.counts = np.zeros(self.m, dtype=np.int64)
        self.total = 0
        self._tree = fenwick_ones(self.m)

    def _check(self, symbol: int) -> int:
        s = int(symbol)
        if not 0 <= s < self.m:
            raise ValueError(f"symbol {symbol} out of range [0, {self.m - 1}]")
        return s

    def frequency(self, symbol: int) -> int:
        s = self._check(symbol)
        return self.mode.increment * int(self.counts[s]) + 1

    @property
    def total_frequency(self) -> int:
        return self.mode.increment * self.total + self.m

    def cumulative(self, symbol: int) -> int:
        """Cumulative frequency of all symbols < ``symbol`` (symbol may equal m)."""
        s = int(symbol)
        if not 0 <= s <= self.m:
            raise ValueError(f"cumulative index {symbol} out of range [0, {self.m}]")
        return int(fenwick_prefix(self._tree, s))

    def find(self, value: int) -> int:
        """Symbol whose frequency interval contains ``value``."""
        if not 0 <= value < self.total_frequency:
            raise ValueError("value outside [0, total_frequency)")
        return int(fenwick_search(self._tree, int(value)))

    def conditional(self, symbol: int) -> Fraction:
        return Fraction(self.frequency(symbol), self.total_frequency)

    def update(self, symbol: int) -> "AdaptiveModel":
        s = self._check(symbol)
        self.counts[s] += 1
        self.total += 1
        fenwick_add(self._tree, s, self.mode.increment)
        return self

    def __repr__(self) -> str:
        return f"AdaptiveModel(m={self.m}, mode={self.mode.value}, total={self.total})"


def conditional(model: AdaptiveModel, symbol: int) -> Fraction:
    return model.conditional(symbol)


def update(model: AdaptiveModel, symbol: int) -> AdaptiveModel:
    return model.update(symbol)


# -- marginals ----------------------------------------------------------------


def _counts(sequence: Iterable[int], m: int) -> np.ndarray:
    seq = np.asarray(list(sequence) if not isinstance(sequence, np.ndarray) else sequence,
                     dtype=np.int64)
    if seq.size and (seq.min() < 0 or seq.max() >= m):
        raise ValueError(f"symbols must lie in [0, {m - 1}]")
    return np.bincount(seq, minlength=m) if seq.size else np.zeros(m, dtype=np.int64)


def _double_factorial_odd(k: int) -> int:
    """(2k - 1)!! with (-1)!! = 1."""
    out = 1
    for t in range(1, 2 * k, 2):
        out *= t
    return out


def marginal(sequence: Sequence[int], m: int, mode: Mode | str = Mode.KT) -> Fraction:
    """Exact marginal q(x^N) from the closed form.

    KT:      prod (2 N_i - 1)!! / (m (m+2) ... (m + 2N - 2))
    Laplace: prod N_i! / N! / C(N + m - 1, m - 1)
    """
    mode = Mode.parse(mode)
    counts = _counts(sequence, m)
    N = int(counts.sum())
    if N > MAX_EXACT_N:
        raise OverflowError(f"exact marginal limited to N <= {MAX_EXACT_N}")
    nz = [int(c) for c in counts if c]
    if mode is Mode.KT:
        num = 1
        for c in nz:
            num *= _double_factorial_odd(c)
        den = 1
        for t in range(N):
            den *= m + 2 * t
        return Fraction(num, den)
    num = 1
    for c in nz:
        num *= math.factorial(c)
    return Fraction(num, math.factorial(N) * math.comb(N + m - 1, m - 1))


def marginal_chain(sequence: Sequence[int], m: int, mode: Mode | str = Mode.KT) -> Fraction:
    """Exact marginal as the product of sequential conditionals."""
    model = AdaptiveModel(m, mode)
    q = Fraction(1)
    seq = list(sequence)
    if len(seq) > MAX_EXACT_N:
        raise OverflowError(f"exact marginal limited to N <= {MAX_EXACT_N}")
    for s in seq:
        q *= model.conditional(s)
        model.update(s)
    return q


def log2_marginal_from_counts(counts: np.ndarray, mode: Mode | str = Mode.KT) -> float:
    """log2 q(x^N) from symbol counts via log-gamma; no size limit."""
    mode = Mode.parse(mode)
    counts = np.asarray(counts, dtype=np.int64)
    m = counts.size
    N = int(counts.sum())
    nz = counts[counts > 0].astype(float)
    lg = math.lgamma
    if mode is Mode.KT:
        num = float(np.sum([lg(c + 0.5) for c in nz])) - nz.size * lg(0.5)
        den = lg(N + m / 2) - lg(m / 2)
    else:
        num = float(np.sum([lg(c + 1.0) for c in nz]))
        den = lg(N + m) - lg(m)
    return (num - den) / math.log(2)


def ideal_code_length_bits(sequence, m: int, mode: Mode | str = Mode.KT) -> float:
    """-log2 q(x^N): the length an unbounded-precision arithmetic coder targets."""
    return -log2_marginal_from_counts(_counts(sequence, m), mode)


# -- expected-length bounds ---------------------------------------------------


def laplace_length_bound_bits(N: int, m: int, H1: float) -> float:
    """m log2(2eN) + N H1."""
    if N < 1 or m < 2 or H1 < 0:
        raise ValueError("need N >= 1, m >= 2, H1 >= 0")
    return m * math.log2(2 * math.e * N) + N * H1


def kt_length_bound_bits(N: int, m: int, H1: float) -> float:
    """(m/2) log2(e(1 + 2N/m)) + (1/2) log2(pi N) + N H1."""
    if N < 1 or m < 2 or H1 < 0:
        raise ValueError("need N >= 1, m >= 2, H1 >= 0")
    return (m / 2) * math.log2(math.e * (1 + 2 * N / m)) + 0.5 * math.log2(math.pi * N) + N * H1
