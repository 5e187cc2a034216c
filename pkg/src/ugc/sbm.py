"""Stochastic block model: parameters, sampler and entropy calculators.

All entropies are in bits.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import LabeledGraph, num_pairs

# enumeration guard for the brute-force oracle
MAX_BRUTE_N = 6
MAX_BRUTE_L = 3

_ROW_CHUNK = 256


def binary_entropy(p):
    """h(p) in bits with h(0) = h(1) = 0; elementwise on arrays."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    h = np.where((p <= 0) | (p >= 1), 0.0, h)
    return float(h) if h.ndim == 0 else h


@dataclass(frozen=True)
class SbmParams:
    """SBM(n, L, p, W): community prior p and symmetric edge-probability matrix W."""

    n: int
    L: int
    p: tuple[float, ...]
    W: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        W = tuple(tuple(float(x) for x in row) for row in self.W)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "W", W)
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.L < 1 or len(p) != self.L:
            raise ValueError(f"p must have length L={self.L}")
        if len(W) != self.L or any(len(row) != self.L for row in W):
            raise ValueError(f"W must be {self.L}x{self.L}")
        if any(x < 0 for x in p) or abs(math.fsum(p) - 1.0) > 1e-12:
            raise ValueError("p must be a probability vector")
        for a in range(self.L):
            for b in range(self.L):
                if not 0.0 <= W[a][b] <= 1.0:
                    raise ValueError("W entries must lie in [0, 1]")
                if W[a][b] != W[b][a]:
                    raise ValueError("W must be exactly symmetric")

    @property
    def p_array(self) -> np.ndarray:
        return np.array(self.p, dtype=float)

    @property
    def W_array(self) -> np.ndarray:
        return np.array(self.W, dtype=float)

    def edge_density(self) -> float:
        """P(A_12 = 1) = p^T W p."""
        p = self.p_array
        return float(p @ self.W_array @ p)

    def with_n(self, n: int) -> "SbmParams":
        return SbmParams(n, self.L, self.p, self.W)

    # JSON config: {"n": int, "L": int, "p": [...], "W": [[...], ...]}
    def to_dict(self) -> dict:
        return {"n": self.n, "L": self.L, "p": list(self.p), "W": [list(r) for r in self.W]}

    @classmethod
    def from_dict(cls, d: dict) -> "SbmParams":
        missing = {"n", "p", "W"} - d.keys()
        if missing:
            raise ValueError(f"SBM config missing keys: {sorted(missing)}")
        L = int(d.get("L", len(d["p"])))
        return cls(int(d["n"]), L, tuple(d["p"]), tuple(tuple(r) for r in d["W"]))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "SbmParams":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "SbmParams":
        return cls.loads(Path(path).read_text())


def erdos_renyi(n: int, p: float) -> SbmParams:
    return SbmParams(n, 1, (1.0,), ((p,),))


def scaled_params(n: int, p, Q, scaling: str = "const") -> SbmParams:
    """SBM with W = f(n) Q.

    ``scaling`` is one of ``const`` (f=1), ``log_n_over_n`` (f = ln n / n) or
    ``one_over_n`` (f = 1/n).
    """
    if scaling == "const":
        f = 1.0
    elif scaling == "log_n_over_n":
        f = math.log(n) / n
    elif scaling == "one_over_n":
        f = 1.0 / n
    else:
        raise ValueError(f"unknown scaling {scaling!r}")
    Q = np.asarray(Q, dtype=float)
    W = f * Q
    return SbmParams(n, len(p), tuple(p), tuple(map(tuple, W)))


def symmetric_sbm(n: int, L: int, a: float, b: float) -> SbmParams:
    """Symmetric sparse SBM: p uniform, Q_ii = a, Q_ij = b, W = Q / n."""
    Q = np.full((L, L), float(b))
    np.fill_diagonal(Q, float(a))
    return scaled_params(n, [1.0 / L] * L, Q, "one_over_n")


def sample_sbm(params: SbmParams, seed: int) -> tuple[LabeledGraph, np.ndarray]:
    """Draw (A_n, X^n). Communities are returned 0-based, shape (n,).

    Deterministic in ``seed``.
    """
    rng = np.random.default_rng(seed)
    n = params.n
    p = params.p_array
    W = params.W_array
    x = rng.choice(params.L, size=n, p=p) if params.L > 1 else np.zeros(n, dtype=np.int64)
    pieces = []
    for r0 in range(0, n - 1, _ROW_CHUNK):
        r1 = min(r0 + _ROW_CHUNK, n - 1)
        rows = np.arange(r0, r1)
        u = rng.random((r1 - r0, n))
        prob = W[x[rows][:, None], x[None, :]]
        hit = u < prob
        # keep strict upper triangle, row-major
        keep = np.arange(n)[None, :] > rows[:, None]
        pieces.append(hit[keep])
    bits = np.concatenate(pieces).astype(np.uint8) if pieces else np.zeros(0, np.uint8)
    return LabeledGraph(n, bits), x.astype(np.int64)


# -- entropy formulas ---------------------------------------------------------


def conditional_entropy_bits(params: SbmParams) -> float:
    """H(A_n | X^n) = C(n,2) p^T h(W) p."""
    p = params.p_array
    return num_pairs(params.n) * float(p @ binary_entropy(params.W_array) @ p)


def marginal_entropy_upper_bits(params: SbmParams) -> float:
    """C(n,2) h(p^T W p), an upper bound on H(A_n)."""
    return num_pairs(params.n) * binary_entropy(params.edge_density())


def sparse_entropy_approx_bits(params: SbmParams) -> float:
    """First-order sparse-regime approximation C(n,2) q log2(1/q), q = p^T W p.

    Only the leading term; accurate when q is small.
    """
    q = params.edge_density()
    if not 0.0 < q < 1.0:
        raise ValueError(f"sparse approximation undefined for edge density {q}")
    return num_pairs(params.n) * q * math.log2(1.0 / q)


def _all_graph_bits(E: int) -> np.ndarray:
    codes = np.arange(1 << E, dtype=np.int64)
    # bit e of the pattern is the e-th canonical pair, MSB = first pair
    return ((codes[:, None] >> np.arange(E - 1, -1, -1)) & 1).astype(bool)


def graph_distribution(params: SbmParams) -> np.ndarray:
    """P(A_n = a) for every graph by enumeration over labels and edges.

    Index a is the integer whose binary expansion (MSB first) is the
    row-major upper-triangle bit vector.
    """
    n, L = params.n, params.L
    if n > MAX_BRUTE_N or L > MAX_BRUTE_L:
        raise ValueError(
            f"brute force limited to n <= {MAX_BRUTE_N}, L <= {MAX_BRUTE_L}; got n={n}, L={L}")
    E = num_pairs(n)
    bits = _all_graph_bits(E)
    rows, cols = np.triu_indices(n, 1)
    p = params.p_array
    W = params.W_array
    dist = np.zeros(1 << E)
    for labels in itertools.product(range(L), repeat=n):
        lab = np.array(labels)
        px = float(np.prod(p[lab]))
        if px == 0.0:
            continue
        w = W[lab[rows], lab[cols]]
        dist += px * np.prod(np.where(bits, w, 1.0 - w), axis=1)
    return dist


def exact_entropy_bruteforce_bits(params: SbmParams) -> float:
    """Exact H(A_n) by full enumeration (tiny instances only)."""
    dist = graph_distribution(params)
    nz = dist[dist > 0]
    return float(-np.sum(nz * np.log2(nz)))
