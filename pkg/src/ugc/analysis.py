"""Theory-facing computations.

* exact joint probabilities of adjacency entries and the non-stationarity of
  the horizontal / vertical / diagonal listings of the upper triangle;
* Monte-Carlo universality curves E[len] / H(A_n | X^n);
* the Galton-Watson BC entropy and the second-order length statistic.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import container
from .probmodel import Mode
from .sbm import SbmParams, conditional_entropy_bits, sample_sbm

MAX_JOINT_N = 12


class OrderingKind(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DIAGONAL = "diagonal"

    def pairs(self, n: int) -> list[tuple[int, int]]:
        """The C(n,2) vertex pairs in this listing order (1-based, as written)."""
        if self is OrderingKind.HORIZONTAL:
            return [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
        if self is OrderingKind.VERTICAL:
            return [(i, j) for j in range(2, n + 1) for i in range(1, j)]
        out = []
        half = n // 2
        for d in range(1, half + 1):
            # the last offset of an even n only has n/2 distinct pairs
            count = n // 2 if (n % 2 == 0 and d == half) else n
            for i in range(1, count + 1):
                j = (i + d - 1) % n + 1
                out.append((i, j))
        return out


def _fraction(x: float) -> Fraction:
    return Fraction(x)


def joint_probability(params: SbmParams,
                      constraints: Iterable[tuple[int, int, int]]) -> Fraction:
    """Exact P(A_ij = bit for every (i, j, bit)) by summing over community labels.

    Vertices not touched by a constraint marginalize out, so only their
    labels are enumerated. Probabilities are the exact rationals of the float
    parameters, with the prior renormalized to sum to exactly 1.
    """
    n = params.n
    if n > MAX_JOINT_N:
        raise ValueError(f"joint_probability is limited to n <= {MAX_JOINT_N}")
    fixed: dict[tuple[int, int], int] = {}
    for i, j, bit in constraints:
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise ValueError(f"invalid vertex pair ({i}, {j}) for n={n}")
        if bit not in (0, 1):
            raise ValueError("constraint bits must be 0 or 1")
        key = (min(i, j), max(i, j))
        if fixed.setdefault(key, bit) != bit:
            return Fraction(0)
    if not fixed:
        return Fraction(1)
    verts = sorted({v for pair in fixed for v in pair})
    pos = {v: t for t, v in enumerate(verts)}
    p = [_fraction(x) for x in params.p]
    mass = sum(p)
    p = [x / mass for x in p]
    W = [[_fraction(x) for x in row] for row in params.W]
    total = Fraction(0)
    for labels in itertools.product(range(params.L), repeat=len(verts)):
        weight = Fraction(1)
        for lab in labels:
            weight *= p[lab]
        if weight == 0:
            continue
        for (i, j), bit in fixed.items():
            w = W[labels[pos[i]]][labels[pos[j]]]
            weight *= w if bit else 1 - w
            if weight == 0:
                break
        total += weight
    return total


@dataclass
class NonstationarityRow:
    ordering: str
    max_gap: float
    position_a: int | None
    position_b: int | None
    pattern: str
    prob_a: Fraction
    prob_b: Fraction


def window_distributions(params: SbmParams, ordering: OrderingKind,
                         window: int = 3) -> list[dict[tuple[int, ...], Fraction]]:
    pairs = ordering.pairs(params.n)
    out = []
    for s in range(len(pairs) - window + 1):
        win = pairs[s:s + window]
        dist = {}
        for pattern in itertools.product((0, 1), repeat=window):
            dist[pattern] = joint_probability(
                params, [(i, j, b) for (i, j), b in zip(win, pattern)])
        out.append(dist)
    return out


def nonstationarity_report(params: SbmParams, window: int = 3) -> list[NonstationarityRow]:
    """For each listing order, the largest difference between the laws of two
    length-``window`` windows (positions are 1-based). A stationary sequence
    has gap 0 everywhere."""
    rows = []
    for kind in OrderingKind:
        dists = window_distributions(params, kind, window)
        best = NonstationarityRow(kind.value, 0.0, None, None, "", Fraction(0), Fraction(0))
        best_gap = Fraction(0)
        for pattern in itertools.product((0, 1), repeat=window):
            probs = [d[pattern] for d in dists]
            if not probs:
                continue
            hi = max(range(len(probs)), key=probs.__getitem__)
            lo = min(range(len(probs)), key=probs.__getitem__)
            gap = probs[hi] - probs[lo]
            if gap > best_gap:
                best_gap = gap
                a, b = sorted((hi, lo))
                best = NonstationarityRow(kind.value, float(gap), a + 1, b + 1,
                                          "".join(map(str, pattern)), probs[a], probs[b])
        rows.append(best)
    return rows


# -- universality -------------------------------------------------------------


@dataclass
class CurvePoint:
    n: int
    mean_length_bits: float
    stderr_bits: float
    H_cond_bits: float
    ratio: float


def _lengths(params: SbmParams, k, mode, trials: int, seed: int) -> np.ndarray:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    out = np.empty(trials)
    for t in range(trials):
        g, _ = sample_sbm(params, seed + t)
        out[t] = 8 * len(container.compress(g, k, mode))
    return out


def _stderr(x: np.ndarray) -> float:
    return float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0


def universality_curve(params_list: Sequence[SbmParams], k: int | None = None,
                       mode: Mode | str = Mode.KT, trials: int = 10,
                       seed: int = 0) -> list[CurvePoint]:
    """Mean compressed length (whole container, bits) over ``trials`` samples
    for each parameter set, against H(A_n | X^n).

    Trial t uses seed ``seed + t``. The ratio is ``inf`` when the conditional
    entropy is zero.
    """
    points = []
    for params in params_list:
        lengths = _lengths(params, k, mode, trials, seed)
        H = conditional_entropy_bits(params)
        mean = float(lengths.mean())
        ratio = mean / H if H > 0 else math.inf
        points.append(CurvePoint(params.n, mean, _stderr(lengths), H, ratio))
    return points


# -- second-order (BC entropy) analysis ---------------------------------------


def gwt_bc_entropy_bits(lam: float) -> float:
    """BC entropy of the Poisson(lam) Galton-Watson tree: (lam/2) log2(e/lam)."""
    if lam <= 0:
        raise ValueError("mean degree must be positive")
    return lam / 2 * math.log2(math.e / lam)


@dataclass
class GapStatistic:
    n: int
    value: float
    stderr: float
    lam: float
    bc_entropy: float

    def __float__(self) -> float:
        return self.value


def second_order_gap(params: SbmParams, k: int | None = 3, mode: Mode | str = Mode.KT,
                     trials: int = 10, seed: int = 0) -> GapStatistic:
    """(E[len] - m log2 n) / n with m = C(n,2) lam / n expected edges.

    ``params`` must be in the W = Q / n regime; lam = p^T Q p = n p^T W p.
    """
    n = params.n
    lam = n * params.edge_density()
    expected_edges = math.comb(n, 2) * lam / n
    stats = (_lengths(params, k, mode, trials, seed) - expected_edges * math.log2(n)) / n
    return GapStatistic(n, float(stats.mean()), _stderr(stats), lam, gwt_bc_entropy_bits(lam))


# -- CSV output ---------------------------------------------------------------


def write_csv(rows: Sequence, fh: TextIO) -> None:
    """Write a list of dataclass rows as CSV with a header line."""
    if not rows:
        return
    fields = [f.name for f in dataclasses.fields(rows[0])]
    writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        d = dataclasses.asdict(row)
        writer.writerow({key: (str(v) if isinstance(v, Fraction) else v) for key, v in d.items()})
