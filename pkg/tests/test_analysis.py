import io
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ugc.analysis import (
    GapStatistic,
    OrderingKind,
    gwt_bc_entropy_bits,
    joint_probability,
    nonstationarity_report,
    second_order_gap,
    universality_curve,
    window_distributions,
    write_csv,
)
from ugc.graph import num_pairs
from ugc.sbm import SbmParams, erdos_renyi, sample_sbm, symmetric_sbm

# within-community edges certain, cross-community edges absent
MODEL = SbmParams(4, 2, (0.5, 0.5), ((1.0, 0.0), (0.0, 1.0)))


def oracle_joint(params, constraints):
    """Enumerate every label vector and every completion of the graph."""
    n = params.n
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    total = Fraction(0)
    for x in itertools.product(range(params.L), repeat=n):
        px = Fraction(1)
        for v in x:
            px *= Fraction(params.p[v])
        if px == 0:
            continue
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            a = dict(zip(pairs, bits))
            if any(a[(min(i, j), max(i, j))] != b for i, j, b in constraints):
                continue
            w = px
            for (i, j), b in a.items():
                q = Fraction(params.W[x[i - 1]][x[j - 1]])
                w *= q if b else 1 - q
            total += w
    return total


def test_horizontal_counterexample():
    assert joint_probability(MODEL, [(1, 2, 1), (1, 3, 0), (1, 4, 1)]) == Fraction(1, 8)
    assert joint_probability(MODEL, [(2, 3, 1), (2, 4, 0), (3, 4, 1)]) == 0


def test_vertical_counterexample():
    assert joint_probability(MODEL, [(1, 2, 1), (1, 3, 0), (2, 3, 1)]) == 0
    assert joint_probability(MODEL, [(1, 4, 1), (2, 4, 0), (3, 4, 1)]) == Fraction(1, 8)


def test_diagonal_counterexample():
    assert joint_probability(MODEL, [(1, 2, 0), (2, 3, 1), (3, 4, 1)]) > 0
    assert joint_probability(MODEL, [(3, 4, 0), (4, 1, 1), (1, 3, 1)]) == 0


def test_unconstrained_is_one():
    assert joint_probability(MODEL, []) == 1


def test_conflicting_constraints():
    assert joint_probability(MODEL, [(1, 2, 1), (2, 1, 0)]) == 0


@pytest.mark.parametrize("bad", [[(1, 1, 1)], [(0, 2, 1)], [(1, 5, 0)], [(1, 2, 2)]])
def test_invalid_constraints(bad):
    with pytest.raises(ValueError):
        joint_probability(MODEL, bad)


def test_size_guard():
    with pytest.raises(ValueError):
        joint_probability(erdos_renyi(13, 0.5), [(1, 2, 1)])


def test_matches_full_enumeration():
    params = SbmParams(4, 2, (0.25, 0.75), ((0.5, 0.25), (0.25, 0.125)))
    for cons in ([(1, 2, 1), (3, 4, 0)], [(1, 3, 1), (2, 3, 1), (1, 2, 0)], [(2, 4, 1)]):
        assert joint_probability(params, cons) == oracle_joint(params, cons)


@given(st.lists(st.tuples(st.integers(1, 6), st.integers(1, 6)).filter(lambda t: t[0] != t[1]),
                min_size=1, max_size=4, unique_by=lambda t: frozenset(t)))
@settings(max_examples=40)
def test_completions_sum_to_one(pairs):
    params = SbmParams(6, 2, (0.3, 0.7), ((0.6, 0.2), (0.2, 0.9)))
    total = sum(joint_probability(params, [(i, j, b) for (i, j), b in zip(pairs, bits)])
                for bits in itertools.product((0, 1), repeat=len(pairs)))
    assert total == 1


@pytest.mark.parametrize("kind", list(OrderingKind))
@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_orderings_are_permutations(kind, n):
    pairs = [tuple(sorted(p)) for p in kind.pairs(n)]
    assert sorted(pairs) == list(itertools.combinations(range(1, n + 1), 2))
    assert len(pairs) == num_pairs(n)


def test_orderings_n4():
    assert OrderingKind.HORIZONTAL.pairs(4) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    assert OrderingKind.VERTICAL.pairs(4) == [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]
    assert OrderingKind.DIAGONAL.pairs(4) == [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3), (2, 4)]


def test_horizontal_window_gap_positions_1_and_4():
    dists = window_distributions(MODEL, OrderingKind.HORIZONTAL)
    assert dists[0][(1, 0, 1)] - dists[3][(1, 0, 1)] == Fraction(1, 8)


def test_report_on_counterexample_model():
    rows = {r.ordering: r for r in nonstationarity_report(MODEL)}
    assert rows["horizontal"].max_gap >= 1 / 8
    assert rows["vertical"].max_gap > 0 and rows["diagonal"].max_gap > 0


def test_report_on_er_is_stationary():
    for row in nonstationarity_report(erdos_renyi(5, 0.3)):
        assert row.max_gap == 0 and row.position_a is None


@pytest.mark.parametrize("lam,value", [(math.e, 0.0), (2.0, 0.442695), (1.0, 0.7213)])
def test_bc_entropy(lam, value):
    assert gwt_bc_entropy_bits(lam) == pytest.approx(value, abs=1e-4)


def test_bc_entropy_negative_above_e():
    assert gwt_bc_entropy_bits(4.0) < 0


@pytest.mark.parametrize("lam", [0.0, -1.0])
def test_bc_entropy_domain(lam):
    with pytest.raises(ValueError):
        gwt_bc_entropy_bits(lam)


def test_universality_er_ratio():
    (pt,) = universality_curve([erdos_renyi(1024, 0.01)], k=1, trials=3)
    assert 0.97 <= pt.ratio <= 1.06
    assert pt.ratio == pytest.approx(pt.mean_length_bits / pt.H_cond_bits)


def test_universality_zero_entropy_sentinel():
    (pt,) = universality_curve([erdos_renyi(64, 1.0)], k=2, trials=2)
    assert pt.H_cond_bits == 0 and pt.ratio == math.inf
    assert pt.mean_length_bits < 8 * 60


def test_universality_deterministic():
    params = [symmetric_sbm(n, 2, 6.0, 2.0) for n in (64, 96)]
    assert universality_curve(params, k=2, trials=3, seed=5) == \
        universality_curve(params, k=2, trials=3, seed=5)


def test_universality_not_below_entropy():
    pts = universality_curve([SbmParams(200, 2, (0.5, 0.5), ((0.2, 0.05), (0.05, 0.2)))],
                             k=2, trials=6)
    pt = pts[0]
    assert pt.ratio > 1 - 3 * pt.stderr_bits / pt.H_cond_bits


def test_universality_requires_trials():
    with pytest.raises(ValueError):
        universality_curve([erdos_renyi(10, 0.5)], trials=0)


def test_second_order_gap_fields():
    params = symmetric_sbm(512, 2, 3.0, 1.0)
    stat = second_order_gap(params, k=2, trials=3, seed=1)
    assert isinstance(stat, GapStatistic)
    assert stat.lam == pytest.approx(2.0)
    assert stat.bc_entropy == pytest.approx(gwt_bc_entropy_bits(2.0))
    assert float(stat) == stat.value


def test_second_order_gap_definition():
    from ugc.container import compress
    params = symmetric_sbm(256, 2, 3.0, 1.0)
    stat = second_order_gap(params, k=3, trials=2, seed=9)
    lengths = [8 * len(compress(sample_sbm(params, 9 + t)[0], 3)) for t in range(2)]
    m = math.comb(256, 2) * 2.0 / 256
    assert stat.value == pytest.approx((np.mean(lengths) - m * math.log2(256)) / 256)


def test_csv_output():
    buf = io.StringIO()
    write_csv(nonstationarity_report(MODEL), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "ordering,max_gap,position_a,position_b,pattern,prob_a,prob_b"
    assert len(lines) == 4 and "1/8" in buf.getvalue()
