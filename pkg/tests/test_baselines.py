import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ugc.baselines import (
    HilbertOrder,
    csr_size_bits,
    hilbert_d2xy,
    hilbert_linearize,
    hilbert_lz78_size_bits,
    hilbert_side,
    lz78_decode_bits,
    lz78_encode_bits,
    lz78_phrases,
    lz78_size_bits,
)
from ugc.graph import LabeledGraph
from ugc.sbm import erdos_renyi, sample_sbm


def oracle_lz78(bits):
    """Textbook LZ78 over strings, with the trailing-phrase rule used here."""
    s = "".join(map(str, bits))
    book = {"": 0}
    out = []
    cur = ""
    for ch in s:
        if cur + ch in book:
            cur += ch
            continue
        out.append((book[cur], int(ch)))
        book[cur + ch] = len(book)
        cur = ""
    if cur:
        out.append((book[cur[:-1]], int(cur[-1])))
    return out


def test_csr_empty():
    assert csr_size_bits(LabeledGraph.empty(4)) == 5


def test_csr_k4():
    assert csr_size_bits(LabeledGraph.complete(4)) == 27


def test_csr_monotone():
    rng = np.random.default_rng(0)
    g = LabeledGraph.empty(30)
    edges = []
    prev = csr_size_bits(g)
    for _ in range(200):
        i, j = sorted(rng.choice(np.arange(1, 31), 2, replace=False).tolist())
        edges.append((i, j))
        size = csr_size_bits(LabeledGraph.from_edges(30, set(edges)))
        assert size >= prev
        prev = size


@pytest.mark.parametrize("side", [1, 2, 4, 8, 16, 64])
def test_hilbert_bijective_and_continuous(side):
    x, y = hilbert_d2xy(side, np.arange(side * side))
    cells = set(zip(x.tolist(), y.tolist()))
    assert len(cells) == side * side
    assert all(0 <= a < side and 0 <= b < side for a, b in cells)
    steps = np.abs(np.diff(x)) + np.abs(np.diff(y))
    assert (steps == 1).all()


def test_hilbert_side8_has_63_unit_steps():
    order = HilbertOrder.for_side(8)
    steps = np.abs(np.diff(order.rows)) + np.abs(np.diff(order.cols))
    assert steps.size == 63 and (steps == 1).all()


def test_hilbert_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        hilbert_d2xy(6, [0])


@pytest.mark.parametrize("n,side", [(1, 1), (2, 2), (3, 4), (8, 8), (9, 16), (1024, 1024)])
def test_hilbert_side(n, side):
    assert hilbert_side(n) == side


def test_hilbert_linearize_zero():
    seq = hilbert_linearize(LabeledGraph.empty(5))
    assert seq.size == 64 and not seq.any()


def test_hilbert_linearize_is_permutation_of_padded_matrix():
    g, _ = sample_sbm(erdos_renyi(13, 0.4), 5)
    seq = hilbert_linearize(g)
    order = HilbertOrder.for_side(16)
    adj = np.zeros((16, 16), dtype=np.uint8)
    adj[:13, :13] = g.to_dense()
    back = np.zeros_like(adj)
    back[order.rows, order.cols] = seq
    assert (back == adj).all()
    assert seq.sum() == 2 * g.num_edges()


def test_lz78_000():
    assert lz78_phrases([0, 0, 0])[0].tolist() == [0, 1]
    assert lz78_size_bits([0, 0, 0]) == 4
    assert lz78_encode_bits([0, 0, 0]).tolist() == [0, 0, 1, 0]


def test_lz78_empty():
    assert lz78_size_bits([]) == 0
    assert lz78_encode_bits([]).size == 0
    assert lz78_decode_bits([]).size == 0


def test_lz78_trailing_partial_phrase():
    # "0" "1" then a dangling "0" closed as its prefix (empty) plus "0"
    bits = [0, 1, 0]
    assert list(zip(*map(np.ndarray.tolist, lz78_phrases(bits)))) == oracle_lz78(bits)
    assert lz78_decode_bits(lz78_encode_bits(bits)).tolist() == bits


def test_lz78_rejects_non_binary():
    with pytest.raises(ValueError):
        lz78_size_bits([0, 2])


def test_lz78_roundtrip_1000_strings():
    rng = np.random.default_rng(78)
    for t in range(1000):
        n = int(rng.integers(0, 400))
        p = rng.choice([0.02, 0.2, 0.5])
        bits = (rng.random(n) < p).astype(np.uint8)
        code = lz78_encode_bits(bits)
        assert code.size == lz78_size_bits(bits)
        assert (lz78_decode_bits(code) == bits).all()


@given(st.lists(st.integers(0, 1), max_size=300))
@settings(max_examples=300)
def test_lz78_matches_oracle(bits):
    idx, lit = lz78_phrases(bits)
    assert list(zip(idx.tolist(), lit.tolist())) == oracle_lz78(bits)
    widths = [max(1, t.bit_length()) for t in range(len(idx))]
    assert lz78_size_bits(bits) == sum(widths) + len(idx)


def test_lz78_decode_rejects_bad_index():
    with pytest.raises(ValueError):
        lz78_decode_bits([0, 0, 1, 1, 1, 1, 1, 0])


def test_hilbert_lz78_size():
    g, _ = sample_sbm(erdos_renyi(20, 0.3), 1)
    assert hilbert_lz78_size_bits(g) == lz78_size_bits(hilbert_linearize(g))
