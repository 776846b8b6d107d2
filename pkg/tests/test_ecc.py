import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from cflcache.ecc import (
    WORKED_EXAMPLE_GENERATORS, CodeTable, DecodingFailure, LinearCode, best_code, code_length,
    decode_bounded, discrepancy_note, encode, identity_code, load_code_table, min_distance,
    repetition_code, repetition_concat, shortened_hamming, shortened_hamming_length,
)
from cflcache.f2 import BitMatrix, BitVector


def naive_min_distance(G: BitMatrix) -> int:
    best = G.cols
    for coeffs in itertools.product((0, 1), repeat=G.nrows):
        if any(coeffs):
            w = 0
            for c, r in zip(coeffs, G.rows):
                if c:
                    w ^= r
            best = min(best, w.bit_count())
    return best


def sphere_packing_length(k: int) -> int:
    """Smallest n with 2^(n-k) >= n + 1."""
    n = k
    while (1 << (n - k)) < n + 1:
        n += 1
    return n


@pytest.mark.parametrize("key,n", [((6, 3), 10), ((3, 3), 6)])
def test_worked_example_generators(key, n):
    G = WORKED_EXAMPLE_GENERATORS[key]
    assert (G.nrows, G.cols) == (key[0], n)
    assert naive_min_distance(G) == 3


def test_shortened_hamming_reproduces_worked_example_generators():
    assert shortened_hamming(6).G == WORKED_EXAMPLE_GENERATORS[(6, 3)]
    assert shortened_hamming(3).G == WORKED_EXAMPLE_GENERATORS[(3, 3)]


@pytest.mark.parametrize("k", range(1, 41))
def test_shortened_hamming_length(k):
    n = shortened_hamming_length(k)
    assert n == sphere_packing_length(k)
    assert (1 << (n - k)) >= n + 1


@pytest.mark.parametrize("k", list(range(1, 13)) + [16, 20])
def test_shortened_hamming_distance(k):
    c = shortened_hamming(k)
    assert min_distance(c) == 3
    if k <= 12:
        assert naive_min_distance(c.G) == 3
    assert c.optimal


def test_known_lengths():
    assert shortened_hamming_length(27) == 33
    assert shortened_hamming_length(12) == 17
    assert shortened_hamming_length(24) == 29
    assert shortened_hamming(27).n == 33


@pytest.mark.parametrize("key", [(6, 3), (3, 3)])
@pytest.mark.parametrize("method", ["syndrome", "sweep"])
def test_exhaustive_single_error_correction(key, method):
    c = best_code(key[0], 1)
    assert c.origin == "worked_example"
    for m in range(1 << c.k):
        msg = BitVector(c.k, m)
        word = encode(c, msg)
        for e in [0] + [1 << i for i in range(c.n)]:
            got, errs = decode_bounded(c, BitVector(c.n, word.bits ^ e), method)
            assert got == msg and errs == e.bit_count()


def test_syndrome_and_sweep_agree_everywhere():
    c = best_code(6, 1)
    failures = 0
    for w in range(1 << c.n):
        rx = BitVector(c.n, w)
        outcomes = []
        for method in ("syndrome", "sweep"):
            try:
                outcomes.append(decode_bounded(c, rx, method))
            except DecodingFailure:
                outcomes.append(None)
        assert outcomes[0] == outcomes[1]
        failures += outcomes[0] is None
    # 2^10 words, 2^6 balls of 11 words each
    assert failures == (1 << 10) - 64 * 11


def test_decoding_failure_beyond_radius():
    c = best_code(6, 1)
    # the first received word outside every radius-1 ball, found by sweep
    words = {encode(c, BitVector(6, m)).bits for m in range(64)}
    covered = {w ^ e for w in words for e in [0] + [1 << i for i in range(10)]}
    outside = min(set(range(1 << 10)) - covered)
    with pytest.raises(DecodingFailure):
        decode_bounded(c, BitVector(10, outside))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(1, 2), st.data())
def test_bounded_decoding_property(k, delta, data):
    c = best_code(k, delta)
    assert c.d >= 2 * delta + 1
    msg = BitVector(c.k, data.draw(st.integers(0, (1 << k) - 1)))
    pos = data.draw(st.lists(st.integers(0, c.n - 1), max_size=delta, unique=True))
    e = sum(1 << p for p in pos)
    got, errs = decode_bounded(c, BitVector(c.n, encode(c, msg).bits ^ e))
    assert got == msg and errs == len(pos)


def test_best_code_origins():
    assert best_code(5, 0).origin == "identity"
    assert best_code(6, 1).origin == "worked_example"
    assert best_code(3, 1).origin == "worked_example"
    assert best_code(1, 2).origin == "repetition" and best_code(1, 2).n == 5
    assert best_code(12, 1).origin == "shortened_hamming"
    c = best_code(3, 2)
    assert c.origin == "repetition_concat" and (c.n, c.d) == (15, 5) and not c.optimal
    assert identity_code(4).optimal and repetition_code(3).d == 3


def test_repetition_concat_corrects_two():
    c = repetition_concat(2, 5)
    for m in range(4):
        word = encode(c, BitVector(2, m)).bits
        for pos in itertools.combinations(range(10), 2):
            e = sum(1 << p for p in pos)
            assert decode_bounded(c, BitVector(10, word ^ e))[0].bits == m


def test_code_validation():
    with pytest.raises(ValueError):
        LinearCode(3, 2, 1, BitMatrix.from_strings(["110", "110"]), "identity")
    with pytest.raises(ValueError):
        LinearCode(3, 2, 3, BitMatrix.from_strings(["110", "011"]), "shortened_hamming")
    with pytest.raises(ValueError):
        LinearCode(3, 1, 3, BitMatrix.from_strings(["111"]), "made_up")


def test_code_table_csv(tmp_path):
    (tmp_path / "g.txt").write_text("1000111\n0100110\n0010101\n0001011\n")
    (tmp_path / "t.csv").write_text(
        "k,d,n,source,generator\n4,3,7,hamming,g.txt\n27,3,32,somewhere,\n"
    )
    table = load_code_table(tmp_path / "t.csv")
    assert len(table) == 2
    c = best_code(4, 1, table)
    assert c.origin == "user_table" and c.n == 7
    # worked-example codes are never overridden
    assert best_code(6, 1, table).origin == "worked_example"
    # a length-only entry supplies rate accounting
    assert code_length(27, 1, table) == (32, "user_table", True)
    assert code_length(27, 1) == (33, "shortened_hamming", True)


def test_code_table_rejects_bad_rows(tmp_path):
    t = CodeTable()
    with pytest.raises(ValueError):
        t.add(5, 3, 4)
    t.add(5, 3, 9)
    with pytest.raises(ValueError):
        t.add(6, 3, 8)
    (tmp_path / "bad.csv").write_text("k,n\n1,2\n")
    with pytest.raises(ValueError):
        load_code_table(tmp_path / "bad.csv")


def test_discrepancy_note():
    note = discrepancy_note(27, 3, 33)
    assert note is not None and "42" in note and "33" in note
    assert discrepancy_note(6, 3, 10) is None


def test_sphere_packing_consistency():
    for k in range(1, 60):
        c_n = shortened_hamming_length(k)
        assert 2 ** (c_n - k) >= c_n + 1
        assert 2 ** (c_n - 1 - k) < sum(math.comb(c_n - 1, i) for i in range(2))
