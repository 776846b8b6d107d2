import itertools

from hypothesis import given, settings, strategies as st

from cflcache.f2 import (
    BitMatrix, BitVector, RowSpace, echelon, in_row_space, nullspace_basis, rank, rref,
    solve_for_target, span_elements,
)


def matrices(max_rows=6, max_cols=7):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.integers(0, (1 << c) - 1), max_size=max_rows).map(
            lambda rows: BitMatrix(c, tuple(rows))
        )
    )


def naive_span(m: BitMatrix) -> set[int]:
    out = set()
    for coeffs in itertools.product((0, 1), repeat=m.nrows):
        v = 0
        for c, r in zip(coeffs, m.rows):
            if c:
                v ^= r
        out.add(v)
    return out


def test_bit_order_and_strings():
    v = BitVector.from_str("110")
    assert v.bits == 0b011 and v.support() == [0, 1] and str(v) == "110"
    m = BitMatrix.from_strings(["101", "011"])
    assert m.entry(0, 2) == 1 and m.entry(1, 0) == 0
    assert m.to_strings() == ["101", "011"]


def test_mul_and_combine():
    m = BitMatrix.from_strings(["110", "011"])
    assert m.mul_vec(BitVector.from_str("111")).to_list() == [0, 0]
    assert m.combine(BitVector.from_str("11")).to_list() == [1, 0, 1]


def test_transpose_roundtrip():
    m = BitMatrix.from_strings(["1101", "0110", "1000"])
    assert m.transpose().transpose() == m
    assert m.transpose().to_strings() == ["101", "110", "010", "100"]


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_matches_span_size(m):
    assert 1 << rank(m) == len(naive_span(m))


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rref_preserves_row_space(m):
    r = rref(m)
    assert naive_span(r) == naive_span(m)
    assert r.nrows == rank(m)
    assert len(echelon(r.rows)) == r.nrows


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_nullspace_is_orthogonal_complement(m):
    ns = nullspace_basis(m)
    assert ns.nrows == m.cols - rank(m)
    assert rank(ns) == ns.nrows
    for v in ns:
        assert m.mul_vec(v).weight == 0


@settings(max_examples=200, deadline=None)
@given(matrices(), st.data())
def test_solve_for_target(m, data):
    span = naive_span(m)
    target = BitVector(m.cols, data.draw(st.integers(0, (1 << m.cols) - 1)))
    x = solve_for_target(target, m)
    assert (x is not None) == (target.bits in span) == in_row_space(target, m)
    if x is not None:
        assert m.combine(x) == target
    space = RowSpace(m)
    assert (target in space) == (target.bits in span)
    assert space.dim == rank(m)


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=5))
def test_span_elements(m):
    elems = span_elements(m.rows)
    assert len(elems) == 1 << m.nrows
    assert set(elems) == naive_span(m)
