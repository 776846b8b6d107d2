from fractions import Fraction

import pytest

from cflcache.caching import CachingParams, Regime, cfl_place, num_distinct

SIZES = [(2, 2), (3, 3), (4, 4), (2, 3), (3, 4), (2, 4), (3, 5)]


@pytest.mark.parametrize("N,K", SIZES)
def test_dimensions(N, K):
    p = CachingParams(N, K)
    assert p.M == Fraction(1, K)
    assert p.n_cfl == (N if N == K else N * K)
    assert p.n_msgs == N * p.n_cfl
    assert p.regime is (Regime.N_EQ_K if N == K else Regime.K_GT_N)


@pytest.mark.parametrize("N,K", SIZES)
def test_coord_roundtrip(N, K):
    p = CachingParams(N, K)
    seen = set()
    for f in range(1, N + 1):
        for q in range(1, p.n_cfl + 1):
            c = p.coord(f, q)
            assert p.subfile(c) == (f, q)
            seen.add(c)
    assert seen == set(range(p.n_msgs))


@pytest.mark.parametrize("N,K", SIZES)
def test_placement_respects_memory(N, K):
    p = CachingParams(N, K)
    pl = cfl_place(p)
    for u in range(1, K + 1):
        cache = pl.cache(u)
        # each packet is one subfile-sized XOR, so stored size is rows / n_cfl files
        assert Fraction(cache.nrows, p.n_cfl) == p.M
        for row, part in zip(cache.rows, p.user_parts(u)):
            assert row == sum(1 << p.coord(f, part) for f in range(1, N + 1))


@pytest.mark.parametrize("N,K", SIZES)
def test_parts_partitioned_among_users(N, K):
    p = CachingParams(N, K)
    parts = [q for u in range(1, K + 1) for q in p.user_parts(u)]
    if N == K:
        assert sorted(parts) == list(range(1, N + 1))
    else:
        assert sorted(parts) == list(range(1, p.n_cfl + 1))


def test_worked_layout():
    p = CachingParams(3, 3)
    assert cfl_place(p).cache(2).to_strings() == ["010010010"]
    assert p.label(p.coord(2, 3)) == "X_{2,3}"
    q = CachingParams(3, 4)
    assert q.user_parts(2) == [4, 5, 6]


@pytest.mark.parametrize("N,K", [(1, 3), (4, 3), (0, 0)])
def test_invalid_params(N, K):
    with pytest.raises(ValueError):
        CachingParams(N, K)


def test_other_memory_rejected():
    with pytest.raises(ValueError):
        cfl_place(CachingParams(3, 3, Fraction(1, 2)))


@pytest.mark.parametrize("d", [(1, 2), (1, 2, 4), (0, 1, 1), (1, 1, 1, 1)])
def test_invalid_demand(d):
    with pytest.raises(ValueError):
        CachingParams(3, 3).check_demand(d)


def test_num_distinct():
    assert num_distinct((1, 2, 1)) == 2
    assert num_distinct((3, 3, 3, 3)) == 1
