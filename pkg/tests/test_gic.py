import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cflcache.caching import CachingParams, cfl_place, num_distinct
from cflcache.f2 import BitMatrix, BitVector, echelon, rank
from cflcache.gic import (
    GicInstance, Receiver, SubspaceBasis, a_members, alpha_upper_verify, ambient_subspace,
    build_gic_instance, certify_demand, constraint_rows, constructive_subspace,
    find_subspace_in_a, find_violation, gaussian_binomial, kappa_closed_form,
    min_rank_bruteforce, structural_check, verify_subspace_in_a, z_set_contains,
)


def demands(N, K):
    return list(itertools.product(range(1, N + 1), repeat=K))


def span(rows):
    out = {0}
    for r in rows:
        out |= {x ^ r for x in out}
    return out


# -- independent oracles -------------------------------------------------------


def naive_min_rank(inst: GicInstance) -> int:
    """Minimum rank over every per-receiver choice, no pruning."""
    choices = [sorted(a ^ r.demand.bits for a in span(r.side_info.rows)) for r in inst.receivers]
    return min(len(echelon(list(rows))) for rows in itertools.product(*choices))


def naive_in_a(inst: GicInstance, v: int) -> bool:
    vec = BitVector(inst.n_msgs, v)
    return any(z_set_contains(inst, i, vec) for i in range(inst.n_receivers))


def naive_alpha(inst: GicInstance) -> int:
    """Largest subspace inside A ∪ {0}, by enumerating spans of vector subsets."""
    n = inst.n_msgs
    a = {v for v in range(1, 1 << n) if naive_in_a(inst, v)}
    best = 0
    for k in range(1, n + 1):
        for vecs in itertools.combinations(sorted(a), k):
            if len(echelon(list(vecs))) == k and span(vecs) - {0} <= a:
                best = k
                break
        if best < k:
            break
    return best


@st.composite
def gic_instances(draw):
    n = draw(st.integers(2, 4))
    m = draw(st.integers(1, 4))
    receivers = []
    for i in range(m):
        side = draw(st.lists(st.integers(1, (1 << n) - 1), max_size=2))
        j = draw(st.integers(0, n - 1))
        receivers.append(Receiver(i + 1, 1, BitMatrix(n, tuple(side)), BitVector.unit(n, j)))
    return GicInstance(n, tuple(receivers))


# -- closed form ---------------------------------------------------------------


def test_kappa_values():
    assert [kappa_closed_form(CachingParams(3, 3), t) for t in (1, 2, 3)] == [3, 6, 6]
    assert [kappa_closed_form(CachingParams(3, 4), t) for t in (1, 2, 3)] == [12, 24, 27]
    assert [kappa_closed_form(CachingParams(2, 2), t) for t in (1, 2)] == [2, 2]
    with pytest.raises(ValueError):
        kappa_closed_form(CachingParams(3, 3), 4)


def test_gaussian_binomial():
    assert gaussian_binomial(4, 2) == 35
    assert gaussian_binomial(3, 1) == 7
    assert gaussian_binomial(5, 0) == 1 and gaussian_binomial(2, 3) == 0


# -- instance and membership ---------------------------------------------------


def test_instance_shape():
    p = CachingParams(3, 4)
    inst = build_gic_instance(cfl_place(p), (1, 2, 3, 1))
    assert inst.n_receivers == p.K * p.n_cfl
    assert inst.demand_matrix().nrows == inst.n_receivers
    assert all(r.demand.weight == 1 for r in inst.receivers)


@pytest.mark.parametrize("d", demands(2, 2))
def test_a_members_matches_definition(d):
    inst = build_gic_instance(cfl_place(CachingParams(2, 2)), d)
    expected = [v for v in range(1, 1 << inst.n_msgs) if naive_in_a(inst, v)]
    assert a_members(inst) == expected


# -- min-rank and alpha versus the naive oracles -------------------------------


@pytest.mark.parametrize("N,K", [(2, 2), (3, 3)])
def test_min_rank_matches_naive_oracle(N, K):
    pl = cfl_place(CachingParams(N, K))
    for d in demands(N, K):
        inst = build_gic_instance(pl, d)
        assert min_rank_bruteforce(inst) == naive_min_rank(inst)


@pytest.mark.parametrize("d", demands(2, 2))
def test_alpha_equals_kappa_small(d):
    p = CachingParams(2, 2)
    inst = build_gic_instance(cfl_place(p), d)
    kappa = kappa_closed_form(p, num_distinct(d))
    assert naive_alpha(inst) == kappa == naive_min_rank(inst)


@settings(max_examples=150, deadline=None)
@given(gic_instances())
def test_random_instances_against_oracles(inst):
    kappa = min_rank_bruteforce(inst)
    assert kappa == naive_min_rank(inst)
    alpha = naive_alpha(inst)
    assert alpha <= kappa
    basis = find_subspace_in_a(inst, alpha)
    assert basis is not None and len(echelon(basis)) == alpha
    assert all(naive_in_a(inst, v) for v in span(basis) - {0})
    assert find_subspace_in_a(inst, alpha + 1) is None
    if alpha + 1 <= inst.n_msgs:
        assert alpha_upper_verify(inst, alpha + 1)


def test_alpha_bound_refuses_oversize():
    inst = build_gic_instance(cfl_place(CachingParams(3, 4)), (1, 2, 3, 1))
    with pytest.raises(ValueError):
        alpha_upper_verify(inst, 28)


def test_min_rank_refuses_oversize():
    inst = build_gic_instance(cfl_place(CachingParams(3, 4)), (1, 2, 3, 1))
    with pytest.raises(ValueError):
        min_rank_bruteforce(inst)


# -- constructive subspace -----------------------------------------------------


@pytest.mark.parametrize("N,K", [(2, 2), (3, 3), (4, 4), (2, 3), (2, 4), (3, 4)])
def test_constructive_dimension_and_certificate(N, K):
    p = CachingParams(N, K)
    pl = cfl_place(p)
    for d in demands(N, K):
        s = constructive_subspace(p, d)
        cons = constraint_rows(p, d)
        assert rank(cons) == cons.nrows
        assert s.dim == kappa_closed_form(p, num_distinct(d))
        assert structural_check(build_gic_instance(pl, d), s)


@pytest.mark.parametrize("N,K", [(2, 2), (3, 3), (2, 3)])
def test_constructive_exhaustive(N, K):
    p = CachingParams(N, K)
    pl = cfl_place(p)
    for d in demands(N, K):
        assert verify_subspace_in_a(build_gic_instance(pl, d), constructive_subspace(p, d))


@pytest.mark.slow
def test_constructive_exhaustive_n3_k4():
    p = CachingParams(3, 4)
    pl = cfl_place(p)
    for d in demands(3, 4):
        inst = build_gic_instance(pl, d)
        s = constructive_subspace(p, d)
        mode = "exhaustive" if s.dim <= 24 else "sampled"
        assert verify_subspace_in_a(inst, s, mode, trials=20000, seed=1)


def test_violations_are_detected():
    p = CachingParams(3, 3)
    inst = build_gic_instance(cfl_place(p), (1, 2, 3))
    whole = ambient_subspace(inst.n_msgs)
    v = find_violation(inst, whole)
    assert v is not None and not naive_in_a(inst, v.bits)
    assert not verify_subspace_in_a(inst, whole, "sampled", trials=1000)
    assert not structural_check(inst, whole)
    # X_{1,1} + X_{1,2} + X_{1,3} breaks every user's cache equation
    bad = SubspaceBasis(BitMatrix(inst.n_msgs, (0b000000111,)), BitMatrix(inst.n_msgs, ()))
    assert not verify_subspace_in_a(inst, bad)


def test_sampled_mode_large_subspace():
    p = CachingParams(3, 4)
    d = (1, 2, 3, 1)
    inst = build_gic_instance(cfl_place(p), d)
    s = constructive_subspace(p, d)
    assert s.dim == 27
    with pytest.raises(ValueError):
        find_violation(inst, s, "exhaustive")
    assert verify_subspace_in_a(inst, s, "sampled", trials=20000, seed=3)


def test_certify_demand_record():
    p = CachingParams(2, 2)
    r = certify_demand(p, cfl_place(p), (1, 2), trials=100)
    assert r["kappa"] == r["dim_S"] == r["kappa_bruteforce"] == 2
    assert r["subspace_in_A"] and r["alpha_below_kappa_plus_1"]
