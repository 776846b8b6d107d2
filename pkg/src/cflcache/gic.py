"""Generalized index coding view of a cached delivery problem.

For a fixed placement and demand, every (user, demanded subfile) pair is a
receiver whose side information is the user's cached XOR packets.  This module
builds that instance, gives the closed-form min-rank, constructs the subspace
that certifies the matching generalized independence number, and provides
brute-force oracles for small instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .caching import CachingParams, Placement, Regime, num_distinct
from .f2 import BitMatrix, BitVector, RowSpace, echelon, nullspace_basis, span_elements

EXHAUSTIVE_MAX_DIM = 24
DEFAULT_SAMPLES = 10**6
MIN_RANK_MAX_LOG2 = 20
ALPHA_MAX_OPS = 10**9
_CHUNK_LOG2 = 20


@dataclass(frozen=True)
class Receiver:
    user: int
    part: int
    side_info: BitMatrix
    demand: BitVector


@dataclass(frozen=True)
class GicInstance:
    n_msgs: int
    receivers: tuple[Receiver, ...]

    @property
    def n_receivers(self) -> int:
        return len(self.receivers)

    def demand_matrix(self) -> BitMatrix:
        return BitMatrix.from_vectors((r.demand for r in self.receivers), self.n_msgs)


@dataclass(frozen=True)
class SubspaceBasis:
    basis: BitMatrix
    constraints: BitMatrix

    @property
    def dim(self) -> int:
        return self.basis.nrows


def build_gic_instance(placement: Placement, d: Sequence[int]) -> GicInstance:
    params = placement.params
    d = params.check_demand(d)
    receivers = []
    for user in range(1, params.K + 1):
        side = placement.cache(user)
        for part in range(1, params.n_cfl + 1):
            demand = BitVector.unit(params.n_msgs, params.coord(d[user - 1], part))
            receivers.append(Receiver(user, part, side, demand))
    return GicInstance(params.n_msgs, tuple(receivers))


def kappa_closed_form(params: CachingParams, ne: int) -> int:
    N, K = params.N, params.K
    if not 1 <= ne <= N:
        raise ValueError(f"number of distinct demands must lie in [1, {N}], got {ne}")
    if params.regime is Regime.N_EQ_K:
        return N * ne if ne <= N - 1 else N * (N - 1)
    return N * K * ne if ne <= N - 1 else N * N * (K - 1)


def z_set_contains(inst: GicInstance, receiver: int, v: BitVector) -> bool:
    r = inst.receivers[receiver]
    return r.side_info.mul_vec(v).bits == 0 and r.demand.dot(v) == 1


# -- membership in A = union of Z-sets ------------------------------------------


class _Membership:
    """Vectorised test for ``v in A``, grouping receivers that share side information."""

    def __init__(self, inst: GicInstance):
        groups: dict[tuple[int, ...], list[int]] = {}
        for r in inst.receivers:
            groups.setdefault(r.side_info.rows, []).append(r.demand.bits)
        self.groups = []
        for side, demands in groups.items():
            if all(x.bit_count() == 1 for x in demands):
                mask = 0
                for x in demands:
                    mask |= x
                self.groups.append((side, None, mask))
            else:
                self.groups.append((side, tuple(demands), 0))
        self.n = inst.n_msgs

    def contains(self, v: int) -> bool:
        if v == 0:
            return False
        for side, demands, mask in self.groups:
            if any((v & r).bit_count() & 1 for r in side):
                continue
            if demands is None:
                if v & mask:
                    return True
            elif any((v & x).bit_count() & 1 for x in demands):
                return True
        return False

    def contains_np(self, vecs: np.ndarray) -> np.ndarray:
        hit = np.zeros(vecs.shape, dtype=bool)
        for side, demands, mask in self.groups:
            if demands is None:
                ok = (vecs & np.uint64(mask)) != 0
            else:
                ok = np.zeros(vecs.shape, dtype=bool)
                for x in demands:
                    ok |= (np.bitwise_count(vecs & np.uint64(x)) & 1).astype(bool)
            for r in side:
                ok &= (np.bitwise_count(vecs & np.uint64(r)) & 1) == 0
            hit |= ok
        return hit & (vecs != 0)


def _span_table(rows: Sequence[int]) -> np.ndarray:
    out = np.zeros(1, dtype=np.uint64)
    for r in rows:
        out = np.concatenate([out, out ^ np.uint64(r)])
    return out


def _iter_span_chunks(rows: Sequence[int]) -> Iterator[np.ndarray]:
    """Every element of span(rows), in chunks; element order is coefficient order."""
    low_n = min(len(rows), _CHUNK_LOG2)
    low = _span_table(rows[:low_n])
    high_rows = rows[low_n:]
    for h in range(1 << len(high_rows)):
        offset = 0
        for i, r in enumerate(high_rows):
            if (h >> i) & 1:
                offset ^= r
        yield low ^ np.uint64(offset)


def find_violation(
    inst: GicInstance,
    s: SubspaceBasis,
    mode: str = "exhaustive",
    trials: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> BitVector | None:
    """First nonzero vector of span(s) outside every Z-set, or None.

    ``mode="exhaustive"`` sweeps all ``2**dim - 1`` nonzero span vectors;
    ``mode="sampled"`` draws ``trials`` uniform nonzero span vectors.
    """
    rows = list(s.basis.rows)
    dim = len(rows)
    member = _Membership(inst)
    use_np = inst.n_msgs <= 64
    if mode == "exhaustive":
        if dim > EXHAUSTIVE_MAX_DIM:
            raise ValueError(
                f"exhaustive sweep limited to dim <= {EXHAUSTIVE_MAX_DIM}, got {dim}"
            )
        if not use_np:
            for v in span_elements(rows):
                if v and not member.contains(v):
                    return BitVector(inst.n_msgs, v)
            return None
        for chunk in _iter_span_chunks(rows):
            bad = ~member.contains_np(chunk) & (chunk != 0)
            if bad.any():
                return BitVector(inst.n_msgs, int(chunk[np.argmax(bad)]))
        return None
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if dim == 0:
        return None
    rng = np.random.default_rng(seed)
    if not use_np or dim > 63:
        py_rng = random.Random(seed)
        for _ in range(trials):
            c = 0
            while not c:
                c = py_rng.getrandbits(dim)
            v = 0
            for i, r in enumerate(rows):
                if (c >> i) & 1:
                    v ^= r
            if not member.contains(v):
                return BitVector(inst.n_msgs, v)
        return None
    # XOR of per-byte lookup tables turns coefficient words into span vectors
    tables = [_span_table(rows[i:i + 8]) for i in range(0, dim, 8)]
    done = 0
    while done < trials:
        size = min(trials - done, 1 << _CHUNK_LOG2)
        coeffs = rng.integers(1, 1 << dim, size=size, dtype=np.uint64)
        vecs = np.zeros(size, dtype=np.uint64)
        for b, table in enumerate(tables):
            vecs ^= table[(coeffs >> np.uint64(8 * b)) & np.uint64(0xFF)]
        bad = ~member.contains_np(vecs)
        if bad.any():
            return BitVector(inst.n_msgs, int(vecs[np.argmax(bad)]))
        done += size
    return None


def verify_subspace_in_a(
    inst: GicInstance,
    s: SubspaceBasis,
    mode: str = "exhaustive",
    trials: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> bool:
    return find_violation(inst, s, mode, trials, seed) is None


def structural_check(inst: GicInstance, s: SubspaceBasis) -> bool:
    """Linear-algebra certificate that span(s) sits inside A.

    Checks the basis vectors and their pairwise sums directly, then the two
    facts the membership argument rests on: (1) every demanded coordinate has
    a receiver whose side-information rows lie in the constraint row space,
    so that receiver's cache equations hold on all of span(s); (2) span(s)
    meets the coordinates no receiver demands only in zero.
    """
    member = _Membership(inst)
    rows = s.basis.rows
    for i, a in enumerate(rows):
        if not member.contains(a):
            return False
        for b in rows[i + 1:]:
            if not member.contains(a ^ b):
                return False
    cons = RowSpace(s.constraints)
    for v in s.basis:
        if s.constraints.mul_vec(v).bits:
            return False
    covered = 0
    demanded = 0
    for r in inst.receivers:
        demanded |= r.demand.bits
        if r.demand.weight == 1 and all(side in cons for side in r.side_info):
            covered |= r.demand.bits
    if covered != demanded:
        return False
    undemanded = [1 << j for j in range(inst.n_msgs) if not (demanded >> j) & 1]
    # dim(S ∩ W) = dim S + dim W - dim(S + W)
    joint = len(echelon(list(rows) + undemanded))
    return joint == len(echelon(rows)) + len(undemanded)


# -- constructive subspaces -----------------------------------------------------


def constraint_rows(params: CachingParams, d: Sequence[int]) -> BitMatrix:
    """Equations whose solution space certifies the independence number.

    All cache equations (only those of one representative user per file when
    every file is requested and K > N), plus zeroing equations for every
    undemanded file except the largest-indexed one.
    """
    d = params.check_demand(d)
    placement_rows = _cache_rows_by_user(params)
    ne = num_distinct(d)
    rows: list[int] = []
    if params.regime is Regime.K_GT_N and ne == params.N:
        reps = sorted({f: u for u, f in reversed(list(enumerate(d, start=1)))}.values())
        for u in reps:
            rows.extend(placement_rows[u - 1])
    else:
        for user_rows in placement_rows:
            rows.extend(user_rows)
    if ne < params.N:
        undemanded = sorted(set(range(1, params.N + 1)) - set(d))
        for f in undemanded[:-1]:
            rows.extend(1 << params.coord(f, p) for p in range(1, params.n_cfl + 1))
    return BitMatrix(params.n_msgs, tuple(rows))


def _cache_rows_by_user(params: CachingParams) -> list[list[int]]:
    out = []
    for user in range(1, params.K + 1):
        user_rows = []
        for part in params.user_parts(user):
            row = 0
            for f in range(1, params.N + 1):
                row |= 1 << params.coord(f, part)
            user_rows.append(row)
        out.append(user_rows)
    return out


def constructive_subspace(params: CachingParams, d: Sequence[int]) -> SubspaceBasis:
    cons = constraint_rows(params, d)
    return SubspaceBasis(nullspace_basis(cons), cons)


# -- min-rank brute force -------------------------------------------------------


def min_rank_bruteforce(inst: GicInstance, max_log2: int = MIN_RANK_MAX_LOG2) -> int:
    """Exact min over A_i in rowspace(V_i) of rank(A + R), by pruned search.

    A branch stops once its partial rank reaches the best total found.  When a
    receiver can pick a row already in the current span that choice is taken
    alone: it leaves the span unchanged, and any other pick only enlarges it.
    """
    log2 = sum(r.side_info.nrows for r in inst.receivers)
    if log2 > max_log2:
        raise ValueError(
            f"min-rank search space 2^{log2} exceeds bound 2^{max_log2}"
        )
    options = []
    for r in inst.receivers:
        opts = sorted({a ^ r.demand.bits for a in span_elements(r.side_info.rows)})
        options.append(opts)
    m = len(options)
    best = [min(m, inst.n_msgs) + 1]

    def reduce(x: int, basis: list[int]) -> int:
        for b in basis:
            x = min(x, x ^ b)
        return x

    def dfs(i: int, basis: list[int]) -> None:
        if len(basis) >= best[0]:
            return
        if i == m:
            best[0] = len(basis)
            return
        reduced = [(reduce(x, basis), x) for x in options[i]]
        if any(red == 0 for red, _ in reduced):
            dfs(i + 1, basis)
            return
        for red, _ in reduced:
            # distinct leading bits, kept in decreasing order for ``reduce``
            dfs(i + 1, sorted(basis + [red], reverse=True))

    dfs(0, [])
    return best[0]


# -- alpha upper bound ----------------------------------------------------------


def gaussian_binomial(n: int, k: int, q: int = 2) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def a_members(inst: GicInstance) -> list[int]:
    """All nonzero vectors of A, ascending."""
    member = _Membership(inst)
    out: list[int] = []
    rows = [1 << j for j in range(inst.n_msgs)]
    if inst.n_msgs > 64:
        raise ValueError("ambient space too large to enumerate")
    for chunk in _iter_span_chunks(rows):
        out.extend(int(x) for x in chunk[member.contains_np(chunk)])
    out.sort()
    return out


def _xor_permute(mask: int, w: int, n: int, low_masks: list[int]) -> int:
    """Bitset {x ^ w : x in mask} for a bitset indexed by vectors of F_2^n."""
    for i in range(n):
        if (w >> i) & 1:
            step = 1 << i
            lo = low_masks[i]
            mask = ((mask >> step) & lo) | ((mask & lo) << step)
    return mask


def find_subspace_in_a(inst: GicInstance, t: int) -> list[int] | None:
    """Basis of some t-dimensional subspace inside A ∪ {0}, or None.

    Subspaces are built through their greedy basis (each new vector is the
    smallest element outside the current span), so every subspace is reached
    along exactly one path.  The candidate set holds the vectors x with
    x + U ⊆ A; adding w keeps those x with x ^ w also a candidate.  Elements
    of the target outside span(b_1..b_k) all exceed b_k, so each level only
    keeps candidates above the vector just chosen.  Candidate sets are
    bitsets over all 2**n vectors.
    """
    if t == 0:
        return []
    n = inst.n_msgs
    size = 1 << n
    # low_masks[i] selects indices whose bit i is 0
    low_masks = []
    for i in range(n):
        block = ((1 << (1 << i)) - 1)
        pattern = 0
        for start in range(0, size, 1 << (i + 1)):
            pattern |= block << start
        low_masks.append(pattern)
    members = 0
    for x in a_members(inst):
        members |= 1 << x

    # x is the smallest element of x + U exactly when x is 0 at every
    # leading bit of U's basis (each chosen w has a fresh leading bit)
    def search(basis: list[int], minimal: int, cands: int) -> list[int] | None:
        k = len(basis)
        if k == t:
            return basis
        need = (1 << t) - (1 << k)
        if cands.bit_count() < need:
            return None
        pick = cands & minimal
        while pick:
            low = pick & -pick
            w = low.bit_length() - 1
            pick ^= low
            above = cands >> (w + 1)
            if above.bit_count() + 1 < need:
                break
            nxt = (above << (w + 1)) & _xor_permute(cands, w, n, low_masks)
            if nxt.bit_count() < need - (1 << k):
                continue
            found = search(basis + [w], minimal & low_masks[w.bit_length() - 1], nxt)
            if found is not None:
                return found
        return None

    return search([], (1 << size) - 1, members)


def alpha_upper_verify(inst: GicInstance, t: int, max_ops: int = ALPHA_MAX_OPS) -> bool:
    """True iff no t-dimensional subspace lies entirely in A ∪ {0} (so alpha < t)."""
    ops = gaussian_binomial(inst.n_msgs, t) * (1 << t)
    if ops > max_ops:
        raise ValueError(
            f"alpha certification needs ~{ops:.3g} operations, bound is {max_ops:.3g}"
        )
    return find_subspace_in_a(inst, t) is None


def ambient_subspace(n: int) -> SubspaceBasis:
    return SubspaceBasis(BitMatrix.identity(n), BitMatrix(n, ()))


def certify_demand(
    params: CachingParams,
    placement: Placement,
    d: Sequence[int],
    trials: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> dict:
    """Run every applicable check for one demand; used by the CLI verify sweep."""
    inst = build_gic_instance(placement, d)
    ne = num_distinct(d)
    kappa = kappa_closed_form(params, ne)
    s = constructive_subspace(params, d)
    indep = len(echelon(s.constraints.rows)) == s.constraints.nrows
    out: dict = {
        "demand": list(d),
        "ne": ne,
        "kappa": kappa,
        "dim_S": s.dim,
        "constraints_independent": indep,
    }
    if s.dim <= EXHAUSTIVE_MAX_DIM:
        out["subspace_check"] = "exhaustive"
        out["subspace_in_A"] = verify_subspace_in_a(inst, s, "exhaustive")
    else:
        out["subspace_check"] = f"sampled({trials})+structural"
        out["subspace_in_A"] = verify_subspace_in_a(
            inst, s, "sampled", trials, seed
        ) and structural_check(inst, s)
    log2 = sum(r.side_info.nrows for r in inst.receivers)
    if log2 <= MIN_RANK_MAX_LOG2:
        out["kappa_bruteforce"] = min_rank_bruteforce(inst)
    try:
        out["alpha_below_kappa_plus_1"] = alpha_upper_verify(inst, kappa + 1)
    except ValueError:
        pass
    return out


__all__ = [
    "Receiver",
    "GicInstance",
    "SubspaceBasis",
    "build_gic_instance",
    "kappa_closed_form",
    "z_set_contains",
    "find_violation",
    "verify_subspace_in_a",
    "structural_check",
    "constraint_rows",
    "constructive_subspace",
    "min_rank_bruteforce",
    "gaussian_binomial",
    "a_members",
    "find_subspace_in_a",
    "alpha_upper_verify",
    "ambient_subspace",
    "certify_demand",
]
