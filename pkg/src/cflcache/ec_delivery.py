"""Delivery over a link where up to ``delta`` transmissions arrive corrupted.

The index-coded schedule is concatenated with an outer binary code: per
bit-plane, the outer encoder maps the kappa inner symbols to n transmitted
symbols.  A corrupted transmission may flip any nonzero subset of its bits,
which touches at most one position in each bit-plane, so correcting delta
errors per plane corrects delta corrupted transmissions.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .caching import CachingParams, Placement, cfl_place
from .delivery import TransmissionSchedule, XOR, cfl_deliver, decode_coefficients
from .ecc import CodeTable, DecodingFailure, LinearCode, best_code, decode_bounded
from .f2 import BitMatrix, BitVector

AUTO_EXHAUSTIVE_MAX_PATTERNS = 10**4


@dataclass(frozen=True)
class EcSchedule:
    inner: TransmissionSchedule
    outer: LinearCode
    delta: int
    rows: BitMatrix
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.rows.nrows

    def text_lines(self) -> list[str]:
        return [f"T_{i}: {lab}" for i, lab in enumerate(self.labels, start=1)]

    def to_json(self) -> dict:
        return {
            "code": code_summary(self.outer),
            "delta": self.delta,
            "transmissions": [
                {"label": lab, "support": [c + 1 for c in _support(r)]}
                for lab, r in zip(self.labels, self.rows.rows)
            ],
        }


def _support(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def code_summary(code: LinearCode) -> dict:
    return {"n": code.n, "k": code.k, "d": code.d, "origin": code.origin, "optimal": code.optimal}


def build_ec_schedule(
    inner: TransmissionSchedule, delta: int, table: CodeTable | None = None
) -> EcSchedule:
    if len(inner) == 0:
        raise ValueError("inner schedule is empty")
    params = inner.params
    outer = best_code(len(inner), delta, table)
    G = outer.G
    rows, labels = [], []
    for t in range(outer.n):
        row = 0
        order: list[int] = []
        for i in range(outer.k):
            if not G.entry(i, t):
                continue
            row ^= inner.rows.rows[i]
            for c in inner.terms[i]:
                if c in order:
                    order.remove(c)
                else:
                    order.append(c)
        rows.append(row)
        labels.append(XOR.join(params.label(c) for c in order) if order else "0")
    return EcSchedule(inner, outer, delta, BitMatrix(params.n_msgs, tuple(rows)), tuple(labels))


# -- payloads and the channel ---------------------------------------------------


@dataclass(frozen=True)
class PayloadInstance:
    """One b-bit block per flat subfile coordinate, as a 0/1 array of shape (n_msgs, b)."""

    blocks: np.ndarray

    def __post_init__(self):
        if self.blocks.ndim != 2 or self.blocks.shape[1] < 1:
            raise ValueError("blocks must have shape (n_msgs, b) with b >= 1")

    @property
    def b(self) -> int:
        return self.blocks.shape[1]

    @classmethod
    def random(cls, params: CachingParams, b: int, rng: np.random.Generator) -> "PayloadInstance":
        return cls(rng.integers(0, 2, size=(params.n_msgs, b), dtype=np.uint8))

    def file(self, params: CachingParams, f: int) -> np.ndarray:
        start = params.coord(f, 1)
        return self.blocks[start:start + params.n_cfl]


@dataclass(frozen=True)
class ErrorPattern:
    """Transmission index (0-based) -> nonzero b-bit flip mask."""

    masks: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def positions(self) -> list[int]:
        return sorted(self.masks)

    def __len__(self) -> int:
        return len(self.masks)


def _dense(m: BitMatrix) -> np.ndarray:
    out = np.zeros((m.nrows, m.cols), dtype=np.uint8)
    for i, r in enumerate(m.rows):
        for c in _support(r):
            out[i, c] = 1
    return out


def _xor_rows(m: BitMatrix, blocks: np.ndarray) -> np.ndarray:
    return (_dense(m).astype(np.int64) @ blocks.astype(np.int64) % 2).astype(np.uint8)


def transmit(sched: EcSchedule, payload: PayloadInstance) -> np.ndarray:
    """Transmitted symbols, shape (n, b): row t XORs the blocks selected by row t."""
    if payload.blocks.shape[0] != sched.rows.cols:
        raise ValueError("payload does not match the caching instance")
    return _xor_rows(sched.rows, payload.blocks)


def corrupt(symbols: np.ndarray, pattern: ErrorPattern, delta: int | None = None) -> np.ndarray:
    if delta is not None and len(pattern) > delta:
        raise ValueError(f"{len(pattern)} corrupted transmissions exceed delta={delta}")
    out = symbols.copy()
    for pos, mask in pattern.masks.items():
        mask = np.asarray(mask, dtype=np.uint8)
        if mask.shape != (symbols.shape[1],) or not mask.any():
            raise ValueError(f"mask for transmission {pos} must be a nonzero {symbols.shape[1]}-bit block")
        out[pos] ^= mask
    return out


def cache_payload(placement: Placement, user: int, payload: PayloadInstance) -> np.ndarray:
    return _xor_rows(placement.cache(user), payload.blocks)


@lru_cache(maxsize=1024)
def _coefficients(placement: Placement, inner: TransmissionSchedule, user: int, d: tuple[int, ...]) -> np.ndarray:
    coeffs = decode_coefficients(placement, inner, user, d)
    return np.array([c.to_list() for c in coeffs], dtype=np.int64)


def decode_inner(sched: EcSchedule, received: np.ndarray) -> np.ndarray:
    """Recover the kappa inner symbols, bit-plane by bit-plane."""
    n, b = received.shape
    weights = [1 << i for i in range(n)]
    out = np.zeros((sched.outer.k, b), dtype=np.uint8)
    for j in range(b):
        word = sum(w for w, bit in zip(weights, received[:, j]) if bit)
        msg, _ = decode_bounded(sched.outer, BitVector(n, word))
        out[:, j] = msg.to_list()
    return out


def receiver_decode(
    user: int,
    received: np.ndarray,
    cached: np.ndarray,
    sched: EcSchedule,
    placement: Placement,
    d: Sequence[int],
) -> np.ndarray:
    """Reconstruct the file requested by ``user`` as an (n_cfl, b) array.

    Raises DecodingFailure when the outer code cannot correct the errors.
    """
    inner = decode_inner(sched, received)
    coeffs = _coefficients(placement, sched.inner, user, tuple(d))
    stacked = np.concatenate([cached, inner]).astype(np.int64)
    return (coeffs @ stacked % 2).astype(np.uint8)


# -- simulation -----------------------------------------------------------------


@dataclass
class SimReport:
    params: dict
    demand: list[int]
    delta: int
    code: dict
    bits: int
    trials: int
    seed: int
    exhaustive: bool
    exhaustive_patterns: int
    per_user_success: list[int]
    per_user_exhaustive_success: list[int]

    @property
    def all_success(self) -> bool:
        return all(s == self.trials for s in self.per_user_success) and all(
            s == self.exhaustive_patterns for s in self.per_user_exhaustive_success
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def pattern_count(n: int, delta: int) -> int:
    return sum(math.comb(n, w) for w in range(min(delta, n) + 1))


def _random_mask(rng: np.random.Generator, b: int) -> np.ndarray:
    while True:
        m = rng.integers(0, 2, size=b, dtype=np.uint8)
        if m.any():
            return m


def _delivered(
    sched: EcSchedule,
    placement: Placement,
    d: tuple[int, ...],
    payload: PayloadInstance,
    pattern: ErrorPattern,
) -> list[bool]:
    params = placement.params
    received = corrupt(transmit(sched, payload), pattern, sched.delta)
    out = []
    for user in range(1, params.K + 1):
        cached = cache_payload(placement, user, payload)
        try:
            got = receiver_decode(user, received, cached, sched, placement, d)
        except DecodingFailure:
            out.append(False)
            continue
        out.append(bool(np.array_equal(got, payload.file(params, d[user - 1]))))
    return out


def end_to_end_sim(
    params: CachingParams,
    d: Sequence[int],
    delta: int,
    b: int = 8,
    trials: int = 1000,
    seed: int = 0,
    exhaustive: bool | None = None,
    table: CodeTable | None = None,
) -> SimReport:
    """Simulate delivery with random payloads and at most ``delta`` corruptions.

    ``exhaustive=None`` adds the sweep over every error-position set of size
    <= delta whenever there are at most 10**4 such sets.
    """
    d = params.check_demand(d)
    placement = cfl_place(params)
    sched = build_ec_schedule(cfl_deliver(params, placement, d), delta, table)
    rng = np.random.default_rng(seed)
    n_patterns = pattern_count(sched.n, delta)
    if exhaustive is None:
        exhaustive = n_patterns <= AUTO_EXHAUSTIVE_MAX_PATTERNS

    ex_success = [0] * params.K
    if exhaustive:
        payload = PayloadInstance.random(params, b, rng)
        for w in range(min(delta, sched.n) + 1):
            for pos in itertools.combinations(range(sched.n), w):
                pattern = ErrorPattern({p: _random_mask(rng, b) for p in pos})
                for u, ok in enumerate(_delivered(sched, placement, d, payload, pattern)):
                    ex_success[u] += ok

    success = [0] * params.K
    for _ in range(trials):
        payload = PayloadInstance.random(params, b, rng)
        w = int(rng.integers(0, min(delta, sched.n) + 1))
        pos = rng.choice(sched.n, size=w, replace=False)
        pattern = ErrorPattern({int(p): _random_mask(rng, b) for p in pos})
        for u, ok in enumerate(_delivered(sched, placement, d, payload, pattern)):
            success[u] += ok

    return SimReport(
        params={"N": params.N, "K": params.K, "M": str(params.M)},
        demand=list(d),
        delta=delta,
        code=code_summary(sched.outer),
        bits=b,
        trials=trials,
        seed=seed,
        exhaustive=exhaustive,
        exhaustive_patterns=n_patterns if exhaustive else 0,
        per_user_success=success,
        per_user_exhaustive_success=ex_success if exhaustive else [0] * params.K,
    )
