"""Error-free delivery schedules for the coded placement.

Row ordering follows the worked examples: uncoded rows grouped by the user
whose cache block they complete (then part, then file); chain-pairing rows
between users that request the same file come last.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .caching import CachingParams, Placement, Regime, num_distinct
from .f2 import BitMatrix, BitVector, RowSpace
from .gic import GicInstance

XOR = " ⊕ "


@dataclass(frozen=True)
class TransmissionSchedule:
    params: CachingParams
    rows: BitMatrix
    labels: tuple[str, ...]
    # per-row coordinate order used in labels (first-appearance order)
    terms: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return self.rows.nrows

    def text_lines(self, start: int = 1) -> list[str]:
        return [f"T_{i}: {lab}" for i, lab in enumerate(self.labels, start=start)]

    def to_json(self) -> list[dict]:
        return [
            {"label": lab, "support": [c + 1 for c in sorted(t)]}
            for lab, t in zip(self.labels, self.terms)
        ]


def make_schedule(params: CachingParams, terms: Sequence[Sequence[int]]) -> TransmissionSchedule:
    rows = []
    labels = []
    for t in terms:
        row = 0
        for c in t:
            row ^= 1 << c
        rows.append(row)
        labels.append(XOR.join(params.label(c) for c in t))
    return TransmissionSchedule(
        params, BitMatrix(params.n_msgs, tuple(rows)), tuple(labels), tuple(tuple(t) for t in terms)
    )


def cfl_deliver(params: CachingParams, placement: Placement, d: Sequence[int]) -> TransmissionSchedule:
    if placement.params != params:
        raise ValueError("placement was built for different parameters")
    d = params.check_demand(d)
    N = params.N
    terms: list[tuple[int, ...]] = []
    if num_distinct(d) < N:
        for f in sorted(set(d)):
            for p in range(1, params.n_cfl + 1):
                terms.append((params.coord(f, p),))
        return make_schedule(params, terms)

    # every file requested: complete each user's cache block, then chain
    # together the blocks of users sharing a file
    for user in range(1, params.K + 1):
        for part in params.user_parts(user):
            for f in range(1, N + 1):
                if f != d[user - 1]:
                    terms.append((params.coord(f, part),))
    if params.regime is Regime.K_GT_N:
        for f in range(1, N + 1):
            group = [u for u in range(1, params.K + 1) if d[u - 1] == f]
            for a, b in zip(group, group[1:]):
                for pa, pb in zip(params.user_parts(a), params.user_parts(b)):
                    terms.append((params.coord(f, pa), params.coord(f, pb)))
    return make_schedule(params, terms)


def first_undecodable(schedule: TransmissionSchedule, inst: GicInstance) -> tuple[int, int] | None:
    """(user, part) of the first receiver that cannot solve for its demand, else None."""
    spaces: dict[tuple[int, ...], RowSpace] = {}
    for r in inst.receivers:
        space = spaces.get(r.side_info.rows)
        if space is None:
            space = spaces[r.side_info.rows] = RowSpace(r.side_info.stack(schedule.rows))
        if r.demand not in space:
            return r.user, r.part
    return None


def verify_decodable(schedule: TransmissionSchedule, inst: GicInstance) -> bool:
    return first_undecodable(schedule, inst) is None


def drop_row(schedule: TransmissionSchedule, i: int) -> TransmissionSchedule:
    return TransmissionSchedule(
        schedule.params,
        schedule.rows.delete_row(i),
        schedule.labels[:i] + schedule.labels[i + 1:],
        schedule.terms[:i] + schedule.terms[i + 1:],
    )


def decode_coefficients(
    placement: Placement, schedule: TransmissionSchedule, user: int, d: Sequence[int]
) -> list[BitVector]:
    """For each part of the user's file, coefficients over (cache rows, schedule rows)."""
    params = placement.params
    space = RowSpace(placement.cache(user).stack(schedule.rows))
    out = []
    for part in range(1, params.n_cfl + 1):
        target = BitVector.unit(params.n_msgs, params.coord(d[user - 1], part))
        c = space.solve(target)
        if c is None:
            raise UnsatisfiableDemand(user, part)
        out.append(c)
    return out


class UnsatisfiableDemand(Exception):
    def __init__(self, user: int, part: int):
        super().__init__(f"user {user} cannot recover part {part} of its file")
        self.user = user
        self.part = part
