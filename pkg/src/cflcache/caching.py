"""Caching system model and the coded (XOR) small-buffer placement.

Indices are 1-based at the API surface (``file``, ``part``, ``user``, demand
entries) and 0-based for flat message coordinates.  The flat order is
file-major: coordinate ``(file - 1) * n_cfl + (part - 1)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .f2 import BitMatrix


class Regime(enum.Enum):
    N_EQ_K = "N=K"
    K_GT_N = "K>N"


@dataclass(frozen=True)
class CachingParams:
    N: int
    K: int
    M: Fraction = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"need N >= 2 files, got N={self.N}")
        if self.K < self.N:
            raise ValueError(f"no coded-prefetching scheme for N > K (N={self.N}, K={self.K})")
        m = Fraction(1, self.K) if self.M is None else Fraction(self.M)
        object.__setattr__(self, "M", m)

    @property
    def regime(self) -> Regime:
        return Regime.N_EQ_K if self.N == self.K else Regime.K_GT_N

    @property
    def n_cfl(self) -> int:
        """Subfiles per file."""
        return self.N if self.N == self.K else self.N * self.K

    @property
    def n_msgs(self) -> int:
        return self.N * self.n_cfl

    @property
    def rows_per_user(self) -> int:
        return 1 if self.N == self.K else self.N

    def coord(self, file: int, part: int) -> int:
        if not (1 <= file <= self.N and 1 <= part <= self.n_cfl):
            raise IndexError(f"subfile ({file},{part}) out of range")
        return (file - 1) * self.n_cfl + (part - 1)

    def subfile(self, coord: int) -> tuple[int, int]:
        """Inverse of :meth:`coord`: flat coordinate -> 1-based (file, part)."""
        if not 0 <= coord < self.n_msgs:
            raise IndexError(coord)
        f, p = divmod(coord, self.n_cfl)
        return f + 1, p + 1

    def label(self, coord: int) -> str:
        f, p = self.subfile(coord)
        return f"X_{{{f},{p}}}"

    def user_parts(self, user: int) -> list[int]:
        """Part indices (1-based) covered by ``user``'s cached packets."""
        if not 1 <= user <= self.K:
            raise IndexError(user)
        if self.regime is Regime.N_EQ_K:
            return [user]
        return [self.N * (user - 1) + j for j in range(1, self.N + 1)]

    def check_demand(self, d: Sequence[int]) -> tuple[int, ...]:
        d = tuple(int(x) for x in d)
        if len(d) != self.K:
            raise ValueError(f"demand has {len(d)} entries, expected K={self.K}")
        bad = [x for x in d if not 1 <= x <= self.N]
        if bad:
            raise ValueError(f"demand entries must lie in [1, {self.N}], got {bad}")
        return d


@dataclass(frozen=True)
class Placement:
    params: CachingParams
    caches: tuple[BitMatrix, ...]

    def cache(self, user: int) -> BitMatrix:
        return self.caches[user - 1]


def cfl_place(params: CachingParams) -> Placement:
    """Each cached packet XORs the same part index across all N files."""
    if params.M != Fraction(1, params.K):
        raise ValueError(f"placement defined only for M = 1/K, got M={params.M}")
    caches = []
    for user in range(1, params.K + 1):
        rows = []
        for part in params.user_parts(user):
            row = 0
            for f in range(1, params.N + 1):
                row |= 1 << params.coord(f, part)
            rows.append(row)
        caches.append(BitMatrix(params.n_msgs, tuple(rows)))
    return Placement(params, tuple(caches))


def num_distinct(d: Sequence[int]) -> int:
    return len(set(d))
