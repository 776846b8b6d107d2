"""Dense linear algebra over GF(2) with rows packed into Python ints.

Coordinate ``j`` of a vector lives in bit ``j`` of its integer, so the
string form ``"110"`` is the integer ``0b011``.  All values are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits do not fit in {self.length} coordinates")

    @classmethod
    def from_str(cls, s: str) -> "BitVector":
        s = s.replace(" ", "")
        return cls(len(s), sum(1 << j for j, ch in enumerate(s) if ch == "1"))

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "BitVector":
        return cls(len(values), sum(1 << j for j, x in enumerate(values) if x & 1))

    @classmethod
    def unit(cls, length: int, j: int) -> "BitVector":
        return cls(length, 1 << j)

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __len__(self) -> int:
        return self.length

    def __xor__(self, other: "BitVector") -> "BitVector":
        _same_length(self.length, other.length)
        return BitVector(self.length, self.bits ^ other.bits)

    def dot(self, other: "BitVector") -> int:
        _same_length(self.length, other.length)
        return (self.bits & other.bits).bit_count() & 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return [j for j in range(self.length) if (self.bits >> j) & 1]

    def to_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.length)]

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> j) & 1 else "0" for j in range(self.length))


@dataclass(frozen=True)
class BitMatrix:
    cols: int
    rows: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        limit = 1 << self.cols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {self.cols} columns")

    @classmethod
    def from_strings(cls, rows: Sequence[str], cols: int | None = None) -> "BitMatrix":
        vecs = [BitVector.from_str(r) for r in rows]
        if cols is None:
            if not vecs:
                raise ValueError("cols required for an empty matrix")
            cols = vecs[0].length
        if any(v.length != cols for v in vecs):
            raise ValueError("ragged rows")
        return cls(cols, tuple(v.bits for v in vecs))

    @classmethod
    def from_vectors(cls, vecs: Iterable[BitVector], cols: int) -> "BitMatrix":
        out = []
        for v in vecs:
            _same_length(cols, v.length)
            out.append(v.bits)
        return cls(cols, tuple(out))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, tuple(1 << j for j in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.rows[i])

    def __iter__(self):
        return (BitVector(self.cols, r) for r in self.rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        _same_length(self.cols, other.cols)
        return BitMatrix(self.cols, self.rows + other.rows)

    def append(self, v: BitVector) -> "BitMatrix":
        _same_length(self.cols, v.length)
        return BitMatrix(self.cols, self.rows + (v.bits,))

    def delete_row(self, i: int) -> "BitMatrix":
        return BitMatrix(self.cols, self.rows[:i] + self.rows[i + 1:])

    def mul_vec(self, v: BitVector) -> BitVector:
        """Return ``self @ v`` (one parity per row)."""
        _same_length(self.cols, v.length)
        return BitVector(
            self.nrows,
            sum(((r & v.bits).bit_count() & 1) << i for i, r in enumerate(self.rows)),
        )

    def combine(self, coeffs: BitVector) -> BitVector:
        """Return ``coeffs @ self`` (XOR of the selected rows)."""
        _same_length(self.nrows, coeffs.length)
        acc = 0
        for i, r in enumerate(self.rows):
            if (coeffs.bits >> i) & 1:
                acc ^= r
        return BitVector(self.cols, acc)

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(self.nrows, tuple(out))

    def to_strings(self) -> list[str]:
        return [str(v) for v in self]

    def __str__(self) -> str:
        return "\n".join(self.to_strings())


def _same_length(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"length mismatch: {a} != {b}")


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def echelon(rows: Sequence[int]) -> dict[int, tuple[int, int]]:
    """Reduce ``rows`` with leftmost-pivot elimination.

    Returns ``{pivot column: (reduced row, combination mask)}`` where the mask
    records which input rows XOR to the reduced row.  Rows are fully reduced
    against one another (RREF), so the result is canonical for the row space.
    """
    basis: dict[int, tuple[int, int]] = {}
    for i, r in enumerate(rows):
        combo = 1 << i
        for col, (prow, pcombo) in basis.items():
            if (r >> col) & 1:
                r ^= prow
                combo ^= pcombo
        if not r:
            continue
        col = _lowest_bit(r)
        for c, (prow, pcombo) in list(basis.items()):
            if (prow >> col) & 1:
                basis[c] = (prow ^ r, pcombo ^ combo)
        basis[col] = (r, combo)
    return dict(sorted(basis.items()))


def rank(m: BitMatrix) -> int:
    return len(echelon(m.rows))


def rref(m: BitMatrix) -> BitMatrix:
    return BitMatrix(m.cols, tuple(r for r, _ in echelon(m.rows).values()))


def nullspace_basis(m: BitMatrix) -> BitMatrix:
    """Basis of ``{v : m @ v = 0}``, one vector per free column in ascending order."""
    basis = echelon(m.rows)
    out = []
    for free in range(m.cols):
        if free in basis:
            continue
        v = 1 << free
        for col, (prow, _) in basis.items():
            if (prow >> free) & 1:
                v |= 1 << col
        out.append(v)
    return BitMatrix(m.cols, tuple(out))


def solve_for_target(target: BitVector, rows: BitMatrix) -> BitVector | None:
    """Coefficients ``c`` with ``c @ rows == target``, or None outside the row space."""
    _same_length(target.length, rows.cols)
    t = target.bits
    combo = 0
    for col, (prow, pcombo) in echelon(rows.rows).items():
        if (t >> col) & 1:
            t ^= prow
            combo ^= pcombo
    if t:
        return None
    return BitVector(rows.nrows, combo)


def in_row_space(v: BitVector, m: BitMatrix) -> bool:
    return solve_for_target(v, m) is not None


class RowSpace:
    """Reusable membership oracle for one fixed row space.

    Building the echelon form once pays off when many targets are tested
    against the same rows (decodability sweeps, receiver decoding).
    """

    def __init__(self, m: BitMatrix):
        self.matrix = m
        self._basis = echelon(m.rows)

    @property
    def dim(self) -> int:
        return len(self._basis)

    def solve(self, target: BitVector) -> BitVector | None:
        _same_length(target.length, self.matrix.cols)
        t = target.bits
        combo = 0
        for col, (prow, pcombo) in self._basis.items():
            if (t >> col) & 1:
                t ^= prow
                combo ^= pcombo
        return None if t else BitVector(self.matrix.nrows, combo)

    def __contains__(self, target: BitVector) -> bool:
        return self.solve(target) is not None


def span_elements(rows: Sequence[int]) -> list[int]:
    """All 2**len(rows) XOR combinations (duplicates kept when rows are dependent)."""
    out = [0]
    for r in rows:
        out += [x ^ r for x in out]
    return out
