"""Exact dense linear algebra over small prime fields.

Rows over F_2 are packed into Python ints (bit j is column j) and reduced
with XOR; odd primes use plain lists of residues.  Pivoting always takes the
leftmost nonzero column, so kernel bases come out the same on every run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class InconsistentSystem(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the column span."""


def _check_prime(p: int) -> None:
    if p < 2 or p > 255 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"unsupported modulus {p}")


@dataclass(frozen=True)
class FpMatrix:
    p: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        if any(not 0 <= e < self.p for e in self.entries):
            raise ValueError("entries must be reduced residues")

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]], cols: int | None = None) -> FpMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat: list[int] = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            flat.extend(x % p for x in r)
        return cls(p, len(rows), cols, tuple(flat))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> FpMatrix:
        return cls(p, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, p: int, n: int) -> FpMatrix:
        return cls(p, n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, p: int, columns: Sequence[Sequence[int]], rows: int) -> FpMatrix:
        data = [[0] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, x in enumerate(col):
                data[i][j] = x % p
        return cls.from_rows(p, data, len(columns))

    def row(self, i: int) -> list[int]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.rows)]

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def transpose(self) -> FpMatrix:
        return FpMatrix.from_rows(self.p, [self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: FpMatrix) -> FpMatrix:
        if self.p != other.p or self.cols != other.rows:
            raise ValueError("shape or modulus mismatch")
        p = self.p
        ocols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.append([sum(a * b for a, b in zip(r, c)) % p for c in ocols])
        return FpMatrix.from_rows(p, out, other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return [sum(a * b for a, b in zip(self.row(i), v)) % self.p for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)


def _pack(row: Sequence[int]) -> int:
    word = 0
    for j, x in enumerate(row):
        if x & 1:
            word |= 1 << j
    return word


def _unpack(word: int, n: int) -> list[int]:
    return [(word >> j) & 1 for j in range(n)]


def _rref2(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """RREF over F_2 on packed rows; returns (rows, pivot columns)."""
    work = [r for r in rows if r]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        bit = 1 << col
        sel = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        pr = work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= pr
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def _rrefp(rows: list[list[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        sel = next((i for i in range(r, len(work)) if work[i][col]), None)
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        inv = pow(work[r][col], -1, p)
        work[r] = [x * inv % p for x in work[r]]
        pr = work[r]
        for i in range(len(work)):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], pr)]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rref(m: FpMatrix) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if m.p == 2:
        packed, piv = _rref2([_pack(r) for r in m.to_rows()], m.cols)
        return [_unpack(w, m.cols) for w in packed], piv
    return _rrefp(m.to_rows(), m.cols, m.p)


def rank(m: FpMatrix) -> int:
    if m.p == 2:
        return len(_rref2([_pack(r) for r in m.to_rows()], m.cols)[1])
    return len(_rrefp(m.to_rows(), m.cols, m.p)[1])


def kernel_basis(m: FpMatrix) -> list[list[int]]:
    """Basis of the right null space, one vector per free column."""
    reduced, pivots = rref(m)
    p = m.p
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [0] * m.cols
        v[free] = 1
        for row, pc in zip(reduced, pivots):
            if row[free]:
                v[pc] = (-row[free]) % p
        basis.append(v)
    return basis


def solve(m: FpMatrix, b: Sequence[int]) -> list[int]:
    """Some x with m @ x == b; raises InconsistentSystem otherwise."""
    if len(b) != m.rows:
        raise ValueError("right-hand side length does not match row count")
    p = m.p
    aug = FpMatrix.from_rows(p, [m.row(i) + [b[i] % p] for i in range(m.rows)], m.cols + 1)
    reduced, pivots = rref(aug)
    if m.cols in pivots:
        raise InconsistentSystem("inconsistent")
    x = [0] * m.cols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[m.cols]
    return x


class Echelon:
    """Incrementally maintained echelon basis of a row space.

    Vectors are packed ints at p = 2 and ``{column: residue}`` dicts
    otherwise.  The pivot of a vector is its *highest* nonzero column, which
    lets callers order columns so that the largest monomial is eliminated.
    """

    def __init__(self, p: int):
        _check_prime(p)
        self.p = p
        self.pivots: dict[int, object] = {}
        self._order: list[int] | None = None

    def zero(self):
        return 0 if self.p == 2 else {}

    def vector(self, coords: dict[int, int]):
        if self.p == 2:
            word = 0
            for j, c in coords.items():
                if c % 2:
                    word ^= 1 << j
            return word
        return {j: c % self.p for j, c in coords.items() if c % self.p}

    def coords(self, v) -> dict[int, int]:
        if self.p == 2:
            out = {}
            while v:
                low = v & -v
                out[low.bit_length() - 1] = 1
                v ^= low
            return out
        return dict(v)

    def _lead(self, v) -> int:
        if self.p == 2:
            return v.bit_length() - 1
        return max(v) if v else -1

    def _descending(self) -> list[int]:
        if self._order is None:
            self._order = sorted(self.pivots, reverse=True)
        return self._order

    def reduce(self, v):
        """Clear every pivot column of ``v``; the result is canonical."""
        p = self.p
        if p == 2:
            for col in self._descending():
                if (v >> col) & 1:
                    v ^= self.pivots[col]
            return v
        v = dict(v)
        for col in self._descending():
            c = v.get(col)
            if c:
                for j, x in self.pivots[col].items():
                    y = (v.get(j, 0) - c * x) % p
                    if y:
                        v[j] = y
                    else:
                        v.pop(j, None)
        return v

    def insert(self, v) -> bool:
        """Add ``v`` to the span; returns True if the rank grew."""
        p = self.p
        if p == 2:
            while v:
                lead = v.bit_length() - 1
                piv = self.pivots.get(lead)
                if piv is None:
                    self.pivots[lead] = v
                    self._order = None
                    return True
                v ^= piv
            return False
        v = {j: c % p for j, c in v.items() if c % p}
        while v:
            lead = max(v)
            piv = self.pivots.get(lead)
            if piv is None:
                inv = pow(v[lead], -1, p)
                self.pivots[lead] = {j: c * inv % p for j, c in v.items()}
                self._order = None
                return True
            c = v[lead]
            for j, x in piv.items():
                y = (v.get(j, 0) - c * x) % p
                if y:
                    v[j] = y
                else:
                    v.pop(j, None)
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def is_zero(self, v) -> bool:
        return not v


def rank_of_vectors(p: int, vectors: Iterable[Sequence[int]]) -> int:
    vecs = [list(v) for v in vectors]
    if not vecs:
        return 0
    return rank(FpMatrix.from_rows(p, vecs, len(vecs[0])))
