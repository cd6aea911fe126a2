"""Sparse linear algebra over the two-element field.

Matrices are stored column-compressed.  Elimination packs columns into
``uint64`` words and reduces them one at a time against earlier pivots
(pivot = lowest set row), so the result only depends on the column order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels


@dataclass(frozen=True)
class ChainF2:
    support: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        s = tuple(sorted(int(i) for i in self.support))
        if any(a == b for a, b in zip(s, s[1:])):
            raise ValueError("duplicate index in chain support")
        object.__setattr__(self, "support", s)

    @classmethod
    def from_indices(cls, idx: Iterable[int]) -> ChainF2:
        """Build a chain, cancelling repeated indices mod 2."""
        odd: set[int] = set()
        for i in idx:
            odd ^= {int(i)}
        return cls(tuple(odd))

    def __add__(self, other: ChainF2) -> ChainF2:
        return ChainF2(tuple(set(self.support) ^ set(other.support)))

    def __len__(self) -> int:
        return len(self.support)

    def __bool__(self) -> bool:
        return bool(self.support)

    def __iter__(self):
        return iter(self.support)


def _words(n_bits: int) -> int:
    return max(1, (n_bits + 63) // 64)


def pack_indices(idx: np.ndarray, n_bits: int) -> np.ndarray:
    out = np.zeros(_words(n_bits), dtype=np.uint64)
    idx = np.asarray(idx, dtype=np.int64)
    np.bitwise_xor.at(out, idx >> 6, np.left_shift(np.uint64(1), (idx & 63).astype(np.uint64)))
    return out


def unpack_bits(words: np.ndarray, n_bits: int) -> np.ndarray:
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return np.flatnonzero(bits[:n_bits])


class SparseMatrixF2:
    """``n_rows x n_cols`` matrix; column ``j`` has rows
    ``indices[indptr[j]:indptr[j+1]]``, sorted and duplicate-free."""

    def __init__(self, n_rows: int, n_cols: int, indptr: np.ndarray, indices: np.ndarray):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        if self.indptr.shape != (self.n_cols + 1,):
            raise ValueError("indptr length must be n_cols + 1")
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= self.n_rows):
            raise ValueError("row index out of range")

    @classmethod
    def from_coo(cls, n_rows: int, n_cols: int, rows, cols) -> SparseMatrixF2:
        """Entries given as (row, col) pairs; repeated pairs cancel mod 2."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if rows.size:
            if rows.min() < 0 or rows.max() >= n_rows or cols.min() < 0 or cols.max() >= n_cols:
                raise ValueError("entry out of range")
            key = cols * max(n_rows, 1) + rows
            uniq, counts = np.unique(key, return_counts=True)
            uniq = uniq[counts % 2 == 1]
            rows, cols = uniq % max(n_rows, 1), uniq // max(n_rows, 1)
        indptr = np.zeros(n_cols + 1, dtype=np.int64)
        np.add.at(indptr, cols + 1, 1)
        return cls(n_rows, n_cols, np.cumsum(indptr), rows)

    @classmethod
    def from_columns(cls, n_rows: int, columns: Sequence[Iterable[int]]) -> SparseMatrixF2:
        rows, cols = [], []
        for j, col in enumerate(columns):
            for r in col:
                rows.append(r)
                cols.append(j)
        return cls.from_coo(n_rows, len(columns), rows, cols)

    @classmethod
    def from_dense(cls, a) -> SparseMatrixF2:
        a = np.asarray(a) % 2
        r, c = np.nonzero(a)
        return cls.from_coo(a.shape[0], a.shape[1], r, c)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> SparseMatrixF2:
        return cls(n_rows, n_cols, np.zeros(n_cols + 1, dtype=np.int64), np.zeros(0, dtype=np.int64))

    @classmethod
    def identity(cls, k: int) -> SparseMatrixF2:
        return cls(k, k, np.arange(k + 1), np.arange(k))

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def column(self, j: int) -> np.ndarray:
        return self.indices[self.indptr[j] : self.indptr[j + 1]]

    @property
    def columns(self) -> list[np.ndarray]:
        return [self.column(j) for j in range(self.n_cols)]

    def coo(self) -> tuple[np.ndarray, np.ndarray]:
        cols = np.repeat(np.arange(self.n_cols), np.diff(self.indptr))
        return self.indices.copy(), cols

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        r, c = self.coo()
        out[r, c] = 1
        return out

    def select_columns(self, idx) -> SparseMatrixF2:
        idx = np.asarray(idx, dtype=np.int64)
        r, c = self.coo()
        pos = np.full(self.n_cols, -1, dtype=np.int64)
        pos[idx] = np.arange(idx.size)
        keep = pos[c] >= 0
        return SparseMatrixF2.from_coo(self.n_rows, idx.size, r[keep], pos[c[keep]])

    def select_rows(self, idx) -> SparseMatrixF2:
        idx = np.asarray(idx, dtype=np.int64)
        r, c = self.coo()
        pos = np.full(self.n_rows, -1, dtype=np.int64)
        pos[idx] = np.arange(idx.size)
        keep = pos[r] >= 0
        return SparseMatrixF2.from_coo(idx.size, self.n_cols, pos[r[keep]], c[keep])

    def hstack(self, other: SparseMatrixF2) -> SparseMatrixF2:
        if other.n_rows != self.n_rows:
            raise ValueError(f"row mismatch: {self.n_rows} vs {other.n_rows}")
        indptr = np.concatenate([self.indptr, other.indptr[1:] + self.indptr[-1]])
        return SparseMatrixF2(self.n_rows, self.n_cols + other.n_cols, indptr,
                              np.concatenate([self.indices, other.indices]))

    def matmul(self, other: SparseMatrixF2) -> SparseMatrixF2:
        if other.n_rows != self.n_cols:
            raise ValueError(f"shape mismatch: {self.n_cols} vs {other.n_rows}")
        cols = [self.apply(ChainF2(tuple(other.column(j)))).support for j in range(other.n_cols)]
        return SparseMatrixF2.from_columns(self.n_rows, cols)

    def apply(self, x: ChainF2) -> ChainF2:
        if x.support and x.support[-1] >= self.n_cols:
            raise ValueError("chain index out of range")
        parts = [self.column(j) for j in x.support]
        if not parts:
            return ChainF2()
        return ChainF2.from_indices(np.concatenate(parts).tolist())

    def packed_columns(self) -> np.ndarray:
        W = _words(self.n_rows)
        out = np.zeros((self.n_cols, W), dtype=np.uint64)
        r, c = self.coo()
        np.bitwise_xor.at(out, (c, r >> 6), np.left_shift(np.uint64(1), (r & 63).astype(np.uint64)))
        return out

    def __repr__(self) -> str:
        return f"SparseMatrixF2({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


class Eliminator:
    """Column elimination state that accepts more columns over time.

    Columns are reduced in the order appended; ``solve`` answers against every
    column appended so far without redoing earlier work.
    """

    def __init__(self, n_rows: int, track: bool = True, capacity: int = 64):
        self.n_rows = int(n_rows)
        self.track = track
        self.W = _words(self.n_rows)
        self.n_cols = 0
        self.rank = 0
        self._red = np.zeros((capacity, self.W), dtype=np.uint64)
        self._combo = np.zeros((capacity if track else 1, _words(capacity) if track else 1), dtype=np.uint64)
        self._piv = np.full(max(self.n_rows, 1), -1, dtype=np.int64)
        self._low = np.full(capacity, -1, dtype=np.int64)

    def _grow(self, need: int) -> None:
        cap = self._red.shape[0]
        if need <= cap:
            return
        new = max(need, 2 * cap)
        red = np.zeros((new, self.W), dtype=np.uint64)
        red[:cap] = self._red
        low = np.full(new, -1, dtype=np.int64)
        low[:cap] = self._low
        self._red, self._low = red, low
        if self.track:
            combo = np.zeros((new, _words(new)), dtype=np.uint64)
            combo[:cap, : self._combo.shape[1]] = self._combo
            self._combo = combo

    def append(self, A: SparseMatrixF2) -> None:
        if A.n_rows != self.n_rows:
            raise ValueError(f"row mismatch: {A.n_rows} vs {self.n_rows}")
        start = self.n_cols
        stop = start + A.n_cols
        self._grow(stop)
        self._red[start:stop] = A.packed_columns()
        if self.track:
            j = np.arange(start, stop)
            self._combo[j, j >> 6] = np.left_shift(np.uint64(1), (j & 63).astype(np.uint64))
        kernels.reduce_columns(self._red, self._combo, self._piv, self._low, start, stop, self.track)
        self.rank += int(np.count_nonzero(self._low[start:stop] >= 0))
        self.n_cols = stop

    def contains(self, b: ChainF2) -> bool:
        return self._reduce(b)[0]

    def solve(self, b: ChainF2) -> ChainF2 | None:
        if not self.track:
            raise RuntimeError("solve needs an eliminator built with track=True")
        ok, acc = self._reduce(b)
        if not ok:
            return None
        return ChainF2(tuple(unpack_bits(acc, self.n_cols).tolist()))

    def _reduce(self, b: ChainF2) -> tuple[bool, np.ndarray]:
        if b.support and b.support[-1] >= self.n_rows:
            raise ValueError("right-hand side index out of range")
        vec = pack_indices(np.asarray(b.support, dtype=np.int64), self.n_rows)
        acc = np.zeros(self._combo.shape[1], dtype=np.uint64)
        ok = kernels.reduce_vector(self._red, self._combo, self._piv, vec, acc, self.track)
        return bool(ok), acc


def solve(A: SparseMatrixF2, b: ChainF2) -> ChainF2 | None:
    """Some ``x`` with ``A x = b``, or ``None`` if ``b`` is not in the image."""
    e = Eliminator(A.n_rows, track=True, capacity=max(A.n_cols, 1))
    e.append(A)
    return e.solve(b)


def rank(A: SparseMatrixF2) -> int:
    if A.n_cols == 0 or A.n_rows == 0:
        return 0
    e = Eliminator(A.n_rows, track=False, capacity=A.n_cols)
    e.append(A)
    return e.rank


def rank_of_span_union(A: SparseMatrixF2, B: SparseMatrixF2) -> int:
    """Rank of the column concatenation ``[A | B]``."""
    return rank(A.hstack(B))
