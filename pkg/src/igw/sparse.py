"""Compressed sparse row matrices with deterministic multiply kernels.

The CSR kernels here are deliberately simple: products accumulate in a
fixed order (per-row, ascending column), so repeated runs are bit-identical
regardless of thread count. Everything is float64; the divergence
computations downstream are sensitive to small probabilities.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable CSR matrix.

    Invariants enforced at construction: row_ptr is non-decreasing with
    row_ptr[0] == 0 and row_ptr[-1] == nnz; column indices are strictly
    increasing within each row and in [0, n_cols); no explicit zeros are
    stored.
    """

    n_rows: int
    n_cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray
    # row id of every stored entry, precomputed for the bincount kernel
    _rows: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        row_ptr = _readonly(np.asarray(self.row_ptr, dtype=np.int64))
        col_idx = _readonly(np.asarray(self.col_idx, dtype=np.int64))
        values = _readonly(np.asarray(self.values, dtype=np.float64))
        object.__setattr__(self, "row_ptr", row_ptr)
        object.__setattr__(self, "col_idx", col_idx)
        object.__setattr__(self, "values", values)

        if self.n_rows < 0 or self.n_cols < 0:
            raise DimensionMismatch("negative matrix dimensions")
        if row_ptr.shape != (self.n_rows + 1,):
            raise DimensionMismatch("row_ptr must have length n_rows + 1")
        if row_ptr[0] != 0 or row_ptr[-1] != len(values):
            raise DimensionMismatch("row_ptr endpoints inconsistent with nnz")
        if np.any(np.diff(row_ptr) < 0):
            raise DimensionMismatch("row_ptr must be non-decreasing")
        if len(col_idx) != len(values):
            raise DimensionMismatch("col_idx and values lengths differ")
        if len(col_idx) and (col_idx.min() < 0 or col_idx.max() >= self.n_cols):
            raise DimensionMismatch("column index out of range")
        rows = np.repeat(np.arange(self.n_rows, dtype=np.int64), np.diff(row_ptr))
        # strictly increasing columns within a row; across a row boundary the
        # row id increases instead, so compare only within-row neighbours
        if len(col_idx) > 1:
            same_row = rows[1:] == rows[:-1]
            if np.any(same_row & (np.diff(col_idx) <= 0)):
                raise DimensionMismatch("columns must be strictly increasing per row")
        if np.any(values == 0.0):
            raise DimensionMismatch("explicit zeros are not stored")
        object.__setattr__(self, "_rows", _readonly(rows))

    # -- construction ------------------------------------------------------

    @classmethod
    def from_coo(cls, rows, cols, vals, shape) -> "SparseMatrix":
        """Build from triplets; duplicates are summed, zeros dropped."""
        n_rows, n_cols = shape
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if not (rows.shape == cols.shape == vals.shape):
            raise DimensionMismatch("triplet arrays must share a shape")
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if len(rows):
            is_new = np.empty(len(rows), dtype=bool)
            is_new[0] = True
            is_new[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            starts = np.flatnonzero(is_new)
            summed = np.add.reduceat(vals, starts)
            rows, cols, vals = rows[starts], cols[starts], summed
            keep = vals != 0.0
            rows, cols, vals = rows[keep], cols[keep], vals[keep]
        row_ptr = np.zeros(n_rows + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n_rows), out=row_ptr[1:])
        return cls(n_rows, n_cols, row_ptr, cols, vals)

    @classmethod
    def identity(cls, n: int, scale: float = 1.0) -> "SparseMatrix":
        idx = np.arange(n, dtype=np.int64)
        return cls(n, n, np.arange(n + 1, dtype=np.int64), idx,
                   np.full(n, scale, dtype=np.float64))

    # -- queries -----------------------------------------------------------

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols))
        out[self._rows, self.col_idx] = self.values
        return out

    def diagonal(self) -> np.ndarray:
        out = np.zeros(self.n_rows)
        on_diag = self._rows == self.col_idx
        out[self._rows[on_diag]] = self.values[on_diag]
        return out

    def row_sums(self) -> np.ndarray:
        return np.bincount(self._rows, weights=self.values, minlength=self.n_rows)

    def column_sums(self) -> np.ndarray:
        return np.bincount(self.col_idx, weights=self.values, minlength=self.n_cols)

    # -- products ----------------------------------------------------------

    def matmat(self, x: np.ndarray) -> np.ndarray:
        """Dense product self @ x in O(nnz * n_columns_of_x).

        Accepts a vector (n,) or matrix (n, C); the input's ndim is
        preserved. Never forms a dense n x n matrix.
        """
        x = np.asarray(x, dtype=np.float64)
        vector_in = x.ndim == 1
        if vector_in:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] != self.n_cols:
            raise DimensionMismatch(
                f"operand has shape {np.shape(x)}, expected ({self.n_cols}, C)")
        contrib = self.values[:, None] * x[self.col_idx]
        out = np.empty((self.n_rows, x.shape[1]))
        for c in range(x.shape[1]):
            out[:, c] = np.bincount(self._rows, weights=contrib[:, c],
                                    minlength=self.n_rows)
        return out[:, 0] if vector_in else out

    def __matmul__(self, x: np.ndarray) -> np.ndarray:
        return self.matmat(x)

    def scale_columns(self, d: np.ndarray) -> "SparseMatrix":
        """Return self @ diag(d) (entry (i, j) scaled by d[j])."""
        d = np.asarray(d, dtype=np.float64)
        if d.shape != (self.n_cols,):
            raise DimensionMismatch("diagonal length must equal n_cols")
        return SparseMatrix(self.n_rows, self.n_cols, self.row_ptr,
                            self.col_idx, self.values * d[self.col_idx])
