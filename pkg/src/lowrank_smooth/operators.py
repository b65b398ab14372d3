"""Perturbed operators: a sparse, dense, or diagonal base plus U V^T.

The low-rank update is never materialized by apply(); that is the whole
reason the type exists.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import csr_matvec
from .dense import SingularSpectrum

DENSIFY_CAP = 4096


class DensifyCapError(ValueError):
    """Refusing to materialize a dense matrix above the size cap."""


@dataclass
class CsrMatrix:
    """Square CSR matrix. Column indices are strictly increasing per row."""

    n: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        self.row_offsets = np.ascontiguousarray(self.row_offsets, dtype=np.int64)
        self.col_indices = np.ascontiguousarray(self.col_indices, dtype=np.int64)
        self.values = np.ascontiguousarray(self.values, dtype=float)
        if self.row_offsets.shape != (self.n + 1,):
            raise ValueError("row_offsets must have length n + 1")
        if self.row_offsets[0] != 0 or self.row_offsets[-1] != self.col_indices.size:
            raise ValueError("row_offsets must start at 0 and end at nnz")
        if np.any(np.diff(self.row_offsets) < 0):
            raise ValueError("row_offsets must be nondecreasing")
        if self.col_indices.shape != self.values.shape:
            raise ValueError("col_indices and values must have equal length")
        if self.col_indices.size:
            if self.col_indices.min() < 0 or self.col_indices.max() >= self.n:
                raise ValueError("column index out of range")
            # strictly increasing within each row: any non-increase must sit
            # exactly at a row boundary
            drops = np.nonzero(np.diff(self.col_indices) <= 0)[0] + 1
            if not np.all(np.isin(drops, self.row_offsets)):
                raise ValueError("column indices must be strictly increasing per row")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")

    @property
    def nnz(self) -> int:
        return int(self.col_indices.size)

    @classmethod
    def from_coo(cls, n, rows, cols, values) -> "CsrMatrix":
        """Build from triplets; duplicate positions are summed."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=float)
        if not (rows.shape == cols.shape == values.shape) or rows.ndim != 1:
            raise ValueError("rows, cols, values must be equal-length 1-d arrays")
        if rows.size:
            if rows.min() < 0 or rows.max() >= n or cols.min() < 0 or cols.max() >= n:
                raise ValueError("triplet index out of range")
        order = np.lexsort((cols, rows))
        rows, cols, values = rows[order], cols[order], values[order]
        if rows.size:
            first = np.concatenate(([True], (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])))
            if not first.all():
                values = np.add.reduceat(values, np.nonzero(first)[0])
                rows, cols = rows[first], cols[first]
        offsets = np.concatenate(([0], np.cumsum(np.bincount(rows, minlength=n))))
        return cls(n, offsets, cols, values)


@dataclass
class LowRankUpdate:
    """U V^T with U, V of shape n x k. symmetric=True aliases V to U."""

    u: np.ndarray
    v: np.ndarray | None = None
    symmetric: bool = False

    def __post_init__(self):
        self.u = np.ascontiguousarray(self.u, dtype=float)
        if self.u.ndim != 2 or self.u.shape[1] < 1:
            raise ValueError("u must be a 2-d n x k array with k >= 1")
        if not np.all(np.isfinite(self.u)):
            raise ValueError("u must be finite")
        if self.symmetric:
            self.v = self.u
        else:
            if self.v is None:
                raise ValueError("v is required unless symmetric=True")
            self.v = np.ascontiguousarray(self.v, dtype=float)
            if self.v.shape != self.u.shape:
                raise ValueError("u and v must have identical shape")
            if not np.all(np.isfinite(self.v)):
                raise ValueError("v must be finite")

    @property
    def k(self) -> int:
        return int(self.u.shape[1])


@dataclass
class PerturbedOperator:
    """base + update, where base is a CsrMatrix, a square 2-d array, or a
    1-d vector standing for a diagonal matrix."""

    base: object
    update: LowRankUpdate | None = None

    def __post_init__(self):
        if not isinstance(self.base, CsrMatrix):
            self.base = np.asarray(self.base, dtype=float)
            if self.base.ndim == 2:
                if self.base.shape[0] != self.base.shape[1] or self.base.shape[0] == 0:
                    raise ValueError("dense base must be square and nonempty")
            elif self.base.ndim == 1:
                if self.base.size == 0:
                    raise ValueError("diagonal base must be nonempty")
            else:
                raise ValueError("base must be 1-d or 2-d")
            if not np.all(np.isfinite(self.base)):
                raise ValueError("base must be finite")
        if self.update is not None and self.update.u.shape[0] != self.n:
            raise ValueError("update row count must match the base dimension")

    @property
    def n(self) -> int:
        if isinstance(self.base, CsrMatrix):
            return self.base.n
        return int(self.base.shape[0])


def apply(op: PerturbedOperator, x) -> np.ndarray:
    """y = (base + U V^T) x without forming the update."""
    x = np.ascontiguousarray(x, dtype=float)
    if x.shape != (op.n,):
        raise ValueError("vector length must match the operator dimension")
    base = op.base
    if isinstance(base, CsrMatrix):
        y = np.empty(base.n)
        csr_matvec(base.row_offsets, base.col_indices, base.values, x, y)
    elif base.ndim == 2:
        y = base @ x
    else:
        y = base * x
    if op.update is not None:
        y += op.update.u @ (op.update.v.T @ x)
    return y


def to_dense(op: PerturbedOperator, cap: int = DENSIFY_CAP) -> np.ndarray:
    """Materialize the operator as a dense array; refuses above cap."""
    if op.n > cap:
        raise DensifyCapError(f"n = {op.n} exceeds the densification cap {cap}")
    base = op.base
    if isinstance(base, CsrMatrix):
        a = np.zeros((base.n, base.n))
        for i in range(base.n):
            lo, hi = base.row_offsets[i], base.row_offsets[i + 1]
            a[i, base.col_indices[lo:hi]] = base.values[lo:hi]
    elif base.ndim == 2:
        a = base.copy()
    else:
        a = np.diag(base)
    if op.update is not None:
        u, v = op.update.u, op.update.v
        # accumulate in row blocks so the u v^T temp never rivals a itself
        step = max(1, (1 << 24) // op.n)
        for lo in range(0, op.n, step):
            a[lo:lo + step] += u[lo:lo + step] @ v.T
    return a


def det_rank1_diag(d, u, v) -> float:
    """det(diag(d) + u v^T) for d with exactly one zero, in the last slot.

    Expanding the determinant along the rank-1 update leaves the single term
    u_n v_n prod(d_1 .. d_{n-1}); everything else carries the zero.
    """
    d = np.asarray(d, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if not (d.ndim == u.ndim == v.ndim == 1) or not (d.shape == u.shape == v.shape):
        raise ValueError("d, u, v must be 1-d arrays of equal length")
    zeros = np.nonzero(d == 0.0)[0]
    if zeros.size != 1:
        raise ValueError(f"d must have exactly one zero entry, found {zeros.size}")
    if zeros[0] != d.size - 1:
        raise ValueError("the zero entry of d must be last")
    return float(u[-1] * v[-1] * np.prod(d[:-1]))


def diagonal_model(spectrum) -> np.ndarray:
    """Diagonal base vector built from a singular spectrum.

    Accepts a SingularSpectrum or a plain descending nonnegative 1-d array.
    """
    if isinstance(spectrum, SingularSpectrum):
        return spectrum.values.copy()
    d = np.asarray(spectrum, dtype=float)
    if d.ndim != 1 or d.size == 0:
        raise ValueError("spectrum must be a nonempty 1-d array")
    if np.any(d < 0.0) or np.any(np.diff(d) > 0.0):
        raise ValueError("spectrum must be nonnegative and sorted descending")
    return d.copy()


_MM_HEADER = "%%matrixmarket matrix coordinate real general"


def load_matrix_market(path) -> CsrMatrix:
    """Read a square coordinate-format Matrix Market file."""
    with open(path) as fh:
        header = fh.readline().strip().lower()
        if header != _MM_HEADER:
            raise ValueError(f"unsupported Matrix Market header: {header!r}")
        line = fh.readline()
        while line and line.lstrip().startswith("%"):
            line = fh.readline()
        fields = line.split()
        if len(fields) != 3:
            raise ValueError("malformed size line")
        rows, cols, nnz = (int(f) for f in fields)
        if rows != cols:
            raise ValueError("only square matrices are supported")
        ri = np.empty(nnz, dtype=np.int64)
        ci = np.empty(nnz, dtype=np.int64)
        vals = np.empty(nnz)
        got = 0
        for line in fh:
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            if got == nnz:
                raise ValueError("more entries than the size line declares")
            i, j, v = line.split()
            # Matrix Market is 1-based
            ri[got] = int(i) - 1
            ci[got] = int(j) - 1
            vals[got] = float(v)
            got += 1
        if got != nnz:
            raise ValueError(f"expected {nnz} entries, file has {got}")
    return CsrMatrix.from_coo(rows, ri, ci, vals)
