"""Dense reference linear algebra.

Singular values come from a one-sided Jacobi iteration, which keeps high
relative accuracy on tiny singular values; this is the point of the module,
and why it does not defer to a generic SVD. Intended for the small matrices
the experiments actually look at, not for bulk work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import jacobi_orthogonalize

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60


class SingularMatrixError(ValueError):
    """Matrix is singular to working precision."""


@dataclass(frozen=True)
class SingularSpectrum:
    """Singular values sorted descending plus an a posteriori accuracy bound.

    accuracy is an absolute uncertainty on each value: the largest normalized
    off-diagonal column dot product left at convergence, scaled by s_1. Values
    at or below accuracy are indistinguishable from zero.
    """

    values: np.ndarray
    accuracy: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("values must be a nonempty 1-d array")
        if np.any(v < 0.0):
            raise ValueError("singular values must be nonnegative")
        if np.any(np.diff(v) > 0.0):
            raise ValueError("values must be sorted descending")
        if not (math.isfinite(self.accuracy) and self.accuracy >= 0.0):
            raise ValueError("accuracy must be finite and nonnegative")
        object.__setattr__(self, "values", v)


def _validated(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise ValueError("expected a nonempty 2-d matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def svd_values(m) -> SingularSpectrum:
    """Singular values of a real matrix via one-sided Jacobi."""
    a = _validated(m)
    # orthogonalize columns; run on the transpose when the matrix is wide so
    # the short side carries the values
    work = a.copy() if a.shape[0] >= a.shape[1] else a.T.copy()
    work = np.ascontiguousarray(work)
    off, _ = jacobi_orthogonalize(work, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    vals = np.sqrt(np.sum(work * work, axis=0))
    vals[::-1].sort()
    s1 = vals[0]
    accuracy = max(off, np.finfo(float).eps) * s1 if s1 > 0.0 else 0.0
    return SingularSpectrum(vals, float(accuracy))


def svd_values_complex(m) -> SingularSpectrum:
    """Singular values of a complex matrix.

    Embeds z = x + iy as the real matrix [[x, -y], [y, x]], whose spectrum is
    that of z with every value doubled, and keeps one copy of each pair.
    """
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise ValueError("expected a nonempty 2-d matrix")
    re = np.real(a).astype(float)
    im = np.imag(a).astype(float)
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise ValueError("matrix entries must be finite")
    if not np.any(im):
        return svd_values(re)
    emb = np.block([[re, -im], [im, re]])
    spec = svd_values(emb)
    return SingularSpectrum(spec.values[0::2].copy(), spec.accuracy)


def condition_number(spectrum: SingularSpectrum) -> float:
    """s_1 / s_n, or inf when s_n is below the spectrum's accuracy."""
    v = spectrum.values
    if v[-1] <= spectrum.accuracy:
        return math.inf
    return float(v[0] / v[-1])


_PIVOT_FLOOR = 1e-300


def solve_dense(m, b) -> np.ndarray:
    """Solve m x = b by LU with partial pivoting.

    Raises SingularMatrixError when no usable pivot remains.
    """
    a = _validated(m).copy()
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("matrix must be square")
    rhs = np.asarray(b, dtype=float).copy()
    if rhs.shape != (n,):
        raise ValueError("right-hand side has wrong length")
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) < _PIVOT_FLOOR:
            raise SingularMatrixError(f"no pivot in column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            rhs[[k, p]] = rhs[[p, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
        rhs[k + 1:] -= factors * rhs[k]
    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (rhs[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def _solve_columns(a, b):
    x = np.empty_like(b)
    for j in range(b.shape[1]):
        x[:, j] = solve_dense(a, b[:, j])
    return x


def _op_norm(m) -> float:
    if m.size == 0:
        return 0.0
    return float(svd_values(m).values[0])


def block_inverse_bound_check(a, b, c, d) -> tuple[float, float]:
    """Evaluate both sides of the block bound on 1/s_n of M = [[A, B], [C, D]].

        s_n(M)^-1 <= ||A^-1|| + ||(M/A)^-1|| (1 + ||A^-1 B||)(1 + ||C A^-1||)

    where M/A = D - C A^-1 B is the Schur complement. Returns (lhs, rhs).
    A singular A raises SingularMatrixError; a singular Schur complement puts
    the right side at inf.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    d = np.atleast_2d(np.asarray(d, dtype=float))
    p = a.shape[0]
    q = d.shape[0]
    if a.shape != (p, p) or d.shape != (q, q):
        raise ValueError("A and D must be square")
    b = np.broadcast_to(np.asarray(b, dtype=float), (p, q)).copy()
    c = np.broadcast_to(np.asarray(c, dtype=float), (q, p)).copy()

    sa = svd_values(a)
    if sa.values[-1] <= sa.accuracy:
        raise SingularMatrixError("top-left block is singular, no Schur complement")
    ainv_b = _solve_columns(a, b)
    c_ainv = _solve_columns(a.T, c.T).T
    schur = d - c @ ainv_b

    m = np.block([[a, b], [c, d]])
    sm = svd_values(m)
    lhs = math.inf if sm.values[-1] <= sm.accuracy else 1.0 / float(sm.values[-1])

    ss = svd_values(schur)
    schur_term = math.inf if ss.values[-1] <= ss.accuracy else 1.0 / float(ss.values[-1])
    rhs = 1.0 / float(sa.values[-1]) + schur_term * (1.0 + _op_norm(ainv_b)) * (1.0 + _op_norm(c_ainv))
    return lhs, rhs


def top_right_singular_vector(m, max_iter=500, tol=1e-13) -> np.ndarray:
    """Unit right singular vector for s_1, by power iteration on m^T m.

    Deterministic all-ones start; fine for generic matrices, may stall on an
    input whose top singular vector is exactly orthogonal to it.
    """
    a = _validated(m)
    n = a.shape[1]
    v = np.full(n, 1.0 / math.sqrt(n))
    for _ in range(max_iter):
        w = a.T @ (a @ v)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return v
        w /= norm
        if np.linalg.norm(w - v) < tol or np.linalg.norm(w + v) < tol:
            return w
        v = w
    return v
