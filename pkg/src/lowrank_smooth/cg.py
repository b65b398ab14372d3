"""Conjugate gradient on perturbed operators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import CsrMatrix, PerturbedOperator, apply


class NotSpdError(ValueError):
    """Operator is not symmetric positive definite."""


@dataclass(frozen=True)
class CgReport:
    iterations: int
    final_residual: float
    converged: bool


def _csr_symmetric(m: CsrMatrix, tol: float) -> bool:
    rows = np.repeat(np.arange(m.n, dtype=np.int64), np.diff(m.row_offsets))
    t = CsrMatrix.from_coo(m.n, m.col_indices, rows, m.values)
    if t.nnz != m.nnz:
        return False
    if np.any(t.row_offsets != m.row_offsets) or np.any(t.col_indices != m.col_indices):
        return False
    scale = float(np.max(np.abs(m.values))) if m.nnz else 1.0
    return bool(np.all(np.abs(t.values - m.values) <= tol * max(scale, 1e-300)))


def _check_symmetric(op: PerturbedOperator):
    base = op.base
    if isinstance(base, CsrMatrix):
        if not _csr_symmetric(base, 1e-12):
            raise NotSpdError("sparse base is not symmetric")
    elif base.ndim == 2:
        scale = float(np.max(np.abs(base)))
        if np.max(np.abs(base - base.T)) > 1e-12 * max(scale, 1e-300):
            raise NotSpdError("dense base is not symmetric")
    # a 1-d base is diagonal, symmetric by construction
    if op.update is not None and not op.update.symmetric:
        raise NotSpdError("low-rank update must be symmetric (U U^T) for cg")


def cg_solve(op: PerturbedOperator, b, tol: float = 1e-8, max_iter: int | None = None):
    """Solve op x = b. Returns (x, CgReport).

    Definiteness is checked on the fly: a nonpositive p^T A p aborts with
    NotSpdError. The report's residual is the true relative residual
    ||b - A x|| / ||b||, recomputed at exit rather than taken from the
    recurrence.
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (op.n,):
        raise ValueError("right-hand side length must match the operator")
    norm_b = float(np.linalg.norm(b))
    if norm_b == 0.0:
        raise ValueError("right-hand side must be nonzero")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    _check_symmetric(op)
    if max_iter is None:
        max_iter = 10 * op.n
    x = np.zeros(op.n)
    r = b.copy()
    p = r.copy()
    rs = float(r @ r)
    iterations = 0
    for _ in range(max_iter):
        if np.sqrt(rs) <= tol * norm_b:
            break
        ap = apply(op, p)
        pap = float(p @ ap)
        if pap <= 0.0:
            raise NotSpdError(f"p^T A p = {pap:.3e} is not positive")
        alpha = rs / pap
        x += alpha * p
        r -= alpha * ap
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
        iterations += 1
    residual = float(np.linalg.norm(b - apply(op, x)) / norm_b)
    return x, CgReport(iterations, residual, residual <= tol)
