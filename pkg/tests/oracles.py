"""Independent reference computations for the test suite.

These are deliberately separate implementations: a two-sided Jacobi
eigensolver and an LU determinant, sharing no code with the package paths
they are used to check.
"""
import numpy as np


def symmetric_jacobi_eigenvalues(s, tol=1e-13, max_sweeps=100):
    """Eigenvalues of a symmetric matrix by cyclic two-sided Jacobi.

    Returns them sorted descending.
    """
    a = np.array(s, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n)
    threshold = tol * scale
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold:
                    continue
                rotated = True
                theta = 0.5 * np.arctan2(2.0 * apq, a[p, p] - a[q, q])
                c = np.cos(theta)
                s_ = np.sin(theta)
                rp = a[p].copy()
                rq = a[q].copy()
                a[p] = c * rp + s_ * rq
                a[q] = c * rq - s_ * rp
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp + s_ * cq
                a[:, q] = c * cq - s_ * cp
        if not rotated:
            break
    return np.sort(np.diag(a))[::-1]


def lu_determinant(m):
    """Determinant via partial-pivoted elimination."""
    a = np.array(m, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    det = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            return 0.0
        if p != k:
            a[[k, p]] = a[[p, k]]
            det = -det
        det *= a[k, k]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
    return float(det)
