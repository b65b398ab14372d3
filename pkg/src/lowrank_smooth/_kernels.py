"""Jitted inner loops. Everything here is plain array-in, array-out."""
import numba
import numpy as np


@numba.njit(cache=True)
def jacobi_orthogonalize(a, tol, max_sweeps):
    """One-sided Jacobi on the columns of a (m x n, m >= n), in place.

    Cyclic sweeps; a pair (i, j) is rotated when the normalized dot product
    of the two columns exceeds tol. Returns (off, sweeps) where off is the
    largest normalized off-diagonal dot product seen in the last sweep.
    """
    m, n = a.shape
    off = 0.0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for r in range(m):
                    alpha += a[r, i] * a[r, i]
                    beta += a[r, j] * a[r, j]
                    gamma += a[r, i] * a[r, j]
                # sqrt before multiplying: alpha * beta can underflow to 0
                # when a null column has shrunk into the denormal range
                scale = np.sqrt(alpha) * np.sqrt(beta)
                if scale == 0.0:
                    continue
                ratio = abs(gamma) / scale
                if ratio > off:
                    off = ratio
                if ratio <= tol:
                    continue
                theta = 0.5 * np.arctan2(2.0 * gamma, alpha - beta)
                c = np.cos(theta)
                s = np.sin(theta)
                for r in range(m):
                    ai = a[r, i]
                    aj = a[r, j]
                    a[r, i] = c * ai + s * aj
                    a[r, j] = c * aj - s * ai
        if off <= tol:
            return off, sweep + 1
    return off, max_sweeps


@numba.njit(cache=True)
def csr_matvec(row_offsets, col_indices, values, x, out):
    n = row_offsets.size - 1
    for i in range(n):
        acc = 0.0
        for p in range(row_offsets[i], row_offsets[i + 1]):
            acc += values[p] * x[col_indices[p]]
        out[i] = acc
