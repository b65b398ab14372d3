"""The reference implementations themselves get checked against numpy before
anything else trusts them."""
import numpy as np

from oracles import lu_determinant, symmetric_jacobi_eigenvalues


def test_jacobi_eigenvalues_match_numpy():
    rng = np.random.default_rng(101)
    for _ in range(50):
        n = int(rng.integers(1, 17))
        g = rng.standard_normal((n, n))
        sym = (g + g.T) / 2.0
        mine = symmetric_jacobi_eigenvalues(sym)
        ref = np.linalg.eigvalsh(sym)[::-1]
        scale = max(1.0, float(np.max(np.abs(ref))))
        assert np.max(np.abs(mine - ref)) <= 1e-10 * scale


def test_jacobi_eigenvalues_known():
    assert np.allclose(symmetric_jacobi_eigenvalues(np.diag([3.0, 1.0, 2.0])), [3.0, 2.0, 1.0])
    got = symmetric_jacobi_eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(got, [1.0, -1.0])
    assert np.allclose(symmetric_jacobi_eigenvalues(np.zeros((3, 3))), np.zeros(3))


def test_lu_determinant_matches_numpy():
    rng = np.random.default_rng(202)
    for _ in range(50):
        n = int(rng.integers(1, 9))
        g = rng.standard_normal((n, n))
        assert abs(lu_determinant(g) - np.linalg.det(g)) <= 1e-9 * max(1.0, abs(np.linalg.det(g)))


def test_lu_determinant_singular():
    a = np.ones((3, 3))
    assert lu_determinant(a) == 0.0
