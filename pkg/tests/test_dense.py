import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from lowrank_smooth import (
    SingularMatrixError,
    SingularSpectrum,
    block_inverse_bound_check,
    condition_number,
    solve_dense,
    svd_values,
    svd_values_complex,
    top_right_singular_vector,
)
from oracles import symmetric_jacobi_eigenvalues


def test_svd_values_known():
    s = svd_values(np.diag([3.0, 4.0]))
    assert np.allclose(s.values, [4.0, 3.0])
    assert s.values[0] >= s.values[-1]

    s = svd_values(np.diag([1.0, 0.0]))
    assert s.values[-1] <= s.accuracy  # zero is detected as zero


def test_svd_values_rectangular_both_ways():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((9, 4))
    tall = svd_values(a).values
    wide = svd_values(a.T).values
    assert tall.shape == (4,)
    assert np.allclose(tall, wide, rtol=1e-12)


def test_svd_values_rejects_bad_input():
    with pytest.raises(ValueError):
        svd_values(np.ones(3))
    with pytest.raises(ValueError):
        svd_values(np.array([[1.0, np.nan]]))
    with pytest.raises(ValueError):
        svd_values(np.empty((0, 2)))


def test_svd_values_against_eigen_oracle():
    rng = np.random.default_rng(17)
    for _ in range(25):
        n = int(rng.integers(2, 21))
        a = rng.standard_normal((n, n))
        mine = svd_values(a).values
        lams = symmetric_jacobi_eigenvalues(a.T @ a)
        ref = np.sqrt(np.clip(lams, 0.0, None))
        assert np.max(np.abs(mine - ref)) <= 1e-9 * mine[0]


@settings(max_examples=30, deadline=None)
@given(
    hnp.arrays(
        np.float64,
        hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=8),
        elements=st.floats(-1e3, 1e3),
    )
)
def test_svd_values_invariants(a):
    s = svd_values(a)
    vals = s.values
    assert vals.shape == (min(a.shape),)
    assert np.all(vals >= 0.0)
    assert np.all(np.diff(vals) <= 0.0)
    # largest value bounded by the Frobenius norm, and equal to it for rank 1
    assert vals[0] <= np.linalg.norm(a) + 1e-9 * (1.0 + vals[0])


def test_svd_relative_accuracy_on_graded_diagonal():
    # values spanning 12 orders of magnitude come back to near machine
    # precision relative to themselves, not merely relative to s_1
    d = 10.0 ** -np.arange(0.0, 13.0)
    got = svd_values(np.diag(d)).values
    assert np.allclose(got, d, rtol=1e-13)


def test_svd_values_complex_known():
    s = svd_values_complex(np.array([[3.0 + 4.0j]]))
    assert np.allclose(s.values, [5.0])


def test_svd_values_complex_real_input_matches_real_path():
    rng = np.random.default_rng(23)
    a = rng.standard_normal((5, 5))
    assert np.array_equal(svd_values_complex(a + 0j).values, svd_values(a).values)


def test_svd_values_complex_against_lapack():
    rng = np.random.default_rng(29)
    for shape in ((4, 4), (6, 3), (3, 6)):
        z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        mine = svd_values_complex(z).values
        ref = np.linalg.svd(z, compute_uv=False)
        assert mine.shape == ref.shape
        assert np.allclose(mine, ref, rtol=1e-10)


def test_condition_number():
    assert condition_number(SingularSpectrum(np.array([1.0, 1.0, 1.0]), 0.0)) == 1.0
    assert condition_number(SingularSpectrum(np.array([2.0, 0.5]), 1e-12)) == 4.0
    assert math.isinf(condition_number(SingularSpectrum(np.array([1.0, 0.0]), 0.0)))
    assert math.isinf(condition_number(svd_values(np.diag([1.0, 1.0, 0.0]))))


def test_solve_dense_roundtrip():
    rng = np.random.default_rng(31)
    for n in (1, 2, 5, 12):
        a = rng.standard_normal((n, n)) + 3.0 * np.eye(n)
        x = rng.standard_normal(n)
        got = solve_dense(a, a @ x)
        assert np.allclose(got, x, atol=1e-10 * max(1.0, np.abs(x).max()))


def test_solve_dense_singular():
    with pytest.raises(SingularMatrixError):
        solve_dense(np.ones((3, 3)), np.ones(3))


def test_solve_dense_needs_pivoting():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(solve_dense(a, np.array([2.0, 3.0])), [3.0, 2.0])


def test_block_bound_identity_example():
    lhs, rhs = block_inverse_bound_check(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)), np.eye(2))
    assert lhs == pytest.approx(1.0)
    assert rhs == pytest.approx(2.0)


def test_block_bound_coupled_example():
    lhs, rhs = block_inverse_bound_check([[1.0]], [[2.0]], [[0.0]], [[1.0]])
    # M is unit upper triangular: s_n(M) = 1/||M^{-1}|| with the Schur
    # complement equal to 1, so rhs = 1 + 1*(1 + 2)(1 + 0) = 4
    assert rhs == pytest.approx(4.0)
    assert lhs <= rhs


def test_block_bound_singular_a():
    with pytest.raises(SingularMatrixError):
        block_inverse_bound_check(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2)), np.eye(2))


def test_block_bound_singular_schur_gives_inf_rhs():
    # D = C A^{-1} B makes the Schur complement zero
    lhs, rhs = block_inverse_bound_check([[1.0]], [[1.0]], [[1.0]], [[1.0]])
    assert math.isinf(rhs)
    assert lhs <= rhs


def test_block_bound_random_splits_hold():
    rng = np.random.default_rng(37)
    checked = 0
    while checked < 100:
        n = int(rng.integers(2, 13))
        p = int(rng.integers(1, n))
        m = rng.standard_normal((n, n))
        try:
            lhs, rhs = block_inverse_bound_check(
                m[:p, :p], m[:p, p:], m[p:, :p], m[p:, p:]
            )
        except SingularMatrixError:
            continue
        assert lhs <= rhs
        checked += 1


def test_top_right_singular_vector():
    rng = np.random.default_rng(41)
    for _ in range(10):
        a = rng.standard_normal((7, 5))
        v = top_right_singular_vector(a)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        s1 = svd_values(a).values[0]
        assert np.linalg.norm(a @ v) >= s1 - 1e-9
