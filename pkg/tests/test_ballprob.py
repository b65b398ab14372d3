import math

import numpy as np
import pytest
from scipy import stats

from lowrank_smooth import (
    AccuracyError,
    BallProbQuery,
    Seed,
    ball_prob_mc,
    product_cdf_quadrature,
)


def test_query_validation():
    BallProbQuery(3, 0.5)
    BallProbQuery(1, 0.0, 2.0)
    with pytest.raises(ValueError):
        BallProbQuery(0, 0.5)
    with pytest.raises(ValueError):
        BallProbQuery(3, -0.1)
    with pytest.raises(ValueError):
        BallProbQuery(3, 0.5, 0.0)
    with pytest.raises(ValueError):
        BallProbQuery(3, math.inf)


def test_mc_validation():
    q = BallProbQuery(2, 0.5)
    with pytest.raises(ValueError):
        ball_prob_mc(q, "solid", 2000, Seed(0))
    with pytest.raises(ValueError):
        ball_prob_mc(q, "dense_gaussian", 999, Seed(0))


def test_mc_deterministic():
    q = BallProbQuery(4, 0.8)
    a = ball_prob_mc(q, "rank1_product", 5000, Seed(21))
    b = ball_prob_mc(q, "rank1_product", 5000, Seed(21))
    assert a == b


def test_dense_mc_matches_chi_square():
    # ||x||^2 / sigma^2 is chi-square with d degrees of freedom
    for d, eps, sigma in ((2, 0.5, 1.0), (3, 1.0, 2.0), (8, 2.0, 1.0)):
        q = BallProbQuery(d, eps, sigma)
        est = ball_prob_mc(q, "dense_gaussian", 40000, Seed(33))
        exact = float(stats.chi2.cdf((eps / sigma) ** 2, d))
        assert est.ci_low - 1e-12 <= exact <= est.ci_high + 1e-12


def test_eps_zero():
    q = BallProbQuery(5, 0.0)
    assert ball_prob_mc(q, "dense_gaussian", 2000, Seed(1)).p_hat == 0.0
    assert product_cdf_quadrature(q) == 0.0


def test_mc_monotone_in_eps():
    prev = -1.0
    for eps in (0.1, 0.5, 1.0, 3.0):
        est = ball_prob_mc(BallProbQuery(3, eps), "rank1_product", 5000, Seed(2))
        assert est.p_hat >= prev
        prev = est.p_hat


def test_quadrature_matches_mc():
    for d, eps in ((1, 0.5), (2, 0.1), (16, 0.05)):
        q = BallProbQuery(d, eps)
        exact = product_cdf_quadrature(q)
        est = ball_prob_mc(q, "rank1_product", 100000, Seed(44))
        assert est.ci_low - 1e-12 <= exact <= est.ci_high + 1e-12


def test_quadrature_saturates_to_one():
    assert product_cdf_quadrature(BallProbQuery(2, 200.0)) == pytest.approx(1.0, abs=1e-6)


def test_quadrature_monotone_in_d():
    # the product spreads out with dimension, so mass near zero shrinks
    values = [product_cdf_quadrature(BallProbQuery(d, 0.05)) for d in (4, 16, 64, 256)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_quadrature_requires_unit_sigma():
    with pytest.raises(ValueError):
        product_cdf_quadrature(BallProbQuery(2, 0.5, 2.0))


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_quadrature_accuracy_error_carries_achieved():
    with pytest.raises(AccuracyError) as info:
        product_cdf_quadrature(BallProbQuery(2, 0.5), tol=1e-16)
    assert info.value.achieved > 1e-16


def test_rank1_much_heavier_than_dense_at_small_radius():
    # the product model keeps polynomially more mass near the origin
    d = 16
    q = BallProbQuery(d, 0.05)
    dense = ball_prob_mc(q, "dense_gaussian", 20000, Seed(5))
    rank1 = ball_prob_mc(q, "rank1_product", 20000, Seed(5))
    assert dense.p_hat == 0.0
    assert rank1.p_hat > 0.004


def test_rank1_sharpness_lower_bound():
    # p stays above 0.05 eps / sqrt(d): the 1/sqrt(d) rate is attained
    for d in (16, 64, 256, 1024):
        value = product_cdf_quadrature(BallProbQuery(d, 0.05))
        assert value >= 0.05 * 0.05 / math.sqrt(d)
