"""Probability that noisy points land in a small ball.

Two noise models around a cluster center: dense Gaussian noise
x ~ N(0, sigma^2 I_d), and rank-1 product noise y * x with a scalar
y ~ N(0, 1) on top. The product model concentrates much less, which is the
phenomenon these estimates quantify.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .bounds import McEstimate, clopper_pearson
from .rng import Seed, sample_gaussians

BALL_MODES = ("dense_gaussian", "rank1_product")

KMEANS_CSV_HEADER = (
    "mode", "d", "eps", "sigma", "trials", "p_hat", "ci_low", "ci_high", "quadrature",
)

_BLOCK = 32768


class AccuracyError(RuntimeError):
    """Quadrature could not reach the requested tolerance."""

    def __init__(self, message, achieved):
        super().__init__(message)
        self.achieved = achieved


@dataclass(frozen=True)
class BallProbQuery:
    d: int
    eps: float
    sigma: float = 1.0

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be a positive dimension")
        if not (math.isfinite(self.eps) and self.eps >= 0.0):
            raise ValueError("eps must be finite and nonnegative")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError("sigma must be finite and positive")


def ball_prob_mc(query: BallProbQuery, mode: str, trials: int, seed: Seed) -> McEstimate:
    """Monte Carlo estimate of P(||noise|| <= eps) under the given mode.

    Draws are blocked; block b comes from Seed(seed.master, seed.stream + b),
    so estimates are reproducible independent of block scheduling.
    """
    if mode not in BALL_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {BALL_MODES}")
    if trials < 1000:
        raise ValueError("need at least 1000 trials")
    per_trial = query.d if mode == "dense_gaussian" else query.d + 1
    # both events reduce to squared norms against (eps / sigma)^2
    target = (query.eps / query.sigma) ** 2
    hits = 0
    done = 0
    block = 0
    while done < trials:
        size = min(_BLOCK, trials - done)
        g = sample_gaussians(Seed(seed.master, seed.stream + block), size * per_trial)
        g = g.reshape(size, per_trial)
        if mode == "dense_gaussian":
            r2 = np.sum(g * g, axis=1)
        else:
            r2 = g[:, 0] ** 2 * np.sum(g[:, 1:] ** 2, axis=1)
        hits += int(np.count_nonzero(r2 <= target))
        done += size
        block += 1
    low, high = clopper_pearson(hits, trials)
    return McEstimate(hits / trials, low, high, trials, seed)


def product_cdf_quadrature(query: BallProbQuery, tol: float = 1e-8) -> float:
    """P(|y| ||x|| <= eps) for the rank-1 product model at sigma = 1, exactly.

    Conditioning on W = ||x||^2 ~ chi^2_d gives
    P = E_W[ erf(eps / sqrt(2 W)) ], integrated against the chi-square
    density. Raises AccuracyError when the quadrature error estimate exceeds
    tol.
    """
    if query.sigma != 1.0:
        raise ValueError("quadrature is defined for sigma = 1")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if query.eps == 0.0:
        return 0.0
    d = query.d
    eps = query.eps
    log_norm = (d / 2.0) * math.log(2.0) + special.gammaln(d / 2.0)

    def integrand(w):
        log_density = (d / 2.0 - 1.0) * math.log(w) - w / 2.0 - log_norm
        return math.exp(log_density) * special.erf(eps / math.sqrt(2.0 * w))

    # split at a point past the chi-square bulk; quad handles the d = 1
    # endpoint singularity on the finite piece and the tail separately
    cut = max(2.0 * d, 20.0)
    inner = tol * 1e-2
    value1, err1 = integrate.quad(integrand, 0.0, cut, epsabs=inner, epsrel=inner, limit=200)
    value2, err2 = integrate.quad(integrand, cut, np.inf, epsabs=inner, epsrel=inner, limit=200)
    achieved = err1 + err2
    if achieved > tol:
        raise AccuracyError(f"quadrature error {achieved:.3e} exceeds tol {tol:.3e}", achieved)
    return min(1.0, value1 + value2)
