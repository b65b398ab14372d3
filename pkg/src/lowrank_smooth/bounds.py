"""Probability bounds for the smallest singular value under low-rank noise,
and the Monte Carlo machinery that checks them.

The headline bound: for M with s_{n-k}(M) < n and a Gaussian n x k pair
(U, V),

    P( s_n(M + U V^T) <= (t1^2 / k) min(1/2, s_{n-k}(M) / (4 t2^2 (n-k))) )
        <= C1 t1 + C2 exp(-C3 t2^2 n).

Every Monte Carlo routine here derives trial i from Seed(master, i), so the
estimates are reproducible bit for bit regardless of evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import stats

from .operators import DENSIFY_CAP, diagonal_model
from .rng import COMPLEX_GAUSSIAN, REAL_GAUSSIAN, DistributionSpec, Seed, sample_matrix

BOUNDS_CSV_HEADER = (
    "experiment", "n", "k", "dist", "threshold", "trials",
    "p_hat", "ci_low", "ci_high", "seed",
)


@dataclass(frozen=True)
class BoundParams:
    """Free parameters of the bound expressions.

    Unset constants default to 1, which is the honest reading of an
    unspecified absolute constant: the shapes are what get tested, not the
    prefactors.
    """

    t1: float = 0.0
    t2: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0
    eps: float = 0.0
    t: float = 0.0
    constants: Mapping[str, float] = field(default_factory=dict)

    def const(self, name: str) -> float:
        return float(self.constants.get(name, 1.0))


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    ci_low: float
    ci_high: float
    trials: int
    seed: Seed

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0.0 <= self.ci_low <= self.p_hat <= self.ci_high <= 1.0:
            raise ValueError("need 0 <= ci_low <= p_hat <= ci_high <= 1")


def clopper_pearson(successes: int, trials: int, confidence: float = 0.99):
    """Exact binomial confidence interval."""
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials, trials >= 1")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    alpha = 1.0 - confidence
    if successes == 0:
        low = 0.0
    else:
        low = float(stats.beta.ppf(alpha / 2.0, successes, trials - successes + 1))
    if successes == trials:
        high = 1.0
    else:
        high = float(stats.beta.ppf(1.0 - alpha / 2.0, successes + 1, trials - successes))
    return low, high


def _check_nk(n: int, k: int):
    if k < 1 or 2 * k > n:
        raise ValueError("need 1 <= k <= n / 2")


def main_threshold(eps: float, n: int, k: int, s_nk: float) -> float:
    """The simplified threshold eps * s_{n-k}(M) / (n k)."""
    _check_nk(n, k)
    if eps < 0.0:
        raise ValueError("eps must be nonnegative")
    if not 0.0 < s_nk:
        raise ValueError("s_nk must be positive")
    if s_nk >= n:
        raise ValueError(f"hypothesis requires s_nk < n, got {s_nk}")
    return float(eps) * float(s_nk) / (n * k)


def main_rhs(params: BoundParams, n: int, k: int, s_nk: float) -> tuple[float, float]:
    """(threshold, bound) of the headline inequality at (t1, t2)."""
    _check_nk(n, k)
    if not 0.0 < s_nk < n:
        raise ValueError("need 0 < s_nk < n")
    t1, t2 = params.t1, params.t2
    if t1 < 0.0 or t2 < 0.0:
        raise ValueError("t1 and t2 must be nonnegative")
    denom = 4.0 * t2 * t2 * (n - k)
    frac = math.inf if denom == 0.0 else s_nk / denom
    threshold = (t1 * t1 / k) * min(0.5, frac)
    bound = params.const("C1") * t1 + params.const("C2") * math.exp(
        -params.const("C3") * t2 * t2 * n
    )
    return threshold, bound


def beyond_rhs(params: BoundParams, n: int, k: int, s_n: float) -> float:
    """Tail bound with all four failure terms exposed.

    Parameter floors: x1 >= 3 sqrt(log 2nk), x3 >= nk, 0 < x2 <= 1, t > 0.
    """
    _check_nk(n, k)
    if s_n <= 0.0:
        raise ValueError("s_n must be positive")
    x1, x2, x3, t = params.x1, params.x2, params.x3, params.t
    x1_floor = 3.0 * math.sqrt(math.log(2.0 * n * k))
    if x1 < x1_floor - 1e-12:
        raise ValueError(f"x1 must be at least 3 sqrt(log 2nk) = {x1_floor:.6g}")
    if not 0.0 < x2 <= 1.0:
        raise ValueError("x2 must lie in (0, 1]")
    if x3 < n * k - 1e-9:
        raise ValueError(f"x3 must be at least n k = {n * k}")
    if t <= 0.0:
        raise ValueError("t must be positive")
    first = math.sqrt(n) / (x2 * t) * (1.0 + x1 * math.sqrt(x3) * math.sqrt(n * k) / s_n)
    second = math.exp(-x1 * x1 / 4.0)
    third = (2.0 / math.pi) ** (k / 2.0) * x2 ** k
    fourth = math.exp(-params.const("c") * x3)
    return params.const("C") * (first + second + third + fourth)


def sample_small_sn(n, k, base_spectrum, spec, trials, seed, symmetric=False) -> np.ndarray:
    """s_n(D + U V^T) for each trial, D = diag of base_spectrum.

    Trial i draws its Gaussian block from Seed(seed.master, i). With
    symmetric=True the update is U U^T from a single n x k draw.
    """
    _check_nk(n, k)
    if trials < 1:
        raise ValueError("trials must be positive")
    if not isinstance(spec, DistributionSpec):
        raise ValueError("spec must be a DistributionSpec")
    d = diagonal_model(base_spectrum)
    if d.size != n:
        raise ValueError("base spectrum length must equal n")
    if n > DENSIFY_CAP:
        raise ValueError(f"n = {n} exceeds the densification cap {DENSIFY_CAP}")
    is_complex = spec.kind == COMPLEX_GAUSSIAN
    base = np.diag(d.astype(complex) if is_complex else d)
    out = np.empty(trials)
    for i in range(trials):
        trial_seed = Seed(seed.master, i)
        if symmetric:
            u = sample_matrix(trial_seed, n, k, spec)
            v = u
        else:
            uv = sample_matrix(trial_seed, n, 2 * k, spec)
            u, v = uv[:, :k], uv[:, k:]
        out[i] = np.linalg.svd(base + u @ v.T, compute_uv=False)[-1]
    return out


def mc_small_sn(n, k, base_spectrum, spec, threshold, trials, seed, symmetric=False) -> McEstimate:
    """Clopper-Pearson estimate of P(s_n(D + U V^T) <= threshold)."""
    if trials < 100:
        raise ValueError("need at least 100 trials")
    if threshold < 0.0:
        raise ValueError("threshold must be nonnegative")
    values = sample_small_sn(n, k, base_spectrum, spec, trials, seed, symmetric=symmetric)
    successes = int(np.count_nonzero(values <= threshold))
    low, high = clopper_pearson(successes, trials)
    return McEstimate(successes / trials, low, high, trials, seed)


TAIL_EVENTS = ("gauss_small_sk", "gauss_large_s1", "complex_small_sk", "complex_large_s1")


def tail_lemma_mc(which: str, dims, t: float, trials: int, seed: Seed) -> McEstimate:
    """Estimate one of the Gaussian-block tail events.

    small_sk: s_k of a k x k block falls below t / sqrt(k).
    large_s1: s_1 of an (n-k) x k block exceeds t sqrt(n-k).
    """
    if which not in TAIL_EVENTS:
        raise ValueError(f"unknown event {which!r}; expected one of {TAIL_EVENTS}")
    if trials < 100:
        raise ValueError("need at least 100 trials")
    if t <= 0.0:
        raise ValueError("t must be positive")
    n, k = dims
    if k < 1 or n <= k:
        raise ValueError("need 1 <= k < n")
    spec = DistributionSpec(COMPLEX_GAUSSIAN if which.startswith("complex") else REAL_GAUSSIAN)
    small = which.endswith("small_sk")
    rows = k if small else n - k
    hits = 0
    for i in range(trials):
        g = sample_matrix(Seed(seed.master, i), rows, k, spec)
        s = np.linalg.svd(g, compute_uv=False)
        if small:
            hits += s[-1] <= t / math.sqrt(k)
        else:
            hits += s[0] >= t * math.sqrt(n - k)
    low, high = clopper_pearson(int(hits), trials)
    return McEstimate(hits / trials, low, high, trials, seed)
