"""Dantzig-rule tableau simplex and the worst-case cube family."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import REAL_GAUSSIAN, DistributionSpec, Seed, sample_matrix

REDUCED_COST_TOL = 1e-9

PERTURBATION_MODES = ("none", "dense", "rank1")


class InfeasibleStartError(ValueError):
    """The all-slack basis is not feasible (some b_i < 0)."""


@dataclass
class LinearProgram:
    """max c^T x subject to A x <= b, x >= 0."""

    c: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        if self.a.ndim != 2:
            raise ValueError("A must be 2-d")
        m, n = self.a.shape
        if self.c.shape != (n,) or self.b.shape != (m,):
            raise ValueError("c and b must match the shape of A")
        for name, arr in (("c", self.c), ("A", self.a), ("b", self.b)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class SimplexResult:
    status: str  # optimal, unbounded, or cycle_limit
    pivots: int
    objective_value: float


@dataclass(frozen=True)
class PivotStats:
    n: int
    mode: str
    sigma: float
    trials: int
    mean_pivots: float
    min_pivots: int
    max_pivots: int
    seed: Seed


def klee_minty_lp(n: int) -> LinearProgram:
    """The n-dimensional squashed cube that forces 2^n - 1 Dantzig pivots.

        max sum_j 2^(n-j) x_j
        s.t. 2 sum_{j<i} 2^(i-j) x_j + x_i <= 5^i,  x >= 0.
    """
    if not 1 <= n <= 20:
        raise ValueError("n must be in [1, 20]")
    idx = np.arange(1, n + 1, dtype=float)
    c = 2.0 ** (n - idx)
    a = np.zeros((n, n))
    for i in range(1, n + 1):
        a[i - 1, i - 1] = 1.0
        for j in range(1, i):
            a[i - 1, j - 1] = 2.0 ** (i - j + 1)
    b = 5.0 ** idx
    return LinearProgram(c, a, b)


def dantzig_solve(lp: LinearProgram, max_pivots: int = 100000) -> SimplexResult:
    """Tableau simplex from the all-slack basis, most-negative-reduced-cost
    entering rule, smallest index on ties.
    """
    if max_pivots < 1:
        raise ValueError("max_pivots must be positive")
    if np.any(lp.b < 0.0):
        raise InfeasibleStartError("b has negative entries")
    m, n = lp.a.shape
    t = np.zeros((m + 1, n + m + 1))
    t[:m, :n] = lp.a
    t[:m, n:n + m] = np.eye(m)
    t[:m, -1] = lp.b
    t[m, :n] = -lp.c
    pivots = 0
    while True:
        col = int(np.argmin(t[m, :-1]))
        if t[m, col] >= -REDUCED_COST_TOL:
            return SimplexResult("optimal", pivots, float(t[m, -1]))
        if pivots >= max_pivots:
            return SimplexResult("cycle_limit", pivots, float(t[m, -1]))
        column = t[:m, col]
        positive = column > REDUCED_COST_TOL
        if not np.any(positive):
            return SimplexResult("unbounded", pivots, math.inf)
        ratios = np.full(m, np.inf)
        ratios[positive] = t[:m, -1][positive] / column[positive]
        row = int(np.argmin(ratios))
        t[row] /= t[row, col]
        multipliers = t[:, col].copy()
        multipliers[row] = 0.0
        t -= np.outer(multipliers, t[row])
        pivots += 1


def perturbed_pivots(n, mode, seed, sigma=0.1, trials=20, max_pivots=100000) -> PivotStats:
    """Pivot counts on the cube LP with the constraint matrix perturbed.

    mode 'none' solves the LP as is; 'dense' adds sigma G with G an i.i.d.
    Gaussian matrix; 'rank1' adds sigma u v^T. b and c are left untouched so
    the slack basis stays feasible. Trial i draws from Seed(seed.master, i).
    """
    if mode not in PERTURBATION_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {PERTURBATION_MODES}")
    if trials < 1:
        raise ValueError("trials must be positive")
    if sigma < 0.0:
        raise ValueError("sigma must be nonnegative")
    lp = klee_minty_lp(n)
    spec = DistributionSpec(REAL_GAUSSIAN)
    counts = np.empty(trials, dtype=np.int64)
    for i in range(trials):
        if mode == "none":
            perturbed = lp
        else:
            trial_seed = Seed(seed.master, i)
            if mode == "dense":
                noise = sigma * sample_matrix(trial_seed, n, n, spec)
            else:
                uv = sample_matrix(trial_seed, n, 2, spec)
                noise = sigma * np.outer(uv[:, 0], uv[:, 1])
            perturbed = LinearProgram(lp.c, lp.a + noise, lp.b)
        counts[i] = dantzig_solve(perturbed, max_pivots=max_pivots).pivots
    return PivotStats(
        n, mode, float(sigma), trials,
        float(counts.mean()), int(counts.min()), int(counts.max()), seed,
    )
