"""Named experiments behind the command line tool.

Each experiment is a function from an ExperimentConfig to (header, rows);
run_experiment dispatches by name and writes the rows as CSV with a trailing
comment line recording the master seed.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .ballprob import BallProbQuery, ball_prob_mc, product_cdf_quadrature, KMEANS_CSV_HEADER
from .bounds import BOUNDS_CSV_HEADER, main_threshold, mc_small_sn
from .cg import cg_solve
from .dense import svd_values
from .operators import (
    DENSIFY_CAP,
    CsrMatrix,
    LowRankUpdate,
    PerturbedOperator,
    apply,
    to_dense,
)
from .rng import (
    RADEMACHER,
    REAL_GAUSSIAN,
    DistributionSpec,
    Seed,
    sample_gaussians,
    sample_matrix,
)
from .simplex import PERTURBATION_MODES, perturbed_pivots

SIMPLEX_CSV_HEADER = (
    "n", "mode", "sigma", "trials", "mean_pivots", "min_pivots", "max_pivots", "seed",
)


def gen_antidiag(n: int) -> CsrMatrix:
    """0/1 band along the anti-diagonal: entry (i, j) is 1 exactly when
    i + j is n - 2, n, or n + 1 in 1-based indexing.

    The family is full rank with a smallest singular value that decays
    roughly like a power of 2/(1+sqrt(5)), which makes it a good stress case
    for relative accuracy.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rows, cols = [], []
    for i in range(1, n + 1):
        for s in (n - 2, n, n + 1):
            j = s - i
            if 1 <= j <= n:
                rows.append(i - 1)
                cols.append(j - 1)
    return CsrMatrix.from_coo(n, rows, cols, np.ones(len(rows)))


def rademacher_counterexample(n: int, seed: Seed):
    """One draw of the sign-matrix construction that is singular with
    probability exactly 1/2.

    The base is M = L D with D = diag(0, 1, ..., 1) and L a 45 degree
    rotation of coordinates (1, 2). For Rademacher u, v the update u v^T
    leaves M + u v^T singular precisely when u_1 + u_2 = 0, an even-odds
    event, and nonsingular otherwise. Returns (m, singular_now).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    d = np.ones(n)
    d[0] = 0.0
    rot = np.eye(n)
    c = math.sqrt(0.5)
    rot[0, 0] = c
    rot[0, 1] = -c
    rot[1, 0] = c
    rot[1, 1] = c
    m = rot * d  # right-multiply by diag(d)
    uv = sample_matrix(seed, n, 2, DistributionSpec(RADEMACHER))
    spectrum = svd_values(m + np.outer(uv[:, 0], uv[:, 1]))
    singular = bool(spectrum.values[-1] < 1e-10 * spectrum.values[0])
    return m, singular


def median_time_ns(fn, reps: int = 25, warmups: int = 5) -> int:
    """Median wall time of fn() over reps calls, after warmup calls."""
    if reps < 1 or warmups < 0:
        raise ValueError("need reps >= 1 and warmups >= 0")
    for _ in range(warmups):
        fn()
    samples = []
    for _ in range(reps):
        start = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - start)
    samples.sort()
    return samples[len(samples) // 2]


@dataclass
class ExperimentConfig:
    name: str
    n_values: tuple = ()
    k: int = 1
    dist: DistributionSpec = field(default_factory=lambda: DistributionSpec(REAL_GAUSSIAN))
    sigma: float | None = None
    trials: int | None = None
    seed: Seed = field(default_factory=lambda: Seed(0))
    out_path: str = ""


_REGISTRY = {}


def _experiment(name):
    def register(fn):
        _REGISTRY[name] = fn
        return fn

    return register


def registered_experiments() -> tuple:
    return tuple(sorted(_REGISTRY))


def run_experiment(cfg: ExperimentConfig) -> str:
    """Run a registered experiment and write its CSV. Returns the path."""
    fn = _REGISTRY.get(cfg.name)
    if fn is None:
        known = ", ".join(registered_experiments())
        raise ValueError(f"unknown experiment {cfg.name!r}; registered: {known}")
    values = tuple(int(v) for v in cfg.n_values)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("n values must be strictly ascending")
    if any(v < 1 for v in values):
        raise ValueError("n values must be positive")
    cfg.n_values = values
    if cfg.trials is not None and cfg.trials < 1:
        raise ValueError("trials must be positive")
    if cfg.sigma is not None and cfg.sigma < 0.0:
        raise ValueError("sigma must be nonnegative")
    header, rows = fn(cfg)
    path = cfg.out_path or f"{cfg.name}.csv"
    _write_csv(path, header, rows, cfg.seed.master)
    return path


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path, header, rows, master):
    lines = [",".join(header)]
    lines.extend(",".join(_format_cell(cell) for cell in row) for row in rows)
    lines.append(f"# seed={master}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


@_experiment("fig1a")
def _fig1a(cfg):
    """Smallest singular value of the anti-diagonal family, before and after
    rank-1 and dense Gaussian perturbation."""
    n_values = cfg.n_values or tuple(range(10, 41, 2))
    trials = 20 if cfg.trials is None else cfg.trials
    sigma = 1.0 if cfg.sigma is None else cfg.sigma
    rows = []
    for idx, n in enumerate(n_values):
        a = to_dense(PerturbedOperator(gen_antidiag(n)), cap=max(DENSIFY_CAP, n))
        s_orig = float(svd_values(a).values[-1])
        r1 = np.empty(trials)
        dn = np.empty(trials)
        for t in range(trials):
            g = sample_gaussians(Seed(cfg.seed.master, idx * trials + t), n * (n + 2))
            g = g.reshape(n, n + 2)
            rank1 = a + sigma * np.outer(g[:, 0], g[:, 1])
            r1[t] = np.linalg.svd(rank1, compute_uv=False)[-1]
            dn[t] = np.linalg.svd(a + sigma * g[:, 2:], compute_uv=False)[-1]
        rows.append([n, s_orig, float(r1.mean()), float(dn.mean())])
    return ("n", "s_orig", "s_rank1_mean", "s_dense_mean"), rows


def _dense_timing_byte_limit() -> int:
    """How many bytes a timing matrix may take: 60% of MemAvailable."""
    try:
        with open("/proc/meminfo") as fh:
            for line in fh:
                if line.startswith("MemAvailable:"):
                    return int(int(line.split()[1]) * 1024 * 0.6)
    except OSError:
        pass
    return 2 * 1024 ** 3


@_experiment("fig1b")
def _fig1b(cfg):
    """Matvec timing, rank-1 update against the densified operator.

    The dense cell is left blank when the matrix would not fit in memory.
    """
    n_values = cfg.n_values or tuple(2 ** p for p in range(10, 16))
    limit = _dense_timing_byte_limit()
    rows = []
    for idx, n in enumerate(n_values):
        g = sample_gaussians(Seed(cfg.seed.master, idx), 3 * n).reshape(n, 3)
        update = LowRankUpdate(g[:, 0:1], g[:, 1:2])
        op = PerturbedOperator(gen_antidiag(n), update)
        x = np.ascontiguousarray(g[:, 2])
        t_rank1 = median_time_ns(lambda: apply(op, x))
        if 8 * n * n <= limit:
            dense_op = PerturbedOperator(to_dense(op, cap=n))
            t_dense = median_time_ns(lambda: apply(dense_op, x))
            del dense_op
            rows.append([n, t_rank1, t_dense])
        else:
            rows.append([n, t_rank1, ""])
    return ("n", "time_rank1_ns", "time_dense_ns"), rows


@_experiment("kleeminty")
def _kleeminty(cfg):
    """Pivot counts on the worst-case cube, unperturbed and perturbed."""
    n_values = cfg.n_values or (10,)
    sigma = 0.1 if cfg.sigma is None else cfg.sigma
    trials = 20 if cfg.trials is None else cfg.trials
    rows = []
    for n in n_values:
        for mode in PERTURBATION_MODES:
            st = perturbed_pivots(n, mode, cfg.seed, sigma=sigma, trials=trials)
            rows.append([
                st.n, st.mode, st.sigma, st.trials,
                st.mean_pivots, st.min_pivots, st.max_pivots, st.seed.master,
            ])
    return SIMPLEX_CSV_HEADER, rows


@_experiment("kmeans_ball")
def _kmeans_ball(cfg):
    """Ball probabilities for dense versus rank-1 product noise.

    n values are dimensions here. The quadrature column is filled for the
    product model at sigma = 1 and left blank otherwise.
    """
    d_values = cfg.n_values or (2, 16, 64)
    sigma = 1.0 if cfg.sigma is None else cfg.sigma
    if sigma == 0.0:
        raise ValueError("sigma must be positive here")
    trials = 100000 if cfg.trials is None else max(cfg.trials, 1000)
    rows = []
    cell = 0
    for d in d_values:
        for scale in (0.5, 0.1, 0.05):
            eps = scale * sigma
            query = BallProbQuery(d, eps, sigma)
            for mode in ("dense_gaussian", "rank1_product"):
                # blocks inside one cell must not collide with the next cell
                est = ball_prob_mc(query, mode, trials, Seed(cfg.seed.master, cell << 32))
                quad = ""
                if mode == "rank1_product" and sigma == 1.0:
                    quad = product_cdf_quadrature(query)
                rows.append([mode, d, eps, sigma, trials, est.p_hat, est.ci_low, est.ci_high, quad])
                cell += 1
    return KMEANS_CSV_HEADER, rows


@_experiment("rademacher")
def _rademacher(cfg):
    """Fraction of singular draws of the probability-1/2 construction."""
    n_values = cfg.n_values or (20,)
    trials = 2000 if cfg.trials is None else cfg.trials
    rows = []
    for n in n_values:
        singular = 0
        for i in range(trials):
            _, is_singular = rademacher_counterexample(n, Seed(cfg.seed.master, i))
            singular += is_singular
        rows.append([n, trials, singular, singular / trials, cfg.seed.master])
    return ("n", "trials", "n_singular", "fraction_singular", "seed"), rows


@_experiment("remark_sqrt_eps")
def _remark_sqrt_eps(cfg):
    """Symmetric rank-1 perturbation of diag(1, ..., 1, 0): the probability
    of s_n <= t^2 scales like t, the square-root regime of the bound."""
    n_values = cfg.n_values or (20,)
    trials = 20000 if cfg.trials is None else max(cfg.trials, 100)
    rows = []
    for n in n_values:
        spectrum = np.ones(n)
        spectrum[-1] = 0.0
        for t in (0.02, 0.05, 0.1):
            est = mc_small_sn(
                n, 1, spectrum, DistributionSpec(REAL_GAUSSIAN),
                t * t, trials, cfg.seed, symmetric=True,
            )
            rows.append([
                "remark_sqrt_eps", n, 1, REAL_GAUSSIAN, t * t, trials,
                est.p_hat, est.ci_low, est.ci_high, cfg.seed.master,
            ])
    return BOUNDS_CSV_HEADER, rows


@_experiment("scaling")
def _scaling(cfg):
    """Hit rate of s_n below the simplified threshold across eps = 4^-1..4^-5
    on the rank-deficient diagonal model."""
    n_values = cfg.n_values or (50,)
    trials = 20000 if cfg.trials is None else max(cfg.trials, 100)
    k = cfg.k
    rows = []
    for n in n_values:
        spectrum = np.ones(n)
        spectrum[n - k:] = 0.0
        for eps in (0.25, 0.0625, 0.015625, 0.00390625, 0.0009765625):
            threshold = main_threshold(eps, n, k, 1.0)
            est = mc_small_sn(n, k, spectrum, cfg.dist, threshold, trials, cfg.seed)
            rows.append([
                "scaling", n, k, cfg.dist.kind, threshold, trials,
                est.p_hat, est.ci_low, est.ci_high, cfg.seed.master,
            ])
    return BOUNDS_CSV_HEADER, rows


@_experiment("cg_bench")
def _cg_bench(cfg):
    """Conjugate gradient iteration counts on synthetic spectra with
    condition numbers 10^2 and 10^4."""
    n_values = cfg.n_values or (4000,)
    rows = []
    for idx, n in enumerate(n_values):
        b = sample_gaussians(Seed(cfg.seed.master, idx), n)
        for kappa in (1e2, 1e4):
            diag = np.geomspace(1.0 / kappa, 1.0, n)
            _, report = cg_solve(PerturbedOperator(diag), b, tol=1e-8, max_iter=20 * n)
            rows.append([
                n, kappa, report.iterations, report.final_residual,
                report.converged, cfg.seed.master,
            ])
    return ("n", "kappa", "iterations", "final_residual", "converged", "seed"), rows
