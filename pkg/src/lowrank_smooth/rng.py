"""Deterministic sampling on counter-based streams.

Every draw is keyed by a (master, stream) pair. Distinct streams under one
master are independent, and a stream's output never depends on what other
streams were consumed, so trial-level seeding survives any execution order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_U64 = 2 ** 64

REAL_GAUSSIAN = "real_gaussian_unit"
COMPLEX_GAUSSIAN = "complex_gaussian_half"
RADEMACHER = "rademacher"
SPHERE = "sphere_uniform"
DISTRIBUTION_KINDS = (REAL_GAUSSIAN, COMPLEX_GAUSSIAN, RADEMACHER, SPHERE)


@dataclass(frozen=True)
class Seed:
    master: int
    stream: int = 0

    def __post_init__(self):
        for name, value in (("master", self.master), ("stream", self.stream)):
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise ValueError(f"{name} must be an integer")
            if not 0 <= value < _U64:
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class DistributionSpec:
    kind: str

    def __post_init__(self):
        if self.kind not in DISTRIBUTION_KINDS:
            raise ValueError(
                f"unknown distribution kind {self.kind!r}; expected one of {DISTRIBUTION_KINDS}"
            )


def _generator(seed: Seed) -> np.random.Generator:
    key = np.array([seed.master, seed.stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _gaussians(gen: np.random.Generator, count: int) -> np.ndarray:
    """Standard normals by Box-Muller; u1 is shifted into (0, 1] for the log."""
    pairs = (count + 1) // 2
    u1 = 1.0 - gen.random(pairs)
    u2 = gen.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(2.0 * np.pi * u2)
    z[1::2] = radius * np.sin(2.0 * np.pi * u2)
    return z[:count]


def sample_gaussians(seed: Seed, count: int) -> np.ndarray:
    """count i.i.d. N(0, 1) draws from the given stream."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    return _gaussians(_generator(seed), count)


def sample_matrix(seed: Seed, rows: int, cols: int, spec: DistributionSpec) -> np.ndarray:
    """rows x cols matrix with i.i.d. entries (columns, for sphere_uniform).

    real_gaussian_unit     N(0, 1) entries
    complex_gaussian_half  (g1 + i g2) / sqrt(2), unit-variance complex entries
    rademacher             +1 or -1 with equal probability
    sphere_uniform         columns drawn independently, uniform on the sphere
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    gen = _generator(seed)
    if spec.kind == REAL_GAUSSIAN:
        return _gaussians(gen, rows * cols).reshape(rows, cols)
    if spec.kind == COMPLEX_GAUSSIAN:
        g = _gaussians(gen, 2 * rows * cols)
        half = rows * cols
        return ((g[:half] + 1j * g[half:]) / np.sqrt(2.0)).reshape(rows, cols)
    if spec.kind == RADEMACHER:
        bits = gen.integers(0, 2, size=rows * cols)
        return (2.0 * bits - 1.0).reshape(rows, cols)
    g = _gaussians(gen, rows * cols).reshape(rows, cols)
    norms = np.sqrt(np.sum(g * g, axis=0))
    if np.any(norms == 0.0):
        raise FloatingPointError("degenerate all-zero column while sampling the sphere")
    return g / norms


def sample_orthogonal(seed: Seed, n: int) -> np.ndarray:
    """Haar-distributed orthogonal n x n matrix.

    QR of a Gaussian matrix with the R diagonal sign fixed, which is what
    makes the factor Haar rather than merely orthogonal.
    """
    if n < 1:
        raise ValueError("n must be positive")
    g = sample_gaussians(seed, n * n).reshape(n, n)
    q, r = np.linalg.qr(g)
    signs = np.where(np.diagonal(r) < 0.0, -1.0, 1.0)
    return q * signs
