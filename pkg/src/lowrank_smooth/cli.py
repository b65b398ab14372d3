"""Command line entry point.

Exit codes: 0 on success, 2 for configuration problems (bad flags, bad
config file, unknown experiment), 3 for numerical failures.
"""
from __future__ import annotations

import argparse
import sys

from .ballprob import AccuracyError
from .cg import NotSpdError
from .dense import SingularMatrixError
from .experiments import ExperimentConfig, registered_experiments, run_experiment
from .operators import DensifyCapError
from .rng import (
    COMPLEX_GAUSSIAN,
    RADEMACHER,
    REAL_GAUSSIAN,
    SPHERE,
    DistributionSpec,
    Seed,
)
from .simplex import InfeasibleStartError

_DIST_NAMES = {
    "gaussian": REAL_GAUSSIAN,
    "complex": COMPLEX_GAUSSIAN,
    "rademacher": RADEMACHER,
    "sphere": SPHERE,
}

_CONFIG_KEYS = ("n", "n_range", "k", "dist", "sigma", "trials", "seed", "out")


class ConfigError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lowrank-smooth",
        description="Run a named experiment and write its CSV output.",
        epilog="experiments: " + ", ".join(registered_experiments()),
    )
    p.add_argument("experiment", help="registered experiment name")
    sizes = p.add_mutually_exclusive_group()
    sizes.add_argument("--n", nargs="+", type=int, help="explicit list of sizes")
    sizes.add_argument("--n-range", help="sizes as a:b:step, inclusive of b")
    p.add_argument("--k", type=int, help="perturbation rank")
    p.add_argument("--dist", choices=sorted(_DIST_NAMES), help="entry distribution")
    p.add_argument("--sigma", type=float, help="noise scale")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    p.add_argument("--seed", type=int, help="master seed, unsigned 64-bit")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--config", help="key=value file; command line flags win")
    return p


def _parse_n_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"expected a:b:step, got {text!r}")
    try:
        a, b, step = (int(part) for part in parts)
    except ValueError:
        raise ConfigError(f"non-integer bound in range {text!r}") from None
    if step < 1:
        raise ConfigError("range step must be positive")
    if b < a:
        raise ConfigError("range end must not be below its start")
    return tuple(range(a, b + 1, step))


def _read_config(path: str) -> dict:
    options = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if not value:
                raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
            options[key] = value
    return options


def _build_config(args) -> ExperimentConfig:
    file_opts = _read_config(args.config) if args.config else {}

    def pick(flag_value, key):
        if flag_value is not None:
            return flag_value
        return file_opts.get(key)

    if "n" in file_opts and "n_range" in file_opts:
        raise ConfigError("config file sets both n and n_range")
    try:
        if args.n is not None:
            n_values = tuple(args.n)
        elif args.n_range is not None:
            n_values = _parse_n_range(args.n_range)
        elif "n" in file_opts:
            n_values = tuple(int(tok) for tok in file_opts["n"].replace(",", " ").split())
        elif "n_range" in file_opts:
            n_values = _parse_n_range(file_opts["n_range"])
        else:
            n_values = ()

        k = pick(args.k, "k")
        dist_name = pick(args.dist, "dist")
        sigma = pick(args.sigma, "sigma")
        trials = pick(args.trials, "trials")
        seed = pick(args.seed, "seed")
        out = pick(args.out, "out")

        if dist_name is not None and dist_name not in _DIST_NAMES:
            raise ConfigError(f"unknown distribution {dist_name!r}")
        cfg = ExperimentConfig(
            name=args.experiment,
            n_values=n_values,
            k=1 if k is None else int(k),
            dist=DistributionSpec(_DIST_NAMES[dist_name] if dist_name else REAL_GAUSSIAN),
            sigma=None if sigma is None else float(sigma),
            trials=None if trials is None else int(trials),
            seed=Seed(int(seed)) if seed is not None else Seed(0),
            out_path=out or "",
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _build_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        path = run_experiment(cfg)
    except (
        AccuracyError,
        NotSpdError,
        SingularMatrixError,
        InfeasibleStartError,
        DensifyCapError,
        FloatingPointError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
