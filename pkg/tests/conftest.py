"""Shared helpers: vectorized binomial log-likelihood grids used as
independent oracles, and random instance generators for property sweeps."""

import numpy as np


def binomial_grid_loglik(x: int, n: int, thetas: np.ndarray) -> np.ndarray:
    """x log(theta) + (n-x) log(1-theta) on a grid, with 0 log 0 = 0."""
    thetas = np.asarray(thetas, dtype=float)
    out = np.zeros_like(thetas)
    with np.errstate(divide="ignore", invalid="ignore"):
        if x > 0:
            out = out + x * np.log(thetas)
        if n - x > 0:
            out = out + (n - x) * np.log(1.0 - thetas)
    return np.where(np.isnan(out), -np.inf, out)


def random_binomial_instance(rng: np.random.Generator, n_max: int = 50):
    n = int(rng.integers(1, n_max + 1))
    x = int(rng.integers(0, n + 1))
    return x, n


def random_subinterval(rng: np.random.Generator, lo=0.0, hi=1.0, min_width=0.02):
    a, b = np.sort(rng.uniform(lo, hi, size=2))
    if b - a < min_width:
        b = min(hi, a + min_width)
    return float(a), float(b)
