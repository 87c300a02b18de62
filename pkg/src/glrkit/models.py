"""Concrete likelihood models: binomial counts, the difference of two
binomial proportions with the baseline rate profiled out, and a paired
bivariate-normal model for crossover measurements with profiles for the mean
difference and the standard-deviation ratio.

Likelihoods drop data-dependent combinatorial constants (the normal density
keeps its 2-pi factors); ratios of suprema are unaffected either way.  With
degenerate binomial data (x = 0 or x = n) the maximizer sits on the boundary
of [0, 1]; suprema over regions remain well defined through closures, and the
ratio of a boundary point against its complement can then equal 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np

from .evidence import LikelihoodModel
from .optimize import DEFAULT_CONFIG, OptimizerConfig, maximize_1d, maximize_box
from .regions import Parameter, ParameterSpace

__all__ = [
    "BinomialData",
    "TwoBinomialData",
    "BivariateNormalParams",
    "PairedSample",
    "binomial_log_lik",
    "binomial_model",
    "two_binomial_profile_log_lik",
    "two_binomial_model",
    "bivnorm_log_lik",
    "mean_diff_profile_log_lik",
    "sd_ratio_profile_log_lik",
    "mean_diff_model",
    "sd_ratio_model",
    "generate_paired_sample",
    "load_paired_csv",
]


@dataclass(frozen=True)
class BinomialData:
    """Success count out of a fixed number of trials."""

    x: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one trial, got n={self.n}")
        if not 0 <= self.x <= self.n:
            raise ValueError(f"successes x={self.x} outside [0, {self.n}]")


@dataclass(frozen=True)
class TwoBinomialData:
    """Two independent binomial groups; the quantity of interest is the
    difference of success rates delta = p1 - p2, with p2 the nuisance."""

    x1: int
    n1: int
    x2: int
    n2: int

    def __post_init__(self) -> None:
        BinomialData(self.x1, self.n1)
        BinomialData(self.x2, self.n2)

    @property
    def delta_hat(self) -> float:
        return self.x1 / self.n1 - self.x2 / self.n2


@dataclass(frozen=True)
class BivariateNormalParams:
    """Means, standard deviations, and correlation of a bivariate normal."""

    mu_t: float
    mu_r: float
    sigma_t: float
    sigma_r: float
    rho: float

    def __post_init__(self) -> None:
        if not (self.sigma_t > 0 and self.sigma_r > 0):
            raise ValueError("standard deviations must be positive")
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"correlation must be in (-1, 1), got {self.rho}")


class PairedSample:
    """Paired measurements (y_t, y_r), one pair per subject.

    Needs at least 3 pairs so the sample covariance is non-degenerate.
    Sufficient statistics (means and centered scatter) are cached; they
    determine the bivariate-normal likelihood exactly.
    """

    def __init__(self, y_t: Iterable[float], y_r: Iterable[float]):
        self.y_t = np.asarray(list(y_t), dtype=float)
        self.y_r = np.asarray(list(y_r), dtype=float)
        if self.y_t.shape != self.y_r.shape or self.y_t.ndim != 1:
            raise ValueError("y_t and y_r must be equal-length 1-D sequences")
        if self.y_t.size < 3:
            raise ValueError(f"need at least 3 pairs, got {self.y_t.size}")
        if not (np.isfinite(self.y_t).all() and np.isfinite(self.y_r).all()):
            raise ValueError("measurements must be finite")

    @property
    def n(self) -> int:
        return int(self.y_t.size)

    @cached_property
    def mean_t(self) -> float:
        return float(self.y_t.mean())

    @cached_property
    def mean_r(self) -> float:
        return float(self.y_r.mean())

    @cached_property
    def scatter(self) -> tuple[float, float, float]:
        """Centered sums of squares and cross products (s_tt, s_rr, s_tr)."""
        dt = self.y_t - self.mean_t
        dr = self.y_r - self.mean_r
        return float(dt @ dt), float(dr @ dr), float(dt @ dr)

    @cached_property
    def sd_t(self) -> float:
        return math.sqrt(self.scatter[0] / self.n)

    @cached_property
    def sd_r(self) -> float:
        return math.sqrt(self.scatter[1] / self.n)

    @cached_property
    def corr(self) -> float:
        s_tt, s_rr, s_tr = self.scatter
        denom = math.sqrt(s_tt * s_rr)
        return s_tr / denom if denom > 0 else 0.0


# --- binomial ----------------------------------------------------------------


def binomial_log_lik(data: BinomialData, theta: float) -> float:
    """x log(theta) + (n - x) log(1 - theta), with 0 * log 0 taken as 0."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta={theta} outside [0, 1]")
    out = 0.0
    if data.x > 0:
        out += -math.inf if theta == 0.0 else data.x * math.log(theta)
    if data.n - data.x > 0:
        out += -math.inf if theta == 1.0 else (data.n - data.x) * math.log(1.0 - theta)
    return out


def binomial_model(data: BinomialData) -> LikelihoodModel:
    space = ParameterSpace.from_bounds(theta=(0.0, 1.0))
    return LikelihoodModel(
        space=space,
        log_lik=lambda p: binomial_log_lik(data, p["theta"]),
        search_bounds={"theta": (0.0, 1.0)},
        interest="theta",
        name=f"binomial(x={data.x}, n={data.n})",
    )


# --- difference of two binomial proportions ----------------------------------


def two_binomial_profile_log_lik(
    data: TwoBinomialData,
    delta: float,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> float:
    """Joint log-likelihood at rate difference delta, maximized over the
    baseline rate p2 on its feasible interval [max(0, -delta), min(1, 1-delta)].

    The inner objective is concave in p2 (sum of two concave binomial terms),
    so the interval search is reliable.
    """
    if not -1.0 <= delta <= 1.0:
        raise ValueError(f"delta={delta} outside [-1, 1]")
    lo = max(0.0, -delta)
    hi = min(1.0, 1.0 - delta)

    def joint(p2: float) -> float:
        p1 = min(1.0, max(0.0, p2 + delta))
        return binomial_log_lik(
            BinomialData(data.x1, data.n1), p1
        ) + binomial_log_lik(BinomialData(data.x2, data.n2), p2)

    return maximize_1d(joint, lo, hi, cfg).max_value


def two_binomial_model(
    data: TwoBinomialData,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> LikelihoodModel:
    space = ParameterSpace.from_bounds(delta=(-1.0, 1.0))
    return LikelihoodModel(
        space=space,
        log_lik=lambda p: two_binomial_profile_log_lik(data, p["delta"], cfg),
        search_bounds={"delta": (-1.0, 1.0)},
        interest="delta",
        name=(
            f"two-binomial(x1={data.x1}, n1={data.n1}, "
            f"x2={data.x2}, n2={data.n2})"
        ),
    )


# --- paired bivariate normal --------------------------------------------------

_LOG_2PI = math.log(2.0 * math.pi)


def bivnorm_log_lik(sample: PairedSample, params: BivariateNormalParams) -> float:
    """Exact bivariate normal log-density summed over the pairs."""
    st2 = params.sigma_t**2
    sr2 = params.sigma_r**2
    cov = params.rho * params.sigma_t * params.sigma_r
    det = st2 * sr2 - cov * cov
    if det <= 0:
        raise ValueError("covariance matrix is singular")
    dt = sample.y_t - params.mu_t
    dr = sample.y_r - params.mu_r
    quad = (sr2 * dt * dt - 2.0 * cov * dt * dr + st2 * dr * dr) / det
    return float(-sample.n * _LOG_2PI - 0.5 * sample.n * math.log(det)
                 - 0.5 * quad.sum())


def _log_lik_from_stats(
    sample: PairedSample,
    mu_t: float,
    mu_r: float,
    var_t: float,
    var_r: float,
    cov: float,
) -> float:
    """Same value as :func:`bivnorm_log_lik` computed from the cached
    sufficient statistics in O(1); -inf for a non-positive-definite matrix."""
    det = var_t * var_r - cov * cov
    if det <= 0 or var_t <= 0 or var_r <= 0:
        return -math.inf
    s_tt, s_rr, s_tr = sample.scatter
    a = var_r / det
    b = -cov / det
    c = var_t / det
    quad = a * s_tt + 2.0 * b * s_tr + c * s_rr
    et = sample.mean_t - mu_t
    er = sample.mean_r - mu_r
    quad += sample.n * (a * et * et + 2.0 * b * et * er + c * er * er)
    return -sample.n * _LOG_2PI - 0.5 * sample.n * math.log(det) - 0.5 * quad


def _profile_config(cfg: OptimizerConfig) -> OptimizerConfig:
    # Simplex runs need a larger iteration budget than interval searches but
    # converge from few starts in the stabilized coordinates; the moment seed
    # already lands near the optimum.
    return replace(
        cfg,
        max_iters=max(cfg.max_iters, 2000),
        multistart_count=min(cfg.multistart_count, 3),
    )


def mean_diff_profile_log_lik(
    sample: PairedSample,
    gamma: float,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> float:
    """Log-likelihood at mean difference mu_t - mu_r = gamma, maximized over
    the remaining parameters (mu_r and the covariance) numerically.

    The search runs in stabilized coordinates (mu_r, log sigma_t,
    log sigma_r, atanh rho) by bounded simplex multistart.
    """
    if not math.isfinite(gamma):
        raise ValueError(f"gamma must be finite, got {gamma}")
    d = sample.y_t - sample.y_r
    d_bar = float(d.mean())
    sd_d = float(d.std())
    if sd_d <= 1e-12 * max(1.0, abs(d_bar)):
        raise ValueError("differences are constant; profile is degenerate")
    off = abs(gamma - d_bar)
    sd_t = max(sample.sd_t, 1e-12)
    sd_r = max(sample.sd_r, 1e-12)

    mu_half = 10.0 * sd_r + off * (sd_r / sd_d + 1.0)
    log_hi = math.log(sd_t + sd_r + off) + 3.0
    log_lo = math.log(min(sd_t, sd_r)) - 6.0
    bounds = [
        (sample.mean_r - mu_half, sample.mean_r + mu_half),
        (log_lo, log_hi),
        (log_lo, log_hi),
        (-7.0, 7.0),
    ]

    def f(u) -> float:
        mu_r = u[0]
        st = math.exp(u[1])
        sr = math.exp(u[2])
        rho = math.tanh(u[3])
        return _log_lik_from_stats(
            sample, mu_r + gamma, mu_r, st * st, sr * sr, rho * st * sr
        )

    seeds = [_mean_diff_seed(sample, gamma, bounds)]
    res = maximize_box(f, bounds, _profile_config(cfg), extra_seeds=seeds)
    return res.max_value


def _mean_diff_seed(sample, gamma, bounds) -> list[float]:
    """Moment-based start: project the sample means onto the constraint line
    mu_t = mu_r + gamma in the metric of the sample covariance."""
    s_tt, s_rr, s_tr = (s / sample.n for s in sample.scatter)
    det = s_tt * s_rr - s_tr * s_tr
    if det <= 1e-12 * max(s_tt * s_rr, 1e-300):
        mu_r = 0.5 * ((sample.mean_t - gamma) + sample.mean_r)
    else:
        # minimize (m - mu)' Sigma^-1 (m - mu) over mu = (mu_r + gamma, mu_r)
        a = s_rr / det
        b = -s_tr / det
        c = s_tt / det
        rt = sample.mean_t - gamma
        rr = sample.mean_r
        denom = a + 2.0 * b + c
        mu_r = (a * rt + b * (rt + rr) + c * rr) / denom if denom > 0 else rr
    off = gamma - (sample.mean_t - sample.mean_r)
    st = math.sqrt(max(s_tt, 1e-24) + 0.25 * off * off)
    sr = math.sqrt(max(s_rr, 1e-24) + 0.25 * off * off)
    rho = min(0.999, max(-0.999, sample.corr))
    return [mu_r, math.log(st), math.log(sr), math.atanh(rho)]


def sd_ratio_profile_log_lik(
    sample: PairedSample,
    ratio: float,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> float:
    """Log-likelihood at sigma_t / sigma_r = ratio, maximized over the rest.

    The means are quadratic in the objective for any fixed covariance, so
    they maximize at the sample means; the remaining search is over
    (log sigma_r, atanh rho).
    """
    if not (math.isfinite(ratio) and ratio > 0):
        return -math.inf
    sd_t = max(sample.sd_t, 1e-12)
    sd_r = max(sample.sd_r, 1e-12)
    anchors = (sd_r, sd_t / ratio)
    bounds = [
        (math.log(min(anchors)) - 4.0, math.log(max(anchors)) + 4.0),
        (-7.0, 7.0),
    ]

    def f(v) -> float:
        sr = math.exp(v[0])
        st = ratio * sr
        rho = math.tanh(v[1])
        return _log_lik_from_stats(
            sample, sample.mean_t, sample.mean_r, st * st, sr * sr, rho * st * sr
        )

    z = math.atanh(min(0.999, max(-0.999, sample.corr)))
    seeds = [[math.log(anchors[0]), z], [math.log(anchors[1]), z]]
    res = maximize_box(f, bounds, _profile_config(cfg), extra_seeds=seeds)
    return res.max_value


def mean_diff_model(
    sample: PairedSample,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> LikelihoodModel:
    """Scalar model in gamma = mu_t - mu_r with everything else profiled out."""
    d = sample.y_t - sample.y_r
    d_bar = float(d.mean())
    sd_d = float(d.std())
    if sd_d <= 1e-12 * max(1.0, abs(d_bar)):
        raise ValueError("differences are constant; mean-diff profile degenerate")
    half = 20.0 * sd_d
    space = ParameterSpace((Parameter("gamma"),))
    return LikelihoodModel(
        space=space,
        log_lik=lambda p: mean_diff_profile_log_lik(sample, p["gamma"], cfg),
        search_bounds={"gamma": (d_bar - half, d_bar + half)},
        interest="gamma",
        name=f"paired-normal mean-diff (n={sample.n})",
    )


def sd_ratio_model(
    sample: PairedSample,
    cfg: OptimizerConfig = DEFAULT_CONFIG,
) -> LikelihoodModel:
    """Scalar model in the ratio sigma_t / sigma_r, nuisances profiled out."""
    if sample.sd_t <= 0 or sample.sd_r <= 0:
        raise ValueError("zero sample variance; sd-ratio profile degenerate")
    ratio_hat = sample.sd_t / sample.sd_r
    space = ParameterSpace((Parameter("ratio", 0.0, math.inf, lower_closed=False),))
    return LikelihoodModel(
        space=space,
        log_lik=lambda p: sd_ratio_profile_log_lik(sample, p["ratio"], cfg),
        search_bounds={"ratio": (ratio_hat / 50.0, ratio_hat * 50.0)},
        interest="ratio",
        name=f"paired-normal sd-ratio (n={sample.n})",
    )


# --- data ingestion and synthesis ---------------------------------------------


def generate_paired_sample(
    n: int,
    params: BivariateNormalParams,
    seed: int = 0,
) -> PairedSample:
    """Draw n correlated pairs; deterministic for a given seed."""
    if n < 3:
        raise ValueError(f"need at least 3 pairs, got {n}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, 2))
    y_t = params.mu_t + params.sigma_t * z[:, 0]
    y_r = params.mu_r + params.sigma_r * (
        params.rho * z[:, 0] + math.sqrt(1.0 - params.rho**2) * z[:, 1]
    )
    return PairedSample(y_t, y_r)


def load_paired_csv(stream: TextIO) -> PairedSample:
    """Read a paired sample from CSV with the exact header ``y_t,y_r``."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty CSV") from None
    if [h.strip() for h in header] != ["y_t", "y_r"]:
        raise ValueError(f"expected header 'y_t,y_r', got {','.join(header)!r}")
    y_t: list[float] = []
    y_r: list[float] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise ValueError(f"line {lineno}: expected two columns, got {len(row)}")
        try:
            y_t.append(float(row[0]))
            y_r.append(float(row[1]))
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric value in {row}") from None
    return PairedSample(y_t, y_r)
