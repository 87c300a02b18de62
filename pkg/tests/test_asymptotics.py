"""Limit CDFs, KS distances, and the Monte Carlo machinery."""

import math

import numpy as np
import pytest
from scipy.stats import chi2

import glrkit as gk
from glrkit.asymptotics import (
    EmpiricalDistribution,
    LimitSpec,
    SimulationConfig,
    limit_cdf,
)


class TestLimitCdf:
    def test_signed_mixture_at_zero(self):
        assert limit_cdf(LimitSpec.signed_chisq_mixture(), 0.0) == 0.5

    def test_neg_chisq_at_zero(self):
        assert limit_cdf(LimitSpec.neg_chisq(1), 0.0) == 1.0

    def test_signed_mixture_at_upper_quantile(self):
        x = chi2.ppf(0.95, 1)
        assert limit_cdf(LimitSpec.signed_chisq_mixture(), x) == pytest.approx(
            0.975, abs=1e-12
        )

    def test_signed_mixture_symmetric(self):
        spec = LimitSpec.signed_chisq_mixture()
        for x in (0.3, 1.7, 4.2):
            assert limit_cdf(spec, -x) == pytest.approx(1.0 - limit_cdf(spec, x),
                                                        abs=1e-12)

    def test_unequal_weights(self):
        spec = LimitSpec.signed_chisq_mixture(weights=(0.25, 0.75))
        assert limit_cdf(spec, 0.0) == 0.25
        assert limit_cdf(spec, 1e9) == pytest.approx(1.0)

    def test_divergent(self):
        assert limit_cdf(LimitSpec.divergent("+inf"), 1e12) == 0.0
        assert limit_cdf(LimitSpec.divergent("-inf"), -1e12) == 1.0

    def test_nondecreasing_right_continuous_with_limits(self):
        grid = np.linspace(-80.0, 80.0, 20001)
        for spec in (
            LimitSpec.signed_chisq_mixture(),
            LimitSpec.signed_chisq_mixture(df=3, weights=(0.9, 0.1)),
            LimitSpec.neg_chisq(2),
        ):
            f = limit_cdf(spec, grid)
            assert np.all(np.diff(f) >= -1e-15)
            assert f[0] == pytest.approx(0.0, abs=1e-9)
            assert f[-1] == pytest.approx(1.0, abs=1e-9)
            # right continuity at the kink
            assert limit_cdf(spec, 0.0) == pytest.approx(
                limit_cdf(spec, 1e-13), abs=1e-6
            )

    def test_validation(self):
        with pytest.raises(ValueError):
            LimitSpec("chisq")
        with pytest.raises(ValueError):
            LimitSpec.signed_chisq_mixture(weights=(0.7, 0.7))
        with pytest.raises(ValueError):
            LimitSpec.neg_chisq(0)
        with pytest.raises(ValueError):
            LimitSpec.divergent("sideways")


class TestKsDistance:
    def test_sample_drawn_from_the_limit_is_close(self):
        # inverse-CDF sampling from the signed mixture
        rng = np.random.default_rng(123)
        u = rng.uniform(size=100_000)
        x = np.where(
            u >= 0.5, chi2.ppf(2 * (u - 0.5), 1), -chi2.ppf(1 - 2 * u, 1)
        )
        emp = EmpiricalDistribution(np.sort(x))
        assert gk.ks_distance(emp, LimitSpec.signed_chisq_mixture()) < 0.01

    def test_constant_sample_far_from_continuous_limit(self):
        emp = EmpiricalDistribution(np.zeros(1000))
        assert gk.ks_distance(emp, LimitSpec.signed_chisq_mixture()) >= 0.5

    def test_requires_enough_replications(self):
        emp = EmpiricalDistribution(np.zeros(99))
        with pytest.raises(ValueError):
            gk.ks_distance(emp, LimitSpec.neg_chisq(1))


class TestSimulate:
    def test_deterministic_given_config(self):
        cfg, _ = gk.boundary_scenario(n=200, reps=300, seed=9)
        a = gk.simulate_glr(cfg)
        b = gk.simulate_glr(cfg)
        assert np.array_equal(a.values, b.values)

    def test_boundary_small_run_is_roughly_balanced(self):
        cfg, limit = gk.boundary_scenario(n=400, reps=500, seed=2)
        emp = gk.simulate_glr(cfg)
        assert 0.35 < emp.fraction_positive < 0.65
        assert gk.ks_distance(emp, limit) < 0.12

    def test_point_null_values_never_positive(self):
        cfg, _ = gk.point_null_scenario(theta0=0.4, n=300, reps=400, seed=5)
        emp = gk.simulate_glr(cfg)
        assert np.all(emp.values <= 1e-12)

    def test_quantiles_and_size(self):
        cfg, _ = gk.boundary_scenario(n=100, reps=250, seed=1)
        emp = gk.simulate_glr(cfg)
        assert emp.size == 250
        q = emp.quantiles()
        assert set(q) == {"q05", "q25", "q50", "q75", "q95"}
        assert q["q05"] <= q["q50"] <= q["q95"]

    def test_multiple_sizes_need_explicit_choice(self):
        cfg = gk.consistency_scenario(0.1, reps=50)
        with pytest.raises(ValueError):
            gk.simulate_glr(cfg)
        emp = gk.simulate_glr(cfg, n=50)
        assert emp.size == 50

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SimulationConfig(theta0=1.5, h1="theta <= 0.2", h2=None,
                             sample_sizes=(10,), reps=10, seed=0)
        with pytest.raises(ValueError):
            SimulationConfig(theta0=0.5, h1="theta <= 0.2", h2=None,
                             sample_sizes=(), reps=10, seed=0)
        with pytest.raises(ValueError):
            SimulationConfig(theta0=0.5, h1="theta <= 0.2", h2=None,
                             sample_sizes=(10,), reps=10, seed=0,
                             family="poisson")


class TestConsistencyTrend:
    def test_true_value_inside_h1_pushes_ratios_up(self):
        report = gk.consistency_trend(
            gk.consistency_scenario(0.1, sizes=(50, 200, 800), reps=300, seed=4)
        )
        assert report.direction == "toward_h1"
        assert report.strictly_monotone
        assert report.medians[0] < report.medians[1] < report.medians[2]

    def test_true_value_outside_h1_pushes_ratios_down(self):
        report = gk.consistency_trend(
            gk.consistency_scenario(0.5, sizes=(50, 200, 800), reps=300, seed=4)
        )
        assert report.direction == "toward_h2"
        assert report.strictly_monotone

    def test_identical_hypotheses_are_flat_zero(self):
        cfg = SimulationConfig(
            theta0=0.3,
            h1="theta <= 0.4",
            h2="theta <= 0.4",
            sample_sizes=(20, 50),
            reps=60,
            seed=3,
        )
        report = gk.consistency_trend(cfg)
        assert report.medians == (0.0, 0.0)
        assert report.direction == "flat"
        assert not report.strictly_monotone
