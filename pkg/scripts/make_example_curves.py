#!/usr/bin/env python3
"""Reproduce the worked examples: headline likelihood ratios plus the four
normalized-likelihood curves as CSV files ready for plotting.

Writes into --out-dir:
  success_rate_curve.csv        binomial 9/17, success probability
  rate_difference_curve.csv     83/88 vs 69/76, difference of rates
  mean_diff_curve.csv           synthetic paired sample, mean difference
  sd_ratio_curve.csv            synthetic paired sample, sd ratio

The paired-sample curves use a synthetic crossover-style dataset from the
built-in generator (the third worked example's raw measurements are not
distributed with this package).
"""

import argparse
import json
import math
import pathlib

import numpy as np

import glrkit as gk
from glrkit.regions import parse_region


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="example_curves")
    parser.add_argument("--pairs", type=int, default=25,
                        help="synthetic paired-sample size")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = {}

    # single binomial: 9 successes of 17 against the 0.2 reference rate
    binom = gk.binomial_model(gk.BinomialData(9, 17))
    above = parse_region("theta > 0.2", binom.space)
    rep = gk.evidence_vs_complement(binom, above)
    summary["success_rate"] = {
        "glr_above_0.2_vs_complement": rep.glr,
        "strength": rep.strength,
    }
    curve = gk.profile_curve(binom, np.linspace(0.0, 1.0, 1001))
    with open(out / "success_rate_curve.csv", "w") as fh:
        curve.write_csv(fh)

    # difference of two response rates with a 0.1 margin
    two = gk.two_binomial_model(gk.TwoBinomialData(83, 88, 69, 76))
    noninf = gk.evidence_vs_complement(two, parse_region("delta > -0.1", two.space))
    superior = gk.evidence_vs_complement(two, parse_region("delta > 0", two.space))
    summary["rate_difference"] = {
        "glr_noninferiority": noninf.glr,
        "glr_superiority": superior.glr,
    }
    curve = gk.profile_curve(two, np.linspace(-0.2, 0.2, 801))
    with open(out / "rate_difference_curve.csv", "w") as fh:
        curve.write_csv(fh)

    # synthetic paired log-measurements: equivalence band on the mean
    # difference and on the sd ratio
    params = gk.BivariateNormalParams(mu_t=0.01, mu_r=0.0, sigma_t=0.10,
                                      sigma_r=0.11, rho=0.6)
    sample = gk.generate_paired_sample(args.pairs, params, seed=args.seed)
    cfg = gk.OptimizerConfig(abs_tol_x=1e-8, abs_tol_f=1e-10, multistart_count=2)

    mean_model = gk.mean_diff_model(sample, cfg)
    band = parse_region("abs(gamma - 0) < 0.223", mean_model.space)
    rep = gk.evidence_vs_complement(mean_model, band, cfg)
    summary["mean_difference"] = {
        "glr_band_vs_complement": rep.glr,
        "strength": rep.strength,
    }
    d = sample.y_t - sample.y_r
    half = 4.0 * float(d.std(ddof=1)) / math.sqrt(sample.n)
    grid = np.linspace(float(d.mean()) - half, float(d.mean()) + half, 201)
    curve = gk.profile_curve(mean_model, grid, cfg)
    with open(out / "mean_diff_curve.csv", "w") as fh:
        curve.write_csv(fh)

    ratio_model = gk.sd_ratio_model(sample, cfg)
    r_hat = sample.sd_t / sample.sd_r
    band = parse_region("ratio > 0.8 and ratio < 1.25", ratio_model.space)
    rep = gk.evidence_vs_complement(ratio_model, band, cfg)
    summary["sd_ratio"] = {
        "glr_band_vs_complement": rep.glr,
        "strength": rep.strength,
    }
    grid = np.exp(np.linspace(math.log(r_hat / 2), math.log(r_hat * 2), 201))
    curve = gk.profile_curve(ratio_model, grid, cfg)
    with open(out / "sd_ratio_curve.csv", "w") as fh:
        curve.write_csv(fh)

    print(json.dumps(summary, indent=2))
    print(f"curves written to {out}/", flush=True)


if __name__ == "__main__":
    main()
