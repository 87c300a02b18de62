#!/usr/bin/env python3
"""Full-size Monte Carlo checks of the limit behavior of 2 log GLR.

Runs three binomial scenarios and prints a JSON summary per run:
  boundary     true value on the hypothesis boundary -> signed chi-square mix
  point-null   point hypothesis at an interior value -> negative chi-square
  consistency  true value interior to one hypothesis -> divergence with n
"""

import argparse
import json

import glrkit as gk


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=20000)
    parser.add_argument("--n", type=int, default=2500)
    parser.add_argument("--seed", type=int, default=20240401)
    args = parser.parse_args()

    results = {}

    cfg, limit = gk.boundary_scenario(n=args.n, reps=args.reps, seed=args.seed)
    emp = gk.simulate_glr(cfg)
    results["boundary"] = {
        "config": cfg.to_json_dict(),
        "limit": limit.describe(),
        "ks_distance": gk.ks_distance(emp, limit),
        "fraction_positive": emp.fraction_positive,
        "quantiles": emp.quantiles(),
    }

    cfg, limit = gk.point_null_scenario(n=args.n, reps=args.reps,
                                        seed=args.seed + 1)
    emp = gk.simulate_glr(cfg)
    results["point_null"] = {
        "config": cfg.to_json_dict(),
        "limit": limit.describe(),
        "ks_distance": gk.ks_distance(emp, limit),
        "quantiles": emp.quantiles(),
    }

    for theta0 in (0.1, 0.5):
        trend = gk.consistency_trend(
            gk.consistency_scenario(theta0, reps=max(args.reps // 10, 100),
                                    seed=args.seed + 2)
        )
        results[f"consistency_theta0_{theta0}"] = trend.to_json_dict()

    print(json.dumps(results, indent=2))


if __name__ == "__main__":
    main()
