#!/usr/bin/env python3
"""Desk-scale limit experiments: degree CLT, diameter scaling, max degree.

Runs the three Monte-Carlo reports at configurable sizes and draw counts and
prints one JSON document per experiment.  Intended for eyeballing the limit
behaviour beyond the exact enumeration caps; the acceptance suite pins the
same quantities at fixed seeds.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from sgtrees import (
    RngStream,
    SamplingError,
    StatsError,
    WeightSequence,
    degree_clt_report,
    diameter_tail_report,
    load_weights,
    max_degree_report,
    offspring_distribution,
)


@dataclass
class LimitCheckConfig:
    weights: WeightSequence
    seed: int = 0
    clt_n: int = 10 ** 4
    clt_batches: int = 400
    diameter_sizes: tuple = (4096, 16384)
    diameter_draws: int = 10 ** 4
    max_degree_sizes: tuple = (10 ** 3, 10 ** 4)
    max_degree_draws: int = 201


def parse_args(argv) -> LimitCheckConfig:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--weights", type=str, default=None, help="weights JSON; default all-ones")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--clt-n", type=int, default=10 ** 4)
    ap.add_argument("--clt-batches", type=int, default=400)
    ap.add_argument("--diameter-sizes", type=int, nargs=2, default=(4096, 16384))
    ap.add_argument("--diameter-draws", type=int, default=10 ** 4)
    ap.add_argument("--max-degree-sizes", type=int, nargs=2, default=(10 ** 3, 10 ** 4))
    ap.add_argument("--max-degree-draws", type=int, default=201)
    args = ap.parse_args(argv)
    w = load_weights(args.weights) if args.weights else WeightSequence.geometric(Fraction(1))
    return LimitCheckConfig(
        weights=w,
        seed=args.seed,
        clt_n=args.clt_n,
        clt_batches=args.clt_batches,
        diameter_sizes=tuple(args.diameter_sizes),
        diameter_draws=args.diameter_draws,
        max_degree_sizes=tuple(args.max_degree_sizes),
        max_degree_draws=args.max_degree_draws,
    )


def run_degree_clt(cfg: LimitCheckConfig) -> dict:
    rep = degree_clt_report(cfg.weights, cfg.clt_n, cfg.clt_batches, RngStream(cfg.seed, 7))
    leaf_target = float(offspring_distribution(cfg.weights).pi(0))
    leaf_dev = float(np.abs(np.array(rep.leaf_shares) - leaf_target).mean())
    return {
        "experiment": "degree-clt",
        "n": rep.n,
        "batches": rep.samples,
        "d_values": list(rep.d_values),
        "mean_abs_leaf_share_deviation": leaf_dev,
        "anderson_darling": [float(s) for s in rep.ad_statistics],
        "anderson_darling_critical_1pct": rep.ad_critical_1pct,
        "normaltest_p": [float(p) for p in rep.normaltest_p],
    }


def run_diameter(cfg: LimitCheckConfig) -> dict:
    rows = []
    for i, n in enumerate(cfg.diameter_sizes):
        rep = diameter_tail_report(cfg.weights, n, cfg.diameter_draws, RngStream(cfg.seed, 1 + i))
        rows.append(
            {
                "n": rep.n,
                "samples": rep.samples,
                "mean_diameter": rep.mean_diameter,
                "mean_over_sqrt_n": rep.mean_over_sqrt_n,
                "tail_slope": rep.slope,
                "tail_r_squared": rep.r_squared,
            }
        )
    out = {"experiment": "diameter-scaling", "rows": rows}
    if len(rows) == 2 and rows[0]["mean_diameter"] > 0:
        out["mean_ratio"] = rows[1]["mean_diameter"] / rows[0]["mean_diameter"]
    return out


def run_max_degree(cfg: LimitCheckConfig) -> dict:
    xi = offspring_distribution(cfg.weights)
    rows = []
    mean_offspring = float(xi.mu)
    for i, n in enumerate(cfg.max_degree_sizes):
        rep = max_degree_report(cfg.weights, n, cfg.max_degree_draws, RngStream(cfg.seed, 9 + i))
        rows.append(
            {
                "n": n,
                "median_max_share": rep.median_max_ratio,
                "target_share": rep.target_ratio,
                "median_second_to_max": rep.median_second_to_max,
            }
        )
    return {"experiment": "max-degree", "mean_offspring": mean_offspring, "rows": rows}


def main(argv=None) -> int:
    cfg = parse_args(argv)
    critical = offspring_distribution(cfg.weights).criticality == "critical"
    experiments = (
        (run_degree_clt, run_diameter) if critical else (run_max_degree,)
    )
    failed = False
    for runner in experiments:
        try:
            print(json.dumps(runner(cfg)))
        except (SamplingError, StatsError) as exc:
            print(json.dumps({"experiment": runner.__name__, "error": str(exc)}))
            failed = True
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
