#!/usr/bin/env python3
"""Ring embedding sweep: greedy-revenue-with-fallback versus the plain
generic baseline on substrate rings of 20, 25 and 30 nodes."""

import argparse
from pathlib import Path

from pcvne.experiment import ExperimentConfig, run_experiment, write_csv
from pcvne.generators import RequestSpec, SubstrateSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--requests", type=int, default=100)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--revenue", choices=["unit", "proportional"], default="unit")
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for m in (20, 25, 30):
        cfg = ExperimentConfig(
            substrate=SubstrateSpec(n_nodes=m, topology="cycle",
                                    cpu_capacity=100, bw_capacity=100),
            requests=RequestSpec(shape="cycle", count=args.requests,
                                 length_range=(5, 10), demand_range=(1, 5),
                                 revenue_rule=args.revenue),
            algorithms=["gr", "generic"],
            trials=args.trials,
            seed=args.seed,
        )
        result = run_experiment(cfg)
        out = args.out_dir / f"ring_{m}.csv"
        with out.open("w") as fp:
            write_csv(result, fp)
        agg = result.aggregates()
        gr, ge = agg["gr"], agg["generic"]
        print(f"ring m={m}: GR AcR {gr['acceptance_ratio'][0]:.4f} "
              f"vs generic {ge['acceptance_ratio'][0]:.4f} | "
              f"revenue {gr['revenue'][0]:.1f} vs {ge['revenue'][0]:.1f} | "
              f"time {gr['wall_ms'][0]:.0f}ms vs {ge['wall_ms'][0]:.0f}ms -> {out}")


if __name__ == "__main__":
    main()
