#!/usr/bin/env python3
"""Compare the path pipeline against the generic baseline on random
substrates, at the nominal workload and at 2.5x CPU oversubscription where
the packing advantage shows."""

import argparse
from pathlib import Path

from pcvne.experiment import ExperimentConfig, run_experiment, write_csv
from pcvne.generators import RequestSpec, SubstrateSpec


def run(count, trials, seed, out_dir, revenue_rule):
    cfg = ExperimentConfig(
        substrate=SubstrateSpec(n_nodes=30, topology="random", n_edges=150,
                                cpu_capacity=100, bw_capacity=100),
        requests=RequestSpec(shape="path", count=count, length_range=(5, 10),
                             demand_range=(1, 5), revenue_rule=revenue_rule),
        algorithms=["pe", "generic"],
        trials=trials,
        seed=seed,
    )
    result = run_experiment(cfg)
    out = out_dir / f"trend_{revenue_rule}_{count}vnrs.csv"
    with out.open("w") as fp:
        write_csv(result, fp)
    agg = result.aggregates()
    pe, ge = agg["pe"], agg["generic"]
    print(f"{count:>4} VNRs ({revenue_rule}): "
          f"PE AcR {pe['acceptance_ratio'][0]:.4f}±{pe['acceptance_ratio'][1]:.4f} "
          f"vs generic {ge['acceptance_ratio'][0]:.4f}±{ge['acceptance_ratio'][1]:.4f} | "
          f"revenue {pe['revenue'][0]:.1f} vs {ge['revenue'][0]:.1f} | "
          f"time {pe['wall_ms'][0]:.0f}ms vs {ge['wall_ms'][0]:.0f}ms -> {out}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for count in (100, 300):
        for rule in ("unit", "proportional"):
            run(count, args.trials, args.seed, args.out_dir, rule)


if __name__ == "__main__":
    main()
