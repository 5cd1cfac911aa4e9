"""Measure how program diversity evolves over chain steps.

Runs a campaign with honest reference adapters and prints, per chain step,
the mean total gate count, mean number of distinct gate kinds, and mean
2-/3-gram entropy of the statement stream across all class members at that
step.  The same numbers land in metrics.csv when run through the CLI; this
script is the quick interactive view.

Usage:
    python3 scripts/run_diversity_trend.py [--seed N] [--programs N]
                                           [--iterations N]
"""

import argparse
import time

from qasmfuzz.engine import CampaignConfig, run_campaign
from qasmfuzz.triage import metrics_rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--programs", type=int, default=1000)
    ap.add_argument("--iterations", type=int, default=5)
    args = ap.parse_args()

    config = CampaignConfig(
        seed=args.seed, programs=args.programs, iterations=args.iterations
    )
    started = time.monotonic()
    result = run_campaign(config)
    rows = metrics_rows(result.classes)
    elapsed = time.monotonic() - started

    steps = sorted({r.step for r in rows})
    print(f"{args.programs} programs, {args.iterations} chain steps, "
          f"seed {args.seed} ({elapsed:.1f}s)")
    print(f"{'step':>4} {'mean_total':>11} {'mean_unique':>12} "
          f"{'mean_H2':>8} {'mean_H3':>8}")
    for step in steps:
        batch = [r for r in rows if r.step == step]
        total = sum(r.total_gates for r in batch) / len(batch)
        unique = sum(r.unique_gates for r in batch) / len(batch)
        h2 = sum(r.entropy2 for r in batch) / len(batch)
        h3 = sum(r.entropy3 for r in batch) / len(batch)
        print(f"{step:>4} {total:>11.2f} {unique:>12.2f} {h2:>8.4f} {h3:>8.4f}")


if __name__ == "__main__":
    main()
