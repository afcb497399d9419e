"""Run the intuition staffing (scenario1) and the zero-wait staffing (scenario2)
over a block of seeds and print the headline comparison next to the values
reported for the original study.

    python scripts/compare_scenarios.py --seeds 20
"""

import argparse
import statistics

from waterfallsim.metrics import ALL, summarize
from waterfallsim.model import run_scenario
from waterfallsim.scenario import load_scenario

# Single unpublished-seed realizations from the original study, for orientation only.
REPORTED = {
    "scenario1": {"makespan": 7522.174, "mean completion": 75.222, "implementation mean wait": 7.490, "delays": 133},
    "scenario2": {"makespan": 5754.000, "mean completion": 57.540, "implementation mean wait": 0.000, "delays": 0},
}


def headline(name, seed):
    s = summarize(run_scenario(load_scenario(name, [f"seed={seed}"])))
    return {
        "makespan": s.makespan,
        "mean completion": s.completion_stats[ALL].mean,
        "implementation mean wait": s.wait_stats["implementation", ALL].mean,
        "delays": s.delay_counts[ALL, ALL],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--first-seed", type=int, default=0)
    args = parser.parse_args()
    seeds = range(args.first_seed, args.first_seed + args.seeds)
    for name in ("scenario1", "scenario2"):
        rows = [headline(name, s) for s in seeds]
        print(f"{name} over {args.seeds} seeds")
        print(f"  {'metric':<26}{'mean':>10}{'min':>10}{'max':>10}{'reported':>10}")
        for key in rows[0]:
            vals = [r[key] for r in rows]
            print(
                f"  {key:<26}{statistics.fmean(vals):>10.3f}{min(vals):>10.3f}{max(vals):>10.3f}"
                f"{REPORTED[name][key]:>10.3f}"
            )
        print()


if __name__ == "__main__":
    main()
