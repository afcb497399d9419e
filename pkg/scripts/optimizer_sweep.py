"""Run the zero-wait search from the scenario1 staffing under many master
seeds and both growth modes; print runs used and final levels.

    python scripts/optimizer_sweep.py --seeds 10
"""

import argparse
import statistics

from waterfallsim.optimizer import MODES, OptimizerConfig, find_zero_wait
from waterfallsim.scenario import load_scenario

REPORTED_LEVELS = {"analysts": 15, "designers": 18, "programmers": 38, "testers": 49, "maintenance": 10}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=10)
    parser.add_argument("--scenario", default="scenario1")
    args = parser.parse_args()
    base = load_scenario(args.scenario)
    roles = list(base.capacities)
    print(f"{'mode':<14}{'seed':>6}{'runs':>6}  " + "".join(f"{r[:11]:>12}" for r in roles))
    for mode in MODES:
        runs = []
        for seed in range(args.seeds):
            result = find_zero_wait(base, OptimizerConfig(master_seed=seed, mode=mode))
            runs.append(result.runs_used)
            flag = "" if result.converged else "  (not converged)"
            print(f"{mode:<14}{seed:>6}{result.runs_used:>6}  " + "".join(f"{result.levels[r]:>12}" for r in roles) + flag)
        print(f"{mode:<14}{'mean':>6}{statistics.fmean(runs):>6.1f}")
    print(f"{'reported':<14}{'':>6}{40:>6}  " + "".join(f"{REPORTED_LEVELS.get(r, 0):>12}" for r in roles))


if __name__ == "__main__":
    main()
