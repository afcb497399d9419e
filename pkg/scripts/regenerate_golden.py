"""Rewrite the golden files under tests/golden/.

Only run this when a change to the draw streams or report layout is intended;
the tests treat these files as frozen.
"""

import json
import sys
from pathlib import Path

from waterfallsim.metrics import summarize
from waterfallsim.model import run_scenario
from waterfallsim.report import csv_tables, render_text
from waterfallsim.rng import RngStream, SizeDistribution, bernoulli, exp_sample, size_sample, uniform_int
from waterfallsim.scenario import load_scenario

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
SEED = 42
N = 1000


def rng_draws(seed: int = SEED, n: int = N) -> dict:
    streams = {name: RngStream(seed) for name in ("exp_sample", "size_sample", "uniform_int", "bernoulli")}
    dist = SizeDistribution()
    return {
        "seed": seed,
        "exp_sample(mean=35)": [exp_sample(streams["exp_sample"], 35.0) for _ in range(n)],
        "size_sample(0.48,0.25,0.27)": [size_sample(streams["size_sample"], dist) for _ in range(n)],
        "uniform_int(15,20)": [uniform_int(streams["uniform_int"], 15, 20) for _ in range(n)],
        "bernoulli(0.3)": [bernoulli(streams["bernoulli"], 0.3) for _ in range(n)],
    }


def scenario_files(name: str = "scenario1", seed: int = SEED) -> dict[str, str]:
    summary = summarize(run_scenario(load_scenario(name, [f"seed={seed}"])))
    files = csv_tables(summary)
    files["report.txt"] = render_text(summary)
    return files


def main() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    (GOLDEN / "rng_seed42.json").write_text(json.dumps(rng_draws(), indent=1) + "\n", encoding="utf-8")
    out = GOLDEN / "scenario1_seed42"
    out.mkdir(exist_ok=True)
    for name, text in scenario_files().items():
        (out / name).write_text(text, encoding="utf-8")
    print(f"golden files written to {GOLDEN}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
