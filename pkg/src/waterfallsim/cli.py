"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 optimizer did
not converge within its run budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Optional, Sequence

from .metrics import summarize
from .model import ConfigError, ScenarioConfig, run_scenario
from .optimizer import MODES, OptimizerConfig, compare_levels, find_zero_wait, render_comparison, trace_csv
from .report import aggregate_csv, write_report
from .scenario import dump_scenario, load_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NOT_CONVERGED = 4


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("scenario", nargs="?", help="scenario file, or a bundled name: scenario1, scenario2")
    parser.add_argument("--config", help="scenario file (alternative to the positional argument)")
    parser.add_argument("--seed", help="master seed, decimal unsigned 64-bit")
    parser.add_argument("--projects", help="number of projects")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override any scenario key by dotted path, e.g. capacities.programmers=12 (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="waterfallsim", description="Waterfall lifecycle resource simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file and print it with defaults applied")
    _common(p)

    p = sub.add_parser("run", help="simulate a scenario and write reports")
    _common(p)
    p.add_argument("--replications", type=int, default=1, help="runs at seeds seed, seed+1, ... (default 1)")
    p.add_argument("--out", default="results", help="output directory (default: results)")

    p = sub.add_parser("optimize", help="search for pool sizes with zero waiting")
    _common(p)
    p.add_argument("--step", type=int, default=1, help="units added to a lacking pool per run (default 1)")
    p.add_argument("--clean-threshold", type=int, default=3, help="delay-free runs in a row to stop (default 3)")
    p.add_argument("--max-runs", type=int, default=200, help="run budget (default 200)")
    p.add_argument(
        "--bounds",
        action="append",
        default=[],
        metavar="ROLE=MIN:MAX",
        help="level bounds for one pool (repeatable); default capacity:1000",
    )
    p.add_argument("--mode", choices=MODES, default="simultaneous", help="grow all lacking pools, or only the first")
    p.add_argument(
        "--replications", type=int, default=1, help="matched seeds for the before/after comparison (default 1)"
    )
    p.add_argument("--out", default="results", help="output directory (default: results)")
    return parser


def _load(args: argparse.Namespace) -> ScenarioConfig:
    if args.scenario and args.config:
        raise ConfigError([("config", "give the scenario either positionally or with --config, not both")])
    ref = args.config or args.scenario or "scenario1"
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.projects is not None:
        overrides.append(f"n_projects={args.projects}")
    return load_scenario(ref, overrides)


def _parse_bounds(items: Sequence[str]) -> dict[str, tuple[int, int]]:
    bounds = {}
    problems = []
    for item in items:
        role, _, rng = item.partition("=")
        lo, _, hi = rng.partition(":")
        try:
            bounds[role.strip()] = (int(lo), int(hi))
        except ValueError:
            problems.append((f"bounds.{role.strip()}", f"expected ROLE=MIN:MAX, got {item!r}"))
    if problems:
        raise ConfigError(problems)
    return bounds


def cmd_validate(args: argparse.Namespace) -> int:
    config = _load(args)
    sys.stdout.write(dump_scenario(config))
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = _load(args)
    if args.replications < 1:
        raise ConfigError([("replications", f"must be >= 1, got {args.replications}")])
    out = Path(args.out)
    summaries = []
    for i in range(args.replications):
        rep = config.with_seed((config.seed + i) % 2**64)
        summary = summarize(run_scenario(rep))
        write_report(summary, out / f"rep_{i:03d}")
        summaries.append(summary)
    (out / "aggregate.csv").write_text(aggregate_csv(summaries), encoding="utf-8")
    print(f"wrote {args.replications} replication(s) to {out}")
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    config = _load(args)
    if args.replications < 1:
        raise ConfigError([("replications", f"must be >= 1, got {args.replications}")])
    opt = OptimizerConfig(
        bounds=_parse_bounds(args.bounds),
        step=args.step,
        clean_threshold=args.clean_threshold,
        max_runs=args.max_runs,
        mode=args.mode,
    )
    result = find_zero_wait(config, opt)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trace.csv").write_text(trace_csv(result), encoding="utf-8")
    optimized = config.with_capacities(result.levels)
    (out / "scenario_optimized.json").write_text(dump_scenario(optimized), encoding="utf-8")
    seeds = [(config.seed + i) % 2**64 for i in range(args.replications)]
    rows = compare_levels(config, result.levels, seeds)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("seed", "mean_completion_before", "mean_completion_after", "makespan_before", "makespan_after"))
    for r in rows:
        writer.writerow(
            (r.seed, f"{r.mean_completion_before:.3f}", f"{r.mean_completion_after:.3f}",
             f"{r.makespan_before:.3f}", f"{r.makespan_after:.3f}")
        )
    (out / "comparison.csv").write_text(buf.getvalue(), encoding="utf-8")
    text = render_comparison(config, result, rows)
    (out / "comparison.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    if not result.converged:
        print(f"error: no zero-wait levels found within {opt.max_runs} runs", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "run": cmd_run, "optimize": cmd_optimize}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        for path, msg in exc.problems:
            print(f"error: {path}: {msg}" if path else f"error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
