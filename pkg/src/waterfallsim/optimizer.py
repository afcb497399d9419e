"""Stepwise search for pool sizes that produce no waiting.

Each iteration simulates the scenario at the current levels with seed
``master_seed + run_index`` (mod 2**64). Every pool that had at least one
delayed acquisition grows by ``step`` units, clamped at its upper bound. In
``sequential`` mode only the first lacking pool in phase order grows. The
search succeeds once ``clean_threshold`` consecutive runs see no delay at all
and gives up after ``max_runs`` runs.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .model import ConfigError, ScenarioConfig, run_scenario

DEFAULT_MAX_UNITS = 1000
MODES = ("simultaneous", "sequential")

Runner = Callable[[dict[str, int], int], dict[str, int]]


@dataclass
class OptimizerConfig:
    bounds: dict[str, tuple[int, int]] = field(default_factory=dict)
    step: int = 1
    clean_threshold: int = 3
    max_runs: int = 200
    master_seed: Optional[int] = None
    mode: str = "simultaneous"


@dataclass(frozen=True)
class Iteration:
    run_index: int
    seed: int
    levels: dict[str, int]
    delays: dict[str, int]
    clean_streak: int


@dataclass
class OptimizerResult:
    levels: dict[str, int]
    runs_used: int
    converged: bool
    trace: list[Iteration]


def resolve_bounds(base: ScenarioConfig, opt: OptimizerConfig) -> dict[str, tuple[int, int]]:
    """Per-pool ``(min, max)``; pools without explicit bounds get ``(capacity, DEFAULT_MAX_UNITS)``."""
    problems = []
    for role in opt.bounds:
        if role not in base.capacities:
            problems.append((f"bounds.{role}", "unknown pool"))
    bounds = {}
    for role, cap in base.capacities.items():
        lo, hi = opt.bounds.get(role, (cap, max(cap, DEFAULT_MAX_UNITS)))
        if not lo <= cap <= hi:
            problems.append((f"bounds.{role}", f"capacity {cap} outside [{lo}, {hi}]"))
        need = base.max_demand(role)
        if hi < need:
            problems.append((f"bounds.{role}", f"max {hi} below large-project demand {need}"))
        bounds[role] = (lo, hi)
    if opt.step < 1:
        problems.append(("step", f"must be >= 1, got {opt.step}"))
    if opt.clean_threshold < 1:
        problems.append(("clean_threshold", f"must be >= 1, got {opt.clean_threshold}"))
    if opt.max_runs < opt.clean_threshold:
        problems.append(("max_runs", f"must be >= clean_threshold ({opt.max_runs} < {opt.clean_threshold})"))
    if opt.mode not in MODES:
        problems.append(("mode", f"must be one of {MODES}, got {opt.mode!r}"))
    if problems:
        raise ConfigError(problems)
    return bounds


def scenario_runner(base: ScenarioConfig) -> Runner:
    def run(levels: dict[str, int], seed: int) -> dict[str, int]:
        return run_scenario(base.with_capacities(levels).with_seed(seed)).delays_by_role()

    return run


def stepwise_search(
    levels: dict[str, int],
    bounds: dict[str, tuple[int, int]],
    opt: OptimizerConfig,
    runner: Runner,
    master_seed: int,
    order: Optional[list[str]] = None,
) -> OptimizerResult:
    """Core loop; ``runner(levels, seed)`` returns delayed acquisitions per pool."""
    order = list(order or levels)
    levels = dict(levels)
    trace: list[Iteration] = []
    streak = 0
    for run_index in range(opt.max_runs):
        seed = (master_seed + run_index) % 2**64
        delays = runner(dict(levels), seed)
        lacking = [r for r in order if delays.get(r, 0) > 0]
        streak = 0 if lacking else streak + 1
        trace.append(Iteration(run_index, seed, dict(levels), {r: delays.get(r, 0) for r in order}, streak))
        if streak >= opt.clean_threshold:
            return OptimizerResult(levels, run_index + 1, True, trace)
        growable = [r for r in lacking if levels[r] < bounds[r][1]]
        if opt.mode == "sequential":
            growable = growable[:1]
        for role in growable:
            levels[role] = min(levels[role] + opt.step, bounds[role][1])
    return OptimizerResult(levels, opt.max_runs, False, trace)


def find_zero_wait(
    base: ScenarioConfig, opt: OptimizerConfig, runner: Optional[Runner] = None
) -> OptimizerResult:
    base.validate()
    bounds = resolve_bounds(base, opt)
    master = base.seed if opt.master_seed is None else opt.master_seed
    # Growth order follows the phase order.
    order = list(dict.fromkeys(spec.role for spec in base.phase_specs))
    order += [r for r in base.capacities if r not in order]
    return stepwise_search(base.capacities, bounds, opt, runner or scenario_runner(base), master, order)


def trace_csv(result: OptimizerResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("run", "role", "level", "delays", "clean_streak"))
    for it in result.trace:
        for role, level in it.levels.items():
            writer.writerow((it.run_index, role, level, it.delays.get(role, 0), it.clean_streak))
    return buf.getvalue()


@dataclass(frozen=True)
class Comparison:
    seed: int
    mean_completion_before: float
    mean_completion_after: float
    makespan_before: float
    makespan_after: float


def compare_levels(base: ScenarioConfig, levels: dict[str, int], seeds: list[int]) -> list[Comparison]:
    """Run ``base`` and ``base`` at ``levels`` on the same seeds."""
    rows = []
    for seed in seeds:
        before = run_scenario(base.with_seed(seed))
        after = run_scenario(base.with_capacities(levels).with_seed(seed))
        rows.append(
            Comparison(
                seed,
                math.fsum(p.turnaround for p in before.projects) / len(before.projects),
                math.fsum(p.turnaround for p in after.projects) / len(after.projects),
                before.makespan,
                after.makespan,
            )
        )
    return rows


def render_comparison(base: ScenarioConfig, result: OptimizerResult, rows: list[Comparison]) -> str:
    lines = [
        f"converged: {'yes' if result.converged else 'no'} after {result.runs_used} runs",
        "",
        f"{'pool':<14}{'original':>10}{'optimized':>11}",
    ]
    for role, cap in base.capacities.items():
        lines.append(f"{role:<14}{cap:>10}{result.levels[role]:>11}")
    lines += [
        "",
        f"{'seed':<22}{'mean compl. before':>20}{'after':>10}{'makespan before':>17}{'after':>11}",
    ]
    for r in rows:
        lines.append(
            f"{r.seed:<22}{r.mean_completion_before:>20.3f}{r.mean_completion_after:>10.3f}"
            f"{r.makespan_before:>17.3f}{r.makespan_after:>11.3f}"
        )
    if rows:
        better = sum(r.mean_completion_after < r.mean_completion_before for r in rows)
        lines += ["", f"mean completion improved on {better} of {len(rows)} seeds"]
    return "\n".join(lines) + "\n"
