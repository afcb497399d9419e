"""Aggregate statistics of a finished run.

Keys are ``(phase, size)`` label pairs where either side may be ``"all"``.
"All" cells are computed over the merged population, never as a mean of
per-size means. Standard deviations are population (divide by n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .model import Phase, RunRecord
from .rng import SIZES

ALL = "all"
PHASES = tuple(p.label for p in Phase)
SIZE_KEYS = SIZES + (ALL,)
PHASE_KEYS = PHASES + (ALL,)


@dataclass(frozen=True)
class StatSummary:
    count: int = 0
    min: float = 0.0
    max: float = 0.0
    mean: float = 0.0
    std_dev: float = 0.0

    @classmethod
    def of(cls, values: Iterable[float]) -> "StatSummary":
        xs = list(values)
        if not xs:
            return cls()
        n = len(xs)
        mean = math.fsum(xs) / n
        lo, hi = min(xs), max(xs)
        # Rounding in fsum/n can nudge the mean just outside [min, max].
        mean = min(max(mean, lo), hi)
        var = math.fsum((x - mean) ** 2 for x in xs) / n
        return cls(n, lo, hi, mean, math.sqrt(var))


@dataclass(frozen=True)
class FailureCell:
    failed: int
    total: int

    @property
    def percentage(self) -> float:
        return 100.0 * self.failed / self.total if self.total else 0.0


@dataclass(frozen=True)
class UtilizationPoint:
    time: float
    role: str
    available: int
    in_use: int
    queue_len: int


@dataclass
class RunSummary:
    seed: int
    n_projects: int
    makespan: float
    size_mix: dict[str, int]
    wait_stats: dict[tuple[str, str], StatSummary]
    delay_counts: dict[tuple[str, str], int]
    completion_stats: dict[str, StatSummary]
    duration_stats: dict[tuple[str, str], StatSummary]
    failure_table: dict[tuple[str, str], FailureCell]
    roles: dict[str, str] = field(default_factory=dict)
    timeline: list[UtilizationPoint] = field(default_factory=list)


class IncompleteRunError(ValueError):
    pass


def build_timeline(record: RunRecord) -> list[UtilizationPoint]:
    points = []
    for name, pool in record.pools.items():
        for time, in_use, queue_len in pool.history:
            points.append(UtilizationPoint(time, name, pool.capacity - in_use, in_use, queue_len))
    # Stable: pools keep configuration order at equal times.
    points.sort(key=lambda p: p.time)
    return points


def summarize(record: RunRecord) -> RunSummary:
    if not record.complete:
        done = sum(p.completion is not None for p in record.projects)
        raise IncompleteRunError(
            f"run record incomplete: {done} of {record.config.n_projects} projects finished"
        )
    waits: dict[tuple[str, str], list[float]] = {(p, s): [] for p in PHASE_KEYS for s in SIZE_KEYS}
    durations: dict[tuple[str, str], list[float]] = {(p, s): [] for p in PHASE_KEYS for s in SIZE_KEYS}
    failed = {key: 0 for key in waits}
    total = {key: 0 for key in waits}
    completions: dict[str, list[float]] = {s: [] for s in SIZE_KEYS}
    size_mix = {s: 0 for s in SIZES}

    for project in record.projects:
        size_mix[project.size] += 1
        completions[project.size].append(project.turnaround)
        completions[ALL].append(project.turnaround)
        for ex in project.executions:
            phase = ex.phase.label
            for key in ((phase, project.size), (phase, ALL), (ALL, project.size), (ALL, ALL)):
                waits[key].append(ex.wait)
                durations[key].append(ex.wait + ex.service)
                total[key] += 1
                failed[key] += ex.failed

    return RunSummary(
        seed=record.config.seed,
        n_projects=record.config.n_projects,
        makespan=record.makespan,
        size_mix=size_mix,
        wait_stats={k: StatSummary.of(v) for k, v in waits.items()},
        delay_counts={k: sum(1 for w in v if w > 0) for k, v in waits.items()},
        completion_stats={k: StatSummary.of(v) for k, v in completions.items()},
        duration_stats={k: StatSummary.of(v) for k, v in durations.items()},
        failure_table={k: FailureCell(failed[k], total[k]) for k in waits},
        roles={spec.phase.label: spec.role for spec in record.config.phase_specs},
        timeline=build_timeline(record),
    )
