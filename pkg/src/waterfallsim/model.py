"""Waterfall lifecycle on top of the kernel.

Each project walks analysis -> design -> implementation -> testing ->
maintenance. A phase grabs a size-dependent batch from its role pool, holds it
for an integer-uniform service time, releases it, and then (except analysis)
draws for failure. A failed phase sends the project one step back; the
project then moves forward again, re-queueing and re-sampling every phase it
repeats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Generator, Optional

from .kernel import ResourcePool, Simulation, StarvationError
from .rng import SIZES, RngStream, SizeDistribution, bernoulli, exp_sample, size_sample, uniform_int

ROLES = ("analysts", "designers", "programmers", "testers", "maintenance")


class Phase(enum.IntEnum):
    ANALYSIS = 0
    DESIGN = 1
    IMPLEMENTATION = 2
    TESTING = 3
    MAINTENANCE = 4

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, label: str) -> "Phase":
        return cls[label.upper()]


def rework_target(phase: Phase) -> Optional[Phase]:
    """Phase a failed ``phase`` falls back to; analysis cannot fail."""
    if phase == Phase.ANALYSIS:
        return None
    return Phase(phase - 1)


class ConfigError(ValueError):
    """Invalid scenario; ``problems`` holds ``(field path, message)`` pairs."""

    def __init__(self, problems: list[tuple[str, str]]) -> None:
        self.problems = list(problems)
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in self.problems))


@dataclass(frozen=True)
class PhaseSpec:
    phase: Phase
    role: str
    duration_lo: int
    duration_hi: int
    fail_prob: dict[str, float] = field(default_factory=dict)


# Default parameter tables.
DEFAULT_CAPACITIES = {"analysts": 5, "designers": 5, "programmers": 10, "testers": 20, "maintenance": 5}
OPTIMIZED_CAPACITIES = {"analysts": 15, "designers": 18, "programmers": 38, "testers": 49, "maintenance": 10}
DEFAULT_DEMAND = {
    "analysts": {"small": 1, "medium": 2, "large": 5},
    "designers": {"small": 1, "medium": 2, "large": 5},
    "programmers": {"small": 2, "medium": 4, "large": 10},
    "testers": {"small": 2, "medium": 6, "large": 20},
    "maintenance": {"small": 1, "medium": 2, "large": 5},
}
DEFAULT_DURATIONS = {
    Phase.ANALYSIS: (3, 5),
    Phase.DESIGN: (5, 10),
    Phase.IMPLEMENTATION: (15, 20),
    Phase.TESTING: (5, 10),
    Phase.MAINTENANCE: (1, 3),
}
DEFAULT_FAIL_PROB = {"small": 0.10, "medium": 0.20, "large": 0.30}


def default_phase_specs() -> tuple[PhaseSpec, ...]:
    specs = []
    for phase, role in zip(Phase, ROLES):
        lo, hi = DEFAULT_DURATIONS[phase]
        fail = {s: 0.0 for s in SIZES} if phase == Phase.ANALYSIS else dict(DEFAULT_FAIL_PROB)
        specs.append(PhaseSpec(phase, role, lo, hi, fail))
    return tuple(specs)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


@dataclass(frozen=True)
class ScenarioConfig:
    capacities: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_CAPACITIES))
    demand: dict[str, dict[str, int]] = field(
        default_factory=lambda: {r: dict(d) for r, d in DEFAULT_DEMAND.items()}
    )
    phase_specs: tuple[PhaseSpec, ...] = field(default_factory=default_phase_specs)
    arrival_mean: float = 35.0
    size_dist: SizeDistribution = field(default_factory=SizeDistribution)
    n_projects: int = 100
    seed: int = 42

    def with_capacities(self, capacities: dict[str, int]) -> "ScenarioConfig":
        return replace(self, capacities=dict(capacities))

    def with_seed(self, seed: int) -> "ScenarioConfig":
        return replace(self, seed=seed)

    def max_demand(self, role: str) -> int:
        return max(self.demand[role].values())

    def errors(self) -> list[tuple[str, str]]:
        problems: list[tuple[str, str]] = []
        for role, cap in self.capacities.items():
            if not _is_int(cap) or cap <= 0:
                problems.append((f"capacities.{role}", f"must be a positive integer, got {cap!r}"))
        for role in self.capacities:
            if role not in self.demand:
                problems.append((f"demand.{role}", "missing demand row for pool"))
        for role, row in self.demand.items():
            if role not in self.capacities:
                problems.append((f"demand.{role}", "no pool with this name in capacities"))
            for size in SIZES:
                units = row.get(size)
                if not _is_int(units) or units < 1:
                    problems.append((f"demand.{role}.{size}", f"must be an integer >= 1, got {units!r}"))
            for size in row:
                if size not in SIZES:
                    problems.append((f"demand.{role}.{size}", "unknown project size"))
        if not problems:
            for role, cap in self.capacities.items():
                need = self.max_demand(role)
                if cap < need:
                    problems.append(
                        (f"capacities.{role}", f"capacity below large-project demand ({cap} < {need})")
                    )
        if len(self.phase_specs) != len(Phase):
            problems.append(("phases", f"expected {len(Phase)} phases, got {len(self.phase_specs)}"))
        for i, spec in enumerate(self.phase_specs):
            where = f"phases.{spec.phase.label}" if isinstance(spec.phase, Phase) else f"phases[{i}]"
            if spec.phase != i:
                problems.append((where, f"out of order at position {i}"))
            if spec.role not in self.capacities:
                problems.append((f"{where}.role", f"unknown pool {spec.role!r}"))
            if not (_is_int(spec.duration_lo) and _is_int(spec.duration_hi)):
                problems.append((f"{where}.duration_lo", "durations must be integers"))
            elif not 0 < spec.duration_lo <= spec.duration_hi:
                problems.append(
                    (f"{where}.duration_lo", f"need 0 < lo <= hi, got [{spec.duration_lo}, {spec.duration_hi}]")
                )
            for size in SIZES:
                p = spec.fail_prob.get(size, 0.0)
                if not _is_real(p) or not 0.0 <= p <= 1.0:
                    problems.append((f"{where}.fail_prob.{size}", f"must lie in [0, 1], got {p!r}"))
                elif spec.phase == Phase.ANALYSIS and p != 0.0:
                    problems.append((f"{where}.fail_prob.{size}", "analysis cannot fail"))
            for size in spec.fail_prob:
                if size not in SIZES:
                    problems.append((f"{where}.fail_prob.{size}", "unknown project size"))
        if not _is_real(self.arrival_mean) or not self.arrival_mean > 0:
            problems.append(("arrival_mean", f"must be positive, got {self.arrival_mean!r}"))
        for msg in self.size_dist.errors():
            problems.append(("size_dist", msg))
        if not _is_int(self.n_projects) or self.n_projects < 1:
            problems.append(("n_projects", f"must be an integer >= 1, got {self.n_projects!r}"))
        if not _is_int(self.seed) or not 0 <= self.seed < 2**64:
            problems.append(("seed", f"must be an unsigned 64-bit integer, got {self.seed!r}"))
        return problems

    def validate(self) -> "ScenarioConfig":
        problems = self.errors()
        if problems:
            raise ConfigError(problems)
        return self


@dataclass
class PhaseExecution:
    phase: Phase
    requested_at: float
    started_at: float
    ended_at: float
    wait: float
    service: int
    units_held: int
    failed: bool


@dataclass
class Project:
    id: int
    size: str
    arrival: float
    executions: list[PhaseExecution] = field(default_factory=list)
    completion: Optional[float] = None

    @property
    def turnaround(self) -> float:
        """Completion time measured from arrival."""
        if self.completion is None:
            raise ValueError(f"project {self.id} has not completed")
        return self.completion - self.arrival


@dataclass
class PoolRecord:
    name: str
    capacity: int
    history: list[tuple[float, int, int]]
    requests: int
    queued: int
    grant_order: list[int]


@dataclass
class RunRecord:
    config: ScenarioConfig
    projects: list[Project]
    pools: dict[str, PoolRecord]
    makespan: float
    events_processed: int
    event_log: Optional[list[tuple[float, int]]] = None

    @property
    def complete(self) -> bool:
        return len(self.projects) == self.config.n_projects and all(
            p.completion is not None for p in self.projects
        )

    def delays_by_role(self) -> dict[str, int]:
        """Executions with a strictly positive wait, per pool."""
        specs = self.config.phase_specs
        counts = {name: 0 for name in self.pools}
        for project in self.projects:
            for ex in project.executions:
                if ex.wait > 0:
                    counts[specs[ex.phase].role] += 1
        return counts


def run_project(
    sim: Simulation,
    scenario: ScenarioConfig,
    project: Project,
    pools: dict[str, ResourcePool],
    durations: RngStream,
    failures: RngStream,
) -> Generator:
    """Activity for one project, from arrival until maintenance succeeds."""
    specs = scenario.phase_specs
    cursor = Phase.ANALYSIS
    while True:
        spec = specs[cursor]
        pool = pools[spec.role]
        units = scenario.demand[spec.role][project.size]
        requested = sim.now
        wait = yield pool.acquire(units)
        started = sim.now
        service = uniform_int(durations, spec.duration_lo, spec.duration_hi)
        yield sim.timeout(service)
        pool.release(units)
        target = rework_target(cursor)
        failed = target is not None and bernoulli(failures, spec.fail_prob.get(project.size, 0.0))
        project.executions.append(
            PhaseExecution(cursor, requested, started, sim.now, wait, service, units, failed)
        )
        if failed:
            cursor = target
        elif cursor == Phase.MAINTENANCE:
            project.completion = sim.now
            return project
        else:
            cursor = Phase(cursor + 1)


def generate_arrivals(
    sim: Simulation,
    scenario: ScenarioConfig,
    pools: dict[str, ResourcePool],
    projects: list[Project],
) -> Generator:
    """Spawn ``n_projects`` projects; the first arrives after one exponential gap."""
    gaps = RngStream.substream(scenario.seed, "arrivals")
    sizes = RngStream.substream(scenario.seed, "sizes")
    for pid in range(1, scenario.n_projects + 1):
        yield sim.timeout(exp_sample(gaps, scenario.arrival_mean))
        project = Project(pid, size_sample(sizes, scenario.size_dist), sim.now)
        projects.append(project)
        sim.process(
            run_project(
                sim,
                scenario,
                project,
                pools,
                RngStream.substream(scenario.seed, f"durations/{pid}"),
                RngStream.substream(scenario.seed, f"failures/{pid}"),
            ),
            name=f"project-{pid}",
        )


def run_scenario(
    config: ScenarioConfig,
    record_events: bool = False,
    observer: Optional[Callable[[Simulation, dict[str, ResourcePool]], None]] = None,
) -> RunRecord:
    """Simulate every project of ``config`` to completion.

    ``observer``, if given, is called after every processed event.
    """
    config.validate()
    sim = Simulation(record_events=record_events)
    pools = {role: ResourcePool(sim, role, cap) for role, cap in config.capacities.items()}
    projects: list[Project] = []
    sim.process(generate_arrivals(sim, config, pools, projects), name="arrivals")
    try:
        if observer is None:
            sim.run()
        else:
            while sim.pending():
                sim.step()
                observer(sim, pools)
    except StarvationError as exc:
        raise ConfigError([("capacities", str(exc))]) from exc
    makespan = max((p.completion or 0.0) for p in projects) if projects else 0.0
    return RunRecord(
        config=config,
        projects=projects,
        pools={
            name: PoolRecord(name, p.capacity, p.history, p.requests, p.queued, p.grant_order)
            for name, p in pools.items()
        },
        makespan=makespan,
        events_processed=sim.processed,
        event_log=sim.event_log,
    )
