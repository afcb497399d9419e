import csv
import io
import statistics
from dataclasses import replace
from pathlib import Path

import pytest

from waterfallsim.metrics import ALL, PHASES, SIZE_KEYS, FailureCell, IncompleteRunError, StatSummary, summarize
from waterfallsim.model import Phase, ScenarioConfig, run_scenario
from waterfallsim.report import CSV_FILES, csv_tables, export_csv, fmt, render_text, write_report
from waterfallsim.rng import SIZES

GOLDEN = Path(__file__).parent / "golden" / "scenario1_seed42"


def generous(seed=0, n=100):
    c = ScenarioConfig(seed=seed, n_projects=n)
    return c.with_capacities({r: 100 * c.max_demand(r) for r in c.capacities})


@pytest.fixture(scope="module")
def scenario1():
    return run_scenario(ScenarioConfig(seed=13))


def test_stat_summary_hand_computed():
    s = StatSummary.of([30.0, 40.0, 50.0])
    assert (s.count, s.min, s.max, s.mean) == (3, 30.0, 50.0, 40.0)
    assert s.std_dev == pytest.approx(8.165, abs=5e-4)
    assert s.std_dev == pytest.approx(statistics.pstdev([30, 40, 50]), rel=1e-12)


def test_stat_summary_empty():
    assert StatSummary.of([]) == StatSummary(0, 0.0, 0.0, 0.0, 0.0)


def test_zero_waits_give_zero_wait_tables():
    summary = summarize(run_scenario(generous(3)))
    assert all(v == 0 for v in summary.delay_counts.values())
    for key, stat in summary.wait_stats.items():
        assert (stat.min, stat.max, stat.mean, stat.std_dev) == (0.0, 0.0, 0.0, 0.0)
        assert stat.count > 0 or key[0] != ALL


def test_duration_without_waiting_stays_in_sampling_range():
    summary = summarize(run_scenario(generous(4)))
    assert summary.duration_stats["analysis", ALL].max <= 5.0
    assert summary.duration_stats["analysis", ALL].min >= 3.0
    assert summary.duration_stats[ALL, ALL].max <= 20.0


def test_aggregates_match_brute_force(scenario1):
    summary = summarize(scenario1)
    for phase in Phase:
        for size in SIZES:
            xs = [ex for p in scenario1.projects if p.size == size for ex in p.executions if ex.phase == phase]
            waits = [ex.wait for ex in xs]
            assert summary.delay_counts[phase.label, size] == sum(w > 0 for w in waits)
            if waits:
                assert summary.wait_stats[phase.label, size].mean == pytest.approx(statistics.fmean(waits))
                assert summary.wait_stats[phase.label, size].std_dev == pytest.approx(
                    statistics.pstdev(waits), abs=1e-9
                )
            assert summary.failure_table[phase.label, size] == FailureCell(sum(ex.failed for ex in xs), len(xs))
    comps = [p.turnaround for p in scenario1.projects]
    assert summary.completion_stats[ALL].mean == pytest.approx(statistics.fmean(comps))


def test_all_rows_merge_populations(scenario1):
    summary = summarize(scenario1)
    for phase in PHASES + (ALL,):
        assert summary.delay_counts[phase, ALL] == sum(summary.delay_counts[phase, s] for s in SIZES)
        assert summary.wait_stats[phase, ALL].count == sum(summary.wait_stats[phase, s].count for s in SIZES)
        cells = [summary.failure_table[phase, s] for s in SIZES]
        assert summary.failure_table[phase, ALL].failed == sum(c.failed for c in cells)
        assert summary.failure_table[phase, ALL].total == sum(c.total for c in cells)
    for size in SIZE_KEYS:
        assert summary.failure_table[ALL, size].total == sum(summary.failure_table[p, size].total for p in PHASES)
    # The all-sizes mean is the pooled mean, not the mean of means.
    pooled = summary.completion_stats[ALL].mean
    weighted = sum(
        summary.completion_stats[s].mean * summary.completion_stats[s].count for s in SIZES
    ) / summary.completion_stats[ALL].count
    assert pooled == pytest.approx(weighted)


def test_failure_totals_obey_phase_identity(scenario1):
    t = summarize(scenario1).failure_table
    n = scenario1.config.n_projects
    assert t["analysis", ALL].total == n + t["design", ALL].failed
    assert t["design", ALL].total == n + t["design", ALL].failed + t["implementation", ALL].failed
    assert t["maintenance", ALL].total == n + t["maintenance", ALL].failed


def test_failure_percentage_formatting():
    assert fmt(FailureCell(18, 118).percentage) == "15.254"
    assert FailureCell(0, 0).percentage == 0.0


def test_timeline_conservation(scenario1):
    summary = summarize(scenario1)
    caps = scenario1.config.capacities
    times = [pt.time for pt in summary.timeline]
    assert times == sorted(times)
    for pt in summary.timeline:
        assert pt.available + pt.in_use == caps[pt.role]
        assert 0 <= pt.in_use <= caps[pt.role]
    assert any(pt.queue_len > 0 for pt in summary.timeline)


def test_incomplete_record_rejected(scenario1):
    broken = replace(scenario1, projects=scenario1.projects[:-1])
    with pytest.raises(IncompleteRunError):
        summarize(broken)


def test_csv_schemas(scenario1):
    tables = csv_tables(summarize(scenario1))
    assert set(tables) == set(CSV_FILES)
    headers = {name: text.splitlines()[0] for name, text in tables.items()}
    assert headers["utilization.csv"] == "time,role,available,in_use,queue_len"
    assert headers["waits.csv"] == "phase,size,delays,count,min,max,mean,std_dev"
    assert headers["completions.csv"] == "size,count,min,max,mean,std_dev"
    assert headers["phase_durations.csv"] == "phase,size,count,min,max,mean,std_dev"
    assert headers["failures.csv"] == "phase,size,failed,total,percentage"
    rows = list(csv.DictReader(io.StringIO(tables["waits.csv"])))
    assert len(rows) == 6 * 4
    assert all(len(r["mean"].split(".")[1]) == 3 for r in rows)


def test_export_is_deterministic(tmp_path):
    a = export_csv(summarize(run_scenario(ScenarioConfig(seed=77))), tmp_path / "a")
    b = export_csv(summarize(run_scenario(ScenarioConfig(seed=77))), tmp_path / "b")
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()


def test_unwritable_directory_names_path(tmp_path, scenario1):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match=str(blocker)):
        write_report(summarize(scenario1), blocker / "sub")


def test_text_report_sections(scenario1):
    text = render_text(summarize(scenario1))
    for title in (
        "Delays and mean wait by phase",
        "Wait statistics",
        "Project completion times",
        "Phase completion times",
        "Phase failures",
    ):
        assert title in text


def test_golden_scenario1_seed42():
    from regenerate_golden import scenario_files

    current = scenario_files()
    assert sorted(current) == sorted(p.name for p in GOLDEN.iterdir())
    for name, text in current.items():
        assert (GOLDEN / name).read_text(encoding="utf-8") == text, name
