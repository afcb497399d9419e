"""CSV and plain-text rendering of a :class:`RunSummary`.

CSV files (UTF-8, header row, reals with 3 decimals):

=====================  ==================================================
waits.csv              phase,size,delays,count,min,max,mean,std_dev
completions.csv        size,count,min,max,mean,std_dev
phase_durations.csv    phase,size,count,min,max,mean,std_dev
failures.csv           phase,size,failed,total,percentage
utilization.csv        time,role,available,in_use,queue_len
=====================  ==================================================

``phase`` and ``size`` take the value ``all`` on merged rows. Phase durations
are wait plus service for each execution.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Sequence, Union

from .metrics import ALL, PHASE_KEYS, PHASES, SIZE_KEYS, RunSummary, StatSummary
from .rng import SIZES

CSV_FILES = ("waits.csv", "completions.csv", "phase_durations.csv", "failures.csv", "utilization.csv")
AGGREGATE_COLUMNS = (
    "replication", "seed", "makespan", "mean_completion", "max_completion",
    "delays", "mean_wait", "failed", "executions",
)


def fmt(x: float) -> str:
    text = f"{x:.3f}"
    return "0.000" if text == "-0.000" else text


def _stat_cells(s: StatSummary) -> list[str]:
    return [str(s.count), fmt(s.min), fmt(s.max), fmt(s.mean), fmt(s.std_dev)]


def _csv_text(header: Sequence[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def csv_tables(summary: RunSummary) -> dict[str, str]:
    """File name -> CSV content."""
    waits = [
        [p, s, str(summary.delay_counts[p, s])] + _stat_cells(summary.wait_stats[p, s])
        for p in PHASE_KEYS
        for s in SIZE_KEYS
    ]
    completions = [[s] + _stat_cells(summary.completion_stats[s]) for s in SIZE_KEYS]
    durations = [[p, s] + _stat_cells(summary.duration_stats[p, s]) for p in PHASE_KEYS for s in SIZE_KEYS]
    failures = []
    for p in PHASE_KEYS:
        for s in SIZE_KEYS:
            cell = summary.failure_table[p, s]
            failures.append([p, s, str(cell.failed), str(cell.total), fmt(cell.percentage)])
    timeline = [
        [fmt(pt.time), pt.role, str(pt.available), str(pt.in_use), str(pt.queue_len)]
        for pt in summary.timeline
    ]
    return {
        "waits.csv": _csv_text(("phase", "size", "delays", "count", "min", "max", "mean", "std_dev"), waits),
        "completions.csv": _csv_text(("size", "count", "min", "max", "mean", "std_dev"), completions),
        "phase_durations.csv": _csv_text(("phase", "size", "count", "min", "max", "mean", "std_dev"), durations),
        "failures.csv": _csv_text(("phase", "size", "failed", "total", "percentage"), failures),
        "utilization.csv": _csv_text(("time", "role", "available", "in_use", "queue_len"), timeline),
    }


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def export_csv(summary: RunSummary, directory: Union[str, Path]) -> list[Path]:
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot create {directory}: {exc.strerror}") from exc
    written = []
    for name, text in csv_tables(summary).items():
        _write(directory / name, text)
        written.append(directory / name)
    return written


def _table(title: str, header: Sequence[str], rows: list[Sequence[str]]) -> str:
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    lines = [title, "-" * len(title)]
    lines.append("  ".join(h.ljust(w) if i < 2 else h.rjust(w) for i, (h, w) in enumerate(zip(header, widths))))
    for row in rows:
        lines.append(
            "  ".join(str(c).ljust(w) if i < 2 else str(c).rjust(w) for i, (c, w) in enumerate(zip(row, widths)))
        )
    return "\n".join(lines)


def render_text(summary: RunSummary) -> str:
    """Plain-text report laid out like the result tables of the study."""
    n = summary.n_projects
    mix = ", ".join(f"{s} {summary.size_mix[s]} ({100.0 * summary.size_mix[s] / n:.1f}%)" for s in SIZES)
    blocks = [
        f"seed: {summary.seed}\nprojects: {n}\nmakespan: {fmt(summary.makespan)}\nsize mix: {mix}",
    ]

    def role(p: str) -> str:
        return summary.roles.get(p, "all resources")

    rows = []
    for p in PHASE_KEYS:
        rows.append(
            [p, role(p)]
            + [str(summary.delay_counts[p, s]) for s in SIZES]
            + [fmt(summary.wait_stats[p, s].mean) for s in SIZES]
        )
    blocks.append(
        _table(
            "Delays and mean wait by phase",
            ["phase", "resource", "delays S", "delays M", "delays L", "wait S", "wait M", "wait L"],
            rows,
        )
    )

    rows = []
    for p in PHASE_KEYS:
        rows.append([p, "count"] + [str(summary.delay_counts[p, s]) for s in SIZE_KEYS])
        for label, attr in (("max wait", "max"), ("mean wait", "mean"), ("std dev", "std_dev")):
            rows.append(["", label] + [fmt(getattr(summary.wait_stats[p, s], attr)) for s in SIZE_KEYS])
    blocks.append(_table("Wait statistics", ["phase", "", "small", "medium", "large", ALL], rows))

    rows = []
    for label, attr in (("min", "min"), ("max", "max"), ("mean", "mean"), ("std dev", "std_dev")):
        rows.append([label, ""] + [fmt(getattr(summary.completion_stats[s], attr)) for s in SIZE_KEYS])
    blocks.append(_table("Project completion times", ["", "", "small", "medium", "large", ALL], rows))

    rows = []
    for p in PHASE_KEYS:
        for i, (label, attr) in enumerate((("min", "min"), ("max", "max"), ("mean", "mean"), ("std dev", "std_dev"))):
            rows.append(
                [p if i == 0 else "", label] + [fmt(getattr(summary.duration_stats[p, s], attr)) for s in SIZE_KEYS]
            )
    blocks.append(_table("Phase completion times (wait + service)", ["phase", "", "small", "medium", "large", ALL], rows))

    rows = []
    for p in PHASES[1:] + (ALL,):
        cells = [summary.failure_table[p, s] for s in SIZE_KEYS]
        rows.append([p, "failed"] + [str(c.failed) for c in cells])
        rows.append(["", "executions"] + [str(c.total) for c in cells])
        rows.append(["", "percentage"] + [fmt(c.percentage) for c in cells])
    blocks.append(_table("Phase failures", ["phase", "", "small", "medium", "large", ALL], rows))
    return "\n\n".join(blocks) + "\n"


def write_report(summary: RunSummary, directory: Union[str, Path]) -> list[Path]:
    """CSV tables plus ``report.txt`` into ``directory``."""
    written = export_csv(summary, directory)
    path = Path(directory) / "report.txt"
    _write(path, render_text(summary))
    return written + [path]


def aggregate_csv(summaries: Sequence[RunSummary]) -> str:
    """One row per replication plus a final ``mean`` row."""
    rows = []
    numeric = []
    for i, s in enumerate(summaries):
        values = [
            s.makespan,
            s.completion_stats[ALL].mean,
            s.completion_stats[ALL].max,
            s.delay_counts[ALL, ALL],
            s.wait_stats[ALL, ALL].mean,
            s.failure_table[ALL, ALL].failed,
            s.failure_table[ALL, ALL].total,
        ]
        numeric.append(values)
        rows.append([str(i), str(s.seed)] + [fmt(v) if isinstance(v, float) else str(v) for v in values])
    if numeric:
        means = [sum(col) / len(numeric) for col in zip(*numeric)]
        rows.append(["mean", ""] + [fmt(v) for v in means])
    return _csv_text(AGGREGATE_COLUMNS, rows)
