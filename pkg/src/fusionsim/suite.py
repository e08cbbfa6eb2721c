"""Run scenario grids and write results as CSV.

Output layout is one data row per (scenario, seed) cell followed by a
summary row per scenario carrying the ensemble mean in the metric
columns and the sample standard deviation in the *_std columns (0 for
a single seed).  Rows are sorted by scenario id then seed, floats are
written with repr so equal runs produce byte-identical files, and the
column set is fixed regardless of which disciplines appear.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .arrivals import FixedLength
from .metrics import Metrics, compute_metrics
from .scenario import ConstantArrival, Scenario, run_scenario
from .trace import Trace

COLUMNS = [
    "row_type",
    "scenario_id",
    "discipline",
    "seed",
    "n_requests",
    "arrival",
    "interval_ms",
    "lengths",
    "length_lo",
    "length_hi",
    "max_output_length",
    "batch_size",
    "tp_size",
    "placement",
    "makespan_ms",
    "mean_latency_ms",
    "p50_latency_ms",
    "p99_latency_ms",
    "total_iterations",
    "overlap",
    "bytes_shuffled",
    "shuffle_count",
    "makespan_ms_std",
    "mean_latency_ms_std",
    "p50_latency_ms_std",
    "p99_latency_ms_std",
    "total_iterations_std",
    "overlap_std",
    "bytes_shuffled_std",
    "shuffle_count_std",
]

_METRIC_KEYS = [
    "makespan_ms",
    "mean_latency_ms",
    "p50_latency_ms",
    "p99_latency_ms",
    "total_iterations",
    "overlap",
    "bytes_shuffled",
    "shuffle_count",
]


@dataclass(frozen=True)
class CellResult:
    scenario: Scenario
    seed: int
    metrics: Metrics


def _metric_values(m: Metrics) -> dict[str, float]:
    return {
        "makespan_ms": m.makespan_ms,
        "mean_latency_ms": m.mean_latency_ms,
        "p50_latency_ms": m.p50_latency_ms,
        "p99_latency_ms": m.p99_latency_ms,
        "total_iterations": m.total_stream_iterations,
        "overlap": m.overlap_percent,
        "bytes_shuffled": m.bytes_shuffled,
        "shuffle_count": m.shuffle_count,
    }


def _identity_columns(s: Scenario) -> dict[str, object]:
    if isinstance(s.arrival, ConstantArrival):
        arrival, interval = "constant", s.arrival.interval_ms
    else:
        arrival, interval = "poisson", s.arrival.mean_interval_ms
    if isinstance(s.lengths, FixedLength):
        lkind, lo, hi = "fixed", s.lengths.tokens, s.lengths.tokens
    else:
        lkind, lo, hi = "uniform", s.lengths.lo, s.lengths.hi
    return {
        "scenario_id": s.scenario_id,
        "discipline": s.discipline.value,
        "n_requests": s.n_requests,
        "arrival": arrival,
        "interval_ms": repr(float(interval)),
        "lengths": lkind,
        "length_lo": lo,
        "length_hi": hi,
        "max_output_length": s.max_output_length,
        "batch_size": s.batch_size,
        "tp_size": s.tp.tp_size,
        "placement": s.tp.placement.value,
    }


def _fmt(value: float | int) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(value)


def _sample_std(values: list[float], mean: float) -> float:
    if len(values) < 2:
        return 0.0
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return math.sqrt(var)


def run_cells(scenarios: list[Scenario]) -> list[CellResult]:
    """Execute every (scenario, seed) cell deterministically in order."""
    results = []
    for scenario in sorted(scenarios, key=lambda s: s.scenario_id):
        for seed in scenario.seeds:
            trace = run_scenario(scenario, seed)
            metrics = compute_metrics(trace, scenario.n_requests)
            results.append(CellResult(scenario, seed, metrics))
    return results


def result_rows(results: list[CellResult]) -> list[dict[str, str]]:
    rows: list[dict[str, str]] = []
    by_scenario: dict[str, list[CellResult]] = {}
    for cell in results:
        by_scenario.setdefault(cell.scenario.scenario_id, []).append(cell)

    for sid in sorted(by_scenario):
        cells = sorted(by_scenario[sid], key=lambda c: c.seed)
        ident = {k: _fmt(v) if isinstance(v, (int, float)) else str(v)
                 for k, v in _identity_columns(cells[0].scenario).items()}
        per_key: dict[str, list[float]] = {k: [] for k in _METRIC_KEYS}
        for cell in cells:
            row = {c: "" for c in COLUMNS}
            row.update(ident)
            row["row_type"] = "data"
            row["seed"] = str(cell.seed)
            for key, value in _metric_values(cell.metrics).items():
                row[key] = _fmt(value)
                per_key[key].append(float(value))
            rows.append(row)
        summary = {c: "" for c in COLUMNS}
        summary.update(ident)
        summary["row_type"] = "summary"
        for key, values in per_key.items():
            mean = sum(values) / len(values)
            summary[key] = _fmt(mean)
            summary[f"{key}_std"] = _fmt(_sample_std(values, mean))
        rows.append(summary)
    return rows


def write_csv(rows: list[dict[str, str]], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def run_suite(scenarios: list[Scenario], out_path: str | Path) -> list[CellResult]:
    """Run every cell and write the CSV; returns the raw results."""
    results = run_cells(scenarios)
    write_csv(result_rows(results), out_path)
    return results


def format_trace(trace: Trace) -> str:
    return "\n".join(trace.format_lines()) + "\n"
