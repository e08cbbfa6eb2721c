"""Summary statistics over a trace.

Latency percentiles use linear interpolation between order statistics
(the same convention numpy calls "linear"), computed here directly so
the package carries no numeric dependency.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IncompleteTrace, InvalidParam
from .trace import EventKind, Trace


def percentile(values: list[float], p: float) -> float:
    if not values:
        raise InvalidParam("percentile of empty list")
    if not 0 <= p <= 100:
        raise InvalidParam("p must be in [0, 100]")
    ordered = sorted(values)
    if len(ordered) == 1:
        return ordered[0]
    rank = p / 100.0 * (len(ordered) - 1)
    lo = int(rank)
    hi = min(lo + 1, len(ordered) - 1)
    frac = rank - lo
    return ordered[lo] * (1.0 - frac) + ordered[hi] * frac


@dataclass(frozen=True)
class Metrics:
    makespan_ms: float
    per_request_latency_ms: tuple[float, ...]
    mean_latency_ms: float
    p50_latency_ms: float
    p99_latency_ms: float
    total_stream_iterations: int
    overlap_percent: float          # 0..100
    bytes_shuffled: int
    shuffle_count: int


def compute_metrics(trace: Trace, n_requests: int) -> Metrics:
    """Reduce a trace to its headline numbers.

    Every one of the n_requests ids must show a complete lifecycle
    (arrival, fusion, eviction); anything less raises IncompleteTrace.
    overlap_percent is the time-weighted mean number of running
    requests between the first fusion and the last eviction, divided
    by n_requests and scaled to a percentage, so 100 means every
    request ran the whole span.
    """
    if n_requests < 1:
        raise InvalidParam("n_requests must be >= 1")
    arrived: dict[int, float] = {}
    fused: dict[int, float] = {}
    evicted: dict[int, float] = {}
    token_times: list[float] = []
    iter_times: list[float] = []
    bytes_shuffled = 0
    shuffle_count = 0
    for e in trace.events:
        if e.kind is EventKind.ARRIVED:
            arrived[e.request_id] = e.time
        elif e.kind is EventKind.FUSED:
            fused[e.request_id] = e.time
        elif e.kind is EventKind.EVICTED:
            evicted[e.request_id] = e.time
        elif e.kind is EventKind.TOKEN_GENERATED:
            token_times.append(e.time)
        elif e.kind is EventKind.ITERATION_COMPLETED:
            iter_times.append(e.time)
        elif e.kind is EventKind.SHUFFLE_EXECUTED:
            bytes_shuffled += int(e.value)
            shuffle_count += 1

    ids = sorted(arrived)
    if len(ids) != n_requests:
        raise IncompleteTrace(
            f"trace holds {len(ids)} requests, expected {n_requests}"
        )
    for rid in ids:
        if rid not in fused or rid not in evicted:
            raise IncompleteTrace(f"request {rid} lacks a full lifecycle")

    latencies = tuple(evicted[rid] - arrived[rid] for rid in ids)
    makespan = max(evicted.values()) - min(arrived.values())

    if token_times:
        first_tok, last_tok = min(token_times), max(token_times)
        iterations = sum(1 for t in iter_times if first_tok <= t <= last_tok)
    else:
        iterations = len(iter_times)

    span_lo = min(fused.values())
    span_hi = max(evicted.values())
    span = span_hi - span_lo
    if span > 0:
        marks = sorted(
            [(t, 1) for t in fused.values()] + [(t, -1) for t in evicted.values()]
        )
        area = 0.0
        level = 0
        prev = span_lo
        for t, delta in marks:
            area += level * (t - prev)
            level += delta
            prev = t
        overlap = 100.0 * area / (span * n_requests)
    else:
        overlap = 100.0

    lat_list = list(latencies)
    return Metrics(
        makespan_ms=makespan,
        per_request_latency_ms=latencies,
        mean_latency_ms=sum(lat_list) / len(lat_list),
        p50_latency_ms=percentile(lat_list, 50.0),
        p99_latency_ms=percentile(lat_list, 99.0),
        total_stream_iterations=iterations,
        overlap_percent=overlap,
        bytes_shuffled=bytes_shuffled,
        shuffle_count=shuffle_count,
    )
