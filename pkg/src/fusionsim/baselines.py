"""Reference serving disciplines the fused stream is compared against.

Dynamic batching groups arrivals into fixed back-to-back time windows
anchored at the first arrival and runs each group as one rigid batch on
a single model instance.  Concurrent instances gives every request its
own model instance immediately after preprocessing, with instances
slowing each other down through a shared-device contention factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Request
from .cost import CostParams, TPConfig, contention_factor, iteration_time
from .errors import InvalidParam
from .trace import EventKind, Trace, TraceEvent


@dataclass(frozen=True)
class BatchWindowConfig:
    window_ms: float
    max_batch: int | None = None

    def __post_init__(self):
        if self.window_ms < 0:
            raise InvalidParam("window_ms must be >= 0")
        if self.max_batch is not None and self.max_batch < 1:
            raise InvalidParam("max_batch must be >= 1 when set")


def _prefix_events(requests: list[Request], params: CostParams) -> list[TraceEvent]:
    events = []
    for r in sorted(requests, key=lambda r: (r.arrival_time, r.request_id)):
        events.append(TraceEvent(r.arrival_time, EventKind.ARRIVED, r.request_id, None))
        events.append(
            TraceEvent(r.arrival_time, EventKind.PREPROCESS_START, r.request_id, None)
        )
        events.append(
            TraceEvent(
                r.arrival_time + params.preprocess_ms,
                EventKind.PREPROCESS_DONE,
                r.request_id,
                None,
            )
        )
    return events


def run_dynamic_batching(
    requests: list[Request],
    cfg: BatchWindowConfig,
    params: CostParams,
    tp: TPConfig | None = None,
    record_tokens: bool = True,
) -> Trace:
    """Serve requests in rigid arrival-window batches.

    A batch becomes dispatchable when its window closes, or earlier
    when it fills to max_batch; the remainder of that window then
    accumulates into a fresh batch.  One instance runs batches FIFO,
    so a batch also waits for the previous batch to finish and for all
    of its members to clear preprocessing.  A dispatched batch runs as
    long as its longest member with every member riding along; members
    stop producing tokens at their own end marker but nothing joins or
    leaves mid-batch.
    """
    tp = tp or TPConfig()
    events = _prefix_events(requests, params)
    trace = Trace("dynamic_batching", events)
    if not requests:
        return trace

    ordered = sorted(requests, key=lambda r: (r.arrival_time, r.request_id))
    t0 = ordered[0].arrival_time

    # Partition into batches with each batch's nominal close time.
    batches: list[tuple[list[Request], float]] = []
    if cfg.window_ms == 0:
        for r in ordered:
            batches.append(([r], r.arrival_time))
    else:
        groups: dict[int, list[Request]] = {}
        for r in ordered:
            idx = math.floor((r.arrival_time - t0) / cfg.window_ms)
            groups.setdefault(idx, []).append(r)
        for idx in sorted(groups):
            members = groups[idx]
            window_close = t0 + (idx + 1) * cfg.window_ms
            chunk: list[Request] = []
            for r in members:
                chunk.append(r)
                if cfg.max_batch is not None and len(chunk) == cfg.max_batch:
                    batches.append((chunk, r.arrival_time))
                    chunk = []
            if chunk:
                batches.append((chunk, window_close))

    prev_completion = None
    for members, nominal_close in batches:
        ready = max(r.arrival_time + params.preprocess_ms for r in members)
        dispatch = max(nominal_close, ready)
        if prev_completion is not None:
            dispatch = max(dispatch, prev_completion)
        batch_bytes = sum(m.batch_size * params.request_bytes for m in members)
        dur = iteration_time(len(members), batch_bytes, params, tp)
        n_iters = max(m.actual_output_length for m in members)
        for m in members:
            events.append(TraceEvent(dispatch, EventKind.FUSED, m.request_id, None))
        for k in range(1, n_iters + 1):
            t = dispatch + k * dur
            for m in members:
                if k <= m.actual_output_length:
                    if record_tokens:
                        events.append(
                            TraceEvent(t, EventKind.TOKEN_GENERATED, m.request_id, k)
                        )
                    if k == m.actual_output_length:
                        events.append(
                            TraceEvent(t, EventKind.EVICTED, m.request_id, None)
                        )
            events.append(TraceEvent(t, EventKind.ITERATION_COMPLETED, None, dur))
        prev_completion = dispatch + n_iters * dur

    trace.sort()
    return trace


def run_concurrent_instances(
    requests: list[Request],
    params: CostParams,
    tp: TPConfig | None = None,
    record_tokens: bool = True,
) -> Trace:
    """Serve each request on its own model instance.

    An instance starts the moment its request clears preprocessing and
    needs actual_output_length iterations at its solo iteration time;
    with tensor parallelism every instance pays its own collective
    costs.  While k instances run together, all of them advance slower
    by contention_factor(k); the factor is re-evaluated at every start
    and finish, with remaining work carried across the change.
    """
    tp = tp or TPConfig()
    events = _prefix_events(requests, params)
    trace = Trace("concurrent", events)
    if not requests:
        return trace

    class _Inst:
        __slots__ = ("rid", "ready", "d", "length", "prog", "last_t")

        def __init__(self, rid, ready, d, length):
            self.rid = rid
            self.ready = ready
            self.d = d
            self.length = length
            self.prog = 0.0       # completed work, in units of tokens
            self.last_t = ready   # wall time of the previous token

    insts = []
    for r in sorted(requests, key=lambda r: (r.arrival_time, r.request_id)):
        d = iteration_time(1, r.batch_size * params.request_bytes, params, tp)
        insts.append(
            _Inst(r.request_id, r.arrival_time + params.preprocess_ms, d, r.actual_output_length)
        )
    insts.sort(key=lambda i: (i.ready, i.rid))

    running: list[_Inst] = []
    ptr = 0
    now = insts[0].ready

    def admit():
        nonlocal ptr
        while ptr < len(insts) and insts[ptr].ready <= now:
            inst = insts[ptr]
            ptr += 1
            inst.last_t = now
            running.append(inst)
            events.append(TraceEvent(now, EventKind.FUSED, inst.rid, None))

    admit()
    while running or ptr < len(insts):
        if not running:
            now = max(now, insts[ptr].ready)
            admit()
        factor = contention_factor(len(running), params)
        next_start = insts[ptr].ready if ptr < len(insts) else None

        t_fin = None
        for inst in running:
            t = now + (inst.length - inst.prog) * inst.d * factor
            if t_fin is None or t < t_fin:
                t_fin = t
        finishing = next_start is None or t_fin <= next_start
        t_next = t_fin if finishing else next_start

        done: list[_Inst] = []
        for inst in running:
            t_own = now + (inst.length - inst.prog) * inst.d * factor
            is_finisher = finishing and t_own == t_fin
            if is_finisher:
                new_prog = float(inst.length)
            else:
                new_prog = inst.prog + (t_next - now) / (inst.d * factor)
            first = math.floor(inst.prog) + 1
            last = inst.length if is_finisher else math.floor(new_prog)
            for j in range(first, last + 1):
                t_j = now + (j - inst.prog) * inst.d * factor
                if record_tokens:
                    events.append(TraceEvent(t_j, EventKind.TOKEN_GENERATED, inst.rid, j))
                    events.append(
                        TraceEvent(
                            t_j, EventKind.ITERATION_COMPLETED, inst.rid, t_j - inst.last_t
                        )
                    )
                inst.last_t = t_j
            inst.prog = new_prog
            if is_finisher:
                done.append(inst)
        now = t_next
        for inst in done:
            running.remove(inst)
            events.append(TraceEvent(t_fin, EventKind.EVICTED, inst.rid, None))
        admit()

    trace.sort()
    return trace
