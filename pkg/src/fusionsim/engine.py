"""Fused-stream serving engine.

One compute stream serves every request at once.  An iteration is
atomic: each active request gains exactly one token, then the boundary
work runs (evictions, window trims, an optional shuffle) and only at
that boundary may freshly preprocessed requests join.  Preprocessing
happens on independent threads, so it is modelled as a pure per-request
delay; the stream never blocks on it.

The stream sleeps while it has nothing fused: simulated time jumps to
the next context's ready time instead of spinning through empty
iterations.
"""

from __future__ import annotations

from .buffer import BufferLayout, apply_shuffle, plan_shuffle
from .core import Context, Phase, Request, RuntimeInfo, advance_phase, record_token
from .cost import CostParams, TPConfig, iteration_time, shuffle_time
from .errors import EmptyStream
from .trace import EventKind, Trace, TraceEvent


def preprocess(request: Request, params: CostParams, now: float) -> Context:
    """Turn a received request into a fusion-ready context.

    The returned context becomes ready a flat preprocess_ms after `now`;
    its runtime record starts with no tokens and no buffer slot.
    """
    info = RuntimeInfo(
        request_id=request.request_id,
        memory_offset=None,
        tensor_size=request.batch_size * params.request_bytes,
        device_type="gpu",
        max_output_length=request.max_output_length,
        current_iteration=0,
    )
    return Context(
        request_id=request.request_id,
        ready_time=now + params.preprocess_ms,
        runtime=info,
    )


class FusionStream:
    """Mutable state of one fused serving stream mid-simulation."""

    def __init__(
        self,
        requests: list[Request],
        params: CostParams,
        tp: TPConfig,
        shuffle_enabled: bool = True,
        record_tokens: bool = True,
        slot_capacity: int | None = None,
    ):
        self.params = params
        self.tp = tp
        self.shuffle_enabled = shuffle_enabled
        self.record_tokens = record_tokens
        self.now = 0.0
        self.iteration_index = 0
        self.layout = BufferLayout(capacity=slot_capacity)
        self.active: dict[int, RuntimeInfo] = {}
        self.eos_at: dict[int, int] = {}
        self.phase: dict[int, Phase] = {}
        self.events: list[TraceEvent] = []

        # Preprocessing threads start the moment a request arrives, so
        # every context and its lifecycle prefix are known up front.
        pending: list[Context] = []
        for req in sorted(requests, key=lambda r: (r.arrival_time, r.request_id)):
            self.phase[req.request_id] = Phase.RECEIVED
            self._emit(req.arrival_time, EventKind.ARRIVED, req.request_id)
            self.phase[req.request_id] = advance_phase(
                self.phase[req.request_id], Phase.PREPROCESSING
            )
            self._emit(req.arrival_time, EventKind.PREPROCESS_START, req.request_id)
            ctx = preprocess(req, params, req.arrival_time)
            self._emit(ctx.ready_time, EventKind.PREPROCESS_DONE, req.request_id)
            self.eos_at[req.request_id] = req.actual_output_length
            pending.append(ctx)
        pending.sort(key=lambda c: (c.ready_time, c.request_id))
        self.pending: list[Context] = pending
        self._next_pending = 0

    def _emit(self, time, kind, request_id=None, value=None):
        self.events.append(TraceEvent(time, kind, request_id, value))

    # -- queue handling --------------------------------------------------

    def next_ready_time(self) -> float | None:
        if self._next_pending >= len(self.pending):
            return None
        return self.pending[self._next_pending].ready_time

    def try_fuse_pending(self) -> int:
        """Admit every context whose ready time has passed, in FIFO
        order; a context ready exactly at this boundary joins now."""
        fused = 0
        while self._next_pending < len(self.pending):
            ctx = self.pending[self._next_pending]
            if ctx.ready_time > self.now:
                break
            self._next_pending += 1
            slot = self.layout.fuse_request(ctx.request_id, ctx.runtime.tensor_size)
            info = RuntimeInfo(
                request_id=ctx.request_id,
                memory_offset=slot,
                tensor_size=ctx.runtime.tensor_size,
                device_type=ctx.runtime.device_type,
                max_output_length=ctx.runtime.max_output_length,
                current_iteration=ctx.runtime.current_iteration,
            )
            self.active[ctx.request_id] = info
            self.phase[ctx.request_id] = advance_phase(
                self.phase[ctx.request_id], Phase.READY_FOR_FUSION
            )
            self.phase[ctx.request_id] = advance_phase(
                self.phase[ctx.request_id], Phase.RUNNING
            )
            self._emit(self.now, EventKind.FUSED, ctx.request_id)
            fused += 1
        return fused

    # -- the atomic unit -------------------------------------------------

    def step_iteration(self) -> None:
        """Run one iteration and its boundary work.

        Order at the boundary: tokens land, finished requests leave,
        the window is trimmed, then (with shuffling on) orphaned holes
        left by this iteration's evictions are compacted away and the
        copy time is charged before anything else can happen.
        """
        if not self.active:
            raise EmptyStream("no fused requests to iterate")
        duration = iteration_time(
            len(self.active), self.layout.live_bytes(), self.params, self.tp
        )
        self.now += duration

        finished: list[int] = []
        for rid in self.active:
            info, done = record_token(self.active[rid], self.eos_at[rid])
            self.active[rid] = info
            if self.record_tokens:
                self._emit(
                    self.now, EventKind.TOKEN_GENERATED, rid, info.current_iteration
                )
            if done:
                finished.append(rid)
        for rid in finished:
            self.layout.evict_request(rid)
            del self.active[rid]
            self.phase[rid] = advance_phase(self.phase[rid], Phase.FINISHED)
            self._emit(self.now, EventKind.EVICTED, rid)
        self._emit(self.now, EventKind.ITERATION_COMPLETED, None, duration)
        self.iteration_index += 1

        if self.shuffle_enabled:
            self.layout.trim_boundaries()
            if finished and self.layout.has_interior_holes():
                plan = plan_shuffle(self.layout)
                if plan.moves:
                    apply_shuffle(self.layout, plan)
                    self.now += shuffle_time(plan.total_bytes_moved, self.params)
                    self._emit(
                        self.now,
                        EventKind.SHUFFLE_EXECUTED,
                        None,
                        plan.total_bytes_moved,
                    )
        else:
            # Plain FIFO release only: holes behind still-running
            # requests stay in the live window and keep costing.
            self.layout.trim_leading()

    def finished_all(self) -> bool:
        return not self.active and self._next_pending >= len(self.pending)


def run_fusion(
    requests: list[Request],
    params: CostParams,
    tp: TPConfig | None = None,
    shuffle_enabled: bool = True,
    record_tokens: bool = True,
) -> Trace:
    """Serve every request to completion on one fused stream."""
    tp = tp or TPConfig()
    stream = FusionStream(
        requests,
        params,
        tp,
        shuffle_enabled=shuffle_enabled,
        record_tokens=record_tokens,
    )
    while not stream.finished_all():
        if not stream.active:
            stream.now = max(stream.now, stream.next_ready_time())
        stream.try_fuse_pending()
        stream.step_iteration()
    name = "fusion" if shuffle_enabled else "fusion_noshuffle"
    trace = Trace(name, stream.events)
    trace.sort()
    return trace
