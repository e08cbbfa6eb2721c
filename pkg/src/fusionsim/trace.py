"""Event traces.

Every discipline emits the same flat event stream so metrics and tests
never care which engine produced a trace.  Events are kept in timestamp
order; ties preserve emission order, which follows each request's
lifecycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class EventKind(Enum):
    ARRIVED = "arrived"
    PREPROCESS_START = "preprocess_start"
    PREPROCESS_DONE = "preprocess_done"
    FUSED = "fused"
    TOKEN_GENERATED = "token"
    EVICTED = "evicted"
    SHUFFLE_EXECUTED = "shuffle"
    ITERATION_COMPLETED = "iteration"


@dataclass(frozen=True, slots=True)
class TraceEvent:
    time: float
    kind: EventKind
    request_id: int | None
    # TOKEN_GENERATED: token index; SHUFFLE_EXECUTED: bytes moved;
    # ITERATION_COMPLETED: iteration duration in ms; otherwise None.
    value: float | int | None


@dataclass
class Trace:
    discipline: str
    events: list[TraceEvent]

    def sort(self) -> None:
        self.events.sort(key=lambda e: e.time)

    def of_kind(self, kind: EventKind) -> list[TraceEvent]:
        return [e for e in self.events if e.kind is kind]

    def format_lines(self) -> list[str]:
        """One event per line: timestamp, kind, request id, value."""
        out = []
        for e in self.events:
            rid = "-" if e.request_id is None else str(e.request_id)
            val = "-" if e.value is None else repr(e.value)
            out.append(f"{e.time:.6f}\t{e.kind.value}\t{rid}\t{val}")
        return out
