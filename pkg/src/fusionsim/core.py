"""Request lifecycle primitives.

A request moves through five phases in a fixed order; nothing ever
skips ahead or returns to an earlier phase.  The runtime info record is
the per-request bookkeeping the serving stream carries: where the
request's buffer sits, how large it is, and how many tokens it has
produced so far.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum, auto

from .errors import AlreadyFinished, IllegalTransition, InvalidParam


class Phase(Enum):
    RECEIVED = auto()          # arrived, waiting for a preprocessing thread
    PREPROCESSING = auto()     # tokenization / setup in flight
    READY_FOR_FUSION = auto()  # queued for admission into the stream
    RUNNING = auto()           # fused; gains one token per iteration
    FINISHED = auto()          # produced its last token and was evicted

    def successor(self) -> "Phase | None":
        order = list(Phase)
        idx = order.index(self)
        return order[idx + 1] if idx + 1 < len(order) else None


def advance_phase(current: Phase, target: Phase) -> Phase:
    """Step a request to the next phase; only the immediate successor is legal."""
    if target is not current.successor():
        raise IllegalTransition(f"cannot move {current.name} -> {target.name}")
    return target


@dataclass(frozen=True)
class Request:
    """One inference request as submitted by a client.

    actual_output_length is the number of tokens the request will really
    produce before emitting its end marker.  The serving side cannot see
    it up front; the simulator uses it to decide when generation stops.
    """

    request_id: int
    batch_size: int
    input_len: int
    max_output_length: int
    actual_output_length: int
    arrival_time: float

    def __post_init__(self):
        if self.batch_size < 1:
            raise InvalidParam(f"batch_size must be >= 1, got {self.batch_size}")
        if self.input_len < 1:
            raise InvalidParam(f"input_len must be >= 1, got {self.input_len}")
        if self.max_output_length < 1:
            raise InvalidParam("max_output_length must be >= 1")
        if not (1 <= self.actual_output_length <= self.max_output_length):
            raise InvalidParam(
                "actual_output_length must lie in [1, max_output_length], got "
                f"{self.actual_output_length} with max {self.max_output_length}"
            )
        if self.arrival_time < 0:
            raise InvalidParam("arrival_time must be >= 0")


@dataclass(frozen=True)
class RuntimeInfo:
    """Per-request state the stream updates every iteration.

    memory_offset is the slot index inside the live buffer window, or
    None while the request has not been fused yet.  device_type is an
    inert placement tag carried for interface completeness; no cost in
    this model depends on it.
    """

    request_id: int
    memory_offset: int | None
    tensor_size: int
    device_type: str
    max_output_length: int
    current_iteration: int

    def __post_init__(self):
        if self.tensor_size < 1:
            raise InvalidParam("tensor_size must be positive")
        if self.current_iteration < 0:
            raise InvalidParam("current_iteration must be >= 0")


@dataclass(frozen=True)
class Context:
    """A preprocessed request waiting to be fused.

    Everything the real system would carry in the context (token ids,
    sampling config) is abstracted to a readiness timestamp plus the
    runtime record the stream will adopt on fusion.
    """

    request_id: int
    ready_time: float
    runtime: RuntimeInfo


def record_token(info: RuntimeInfo, eos_at: int) -> tuple[RuntimeInfo, bool]:
    """Advance a running request by one generated token.

    Returns the updated record and True when that token was the last
    one, either because the request hit eos_at or because it exhausted
    max_output_length.
    """
    if eos_at < 1:
        raise InvalidParam("eos_at must be >= 1")
    stop_at = min(eos_at, info.max_output_length)
    if info.current_iteration >= stop_at:
        raise AlreadyFinished(
            f"request {info.request_id} already produced its final token"
        )
    advanced = replace(info, current_iteration=info.current_iteration + 1)
    return advanced, advanced.current_iteration == stop_at
