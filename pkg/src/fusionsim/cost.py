"""Parametric timing model.

All times are milliseconds, all sizes bytes.  The defaults reproduce a
512-token request in 6000 ms on one device (base = 6000/512) and treat
small fused groups as free: below `capacity` concurrent requests an
iteration costs the base time, above it each extra request adds a small
marginal term.  Collectives follow the usual latency/bandwidth form
alpha + beta * bytes, with one (alpha, beta) pair per link placement.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParam

BASE_ITERATION_MS = 6000.0 / 512.0


class Placement(Enum):
    INTRA = "intra"   # devices on one node, NVLink-class links
    INTER = "inter"   # devices across nodes, network links


@dataclass(frozen=True)
class TPConfig:
    tp_size: int = 1
    placement: Placement = Placement.INTRA

    def __post_init__(self):
        if self.tp_size < 1:
            raise InvalidParam("tp_size must be >= 1")


@dataclass(frozen=True)
class CostParams:
    base_iteration_ms: float = BASE_ITERATION_MS
    marginal_per_request_ms: float = 0.05
    capacity: int = 4
    preprocess_ms: float = BASE_ITERATION_MS
    alpha_intra_ms: float = 0.02
    alpha_inter_ms: float = 0.2
    beta_intra_ms_per_byte: float = 2.0e-5
    beta_inter_ms_per_byte: float = 8.0e-5
    memcpy_beta_ms_per_byte: float = 1.0e-6
    contention_gamma: float = 0.35
    request_bytes: int = 1_000_000

    def __post_init__(self):
        if self.base_iteration_ms <= 0:
            raise InvalidParam("base_iteration_ms must be > 0")
        if self.marginal_per_request_ms < 0:
            raise InvalidParam("marginal_per_request_ms must be >= 0")
        if self.capacity < 1:
            raise InvalidParam("capacity must be >= 1")
        if self.preprocess_ms < 0:
            raise InvalidParam("preprocess_ms must be >= 0")
        for name in (
            "alpha_intra_ms",
            "alpha_inter_ms",
            "beta_intra_ms_per_byte",
            "beta_inter_ms_per_byte",
            "memcpy_beta_ms_per_byte",
            "contention_gamma",
        ):
            if getattr(self, name) < 0:
                raise InvalidParam(f"{name} must be >= 0")
        if self.request_bytes < 1:
            raise InvalidParam("request_bytes must be >= 1")


def comm_time(message_bytes: float, tp: TPConfig, params: CostParams) -> float:
    """Per-iteration collective cost: two all-reduces plus one
    all-gather, each alpha + beta * message_bytes on the placement's
    link parameters."""
    if tp.tp_size < 2:
        raise InvalidParam("collectives need tp_size >= 2")
    if message_bytes < 0:
        raise InvalidParam("message_bytes must be >= 0")
    if tp.placement is Placement.INTRA:
        alpha, beta = params.alpha_intra_ms, params.beta_intra_ms_per_byte
    else:
        alpha, beta = params.alpha_inter_ms, params.beta_inter_ms_per_byte
    per_call = alpha + beta * message_bytes
    return 2.0 * per_call + per_call


def iteration_time(
    active: int, live_bytes: float, params: CostParams, tp: TPConfig
) -> float:
    """Wall time of one generation iteration.

    The compute part charges the base cost plus a marginal term for
    requests beyond the free capacity.  With tensor parallelism the
    collectives ride on the whole live window, so orphaned bytes in
    the window make every iteration slower; the per-device message is
    the live extent split tp_size ways.
    """
    if active < 1:
        raise InvalidParam("active must be >= 1")
    if live_bytes < 0:
        raise InvalidParam("live_bytes must be >= 0")
    t = params.base_iteration_ms + params.marginal_per_request_ms * max(
        0, active - params.capacity
    )
    if tp.tp_size > 1:
        t += comm_time(live_bytes / tp.tp_size, tp, params)
    return t


def contention_factor(k: int, params: CostParams) -> float:
    """Slowdown of k model instances sharing one device pool."""
    if k < 1:
        raise InvalidParam("k must be >= 1")
    return 1.0 + params.contention_gamma * (k - 1)


def shuffle_time(bytes_moved: float, params: CostParams) -> float:
    """Device-to-device copy cost of relocating bytes inside the buffer."""
    if bytes_moved < 0:
        raise InvalidParam("bytes_moved must be >= 0")
    return params.memcpy_beta_ms_per_byte * bytes_moved
