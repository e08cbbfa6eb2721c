"""Arrival schedules and output-length sampling.

Schedules are value objects: a list of (request_id, arrival_time_ms)
pairs with non-decreasing times.  Poisson arrivals draw exponential
gaps by inverse CDF from the package's own generator (see rng.py), so
a schedule is a pure function of (n, mean, seed, start).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParam
from .rng import Xorshift64Star


@dataclass(frozen=True)
class ArrivalSchedule:
    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        last = None
        for _, t in self.entries:
            if last is not None and t < last:
                raise InvalidParam("arrival times must be non-decreasing")
            last = t

    def times(self) -> list[float]:
        return [t for _, t in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class FixedLength:
    tokens: int

    def __post_init__(self):
        if self.tokens < 1:
            raise InvalidParam("fixed length must be >= 1")


@dataclass(frozen=True)
class UniformLength:
    """Inclusive integer range [lo, hi] of output lengths."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 1 or self.hi < self.lo:
            raise InvalidParam(f"need 1 <= lo <= hi, got [{self.lo}, {self.hi}]")


LengthDistribution = FixedLength | UniformLength


def constant_schedule(n: int, interval_ms: float, start_ms: float = 0.0) -> ArrivalSchedule:
    """Evenly spaced arrivals: request i arrives at start + i * interval."""
    if n < 1:
        raise InvalidParam("n must be >= 1")
    if interval_ms < 0:
        raise InvalidParam("interval_ms must be >= 0")
    return ArrivalSchedule(tuple((i, start_ms + i * interval_ms) for i in range(n)))


def poisson_schedule(
    n: int, mean_interval_ms: float, seed: int, start_ms: float = 0.0
) -> ArrivalSchedule:
    """Poisson process: the first request arrives at start, later ones
    after independent exponential gaps with the given mean."""
    if n < 1:
        raise InvalidParam("n must be >= 1")
    if mean_interval_ms <= 0:
        raise InvalidParam("mean_interval_ms must be > 0")
    gen = Xorshift64Star(seed)
    entries = [(0, start_ms)]
    t = start_ms
    for i in range(1, n):
        t += gen.exponential(mean_interval_ms)
        entries.append((i, t))
    return ArrivalSchedule(tuple(entries))


def sample_output_lengths(n: int, dist: LengthDistribution, seed: int) -> list[int]:
    if n < 1:
        raise InvalidParam("n must be >= 1")
    if isinstance(dist, FixedLength):
        return [dist.tokens] * n
    gen = Xorshift64Star(seed)
    return [gen.uniform_int(dist.lo, dist.hi) for _ in range(n)]


def overlap_ratio(runtime_ms: float, gap_ms: float) -> float:
    """Fraction of two neighbouring requests' runtimes that can be
    served together when one full request takes runtime_ms and the
    second arrives gap_ms later.  Zero once the gap reaches the
    runtime, since the first request has already finished."""
    if runtime_ms <= 0:
        raise InvalidParam("runtime_ms must be > 0")
    if gap_ms < 0:
        raise InvalidParam("gap_ms must be >= 0")
    if runtime_ms <= gap_ms:
        return 0.0
    return (runtime_ms - gap_ms) / (runtime_ms + gap_ms)


def uniform_std(lo: float, hi: float) -> float:
    """Standard deviation of the continuous uniform on [lo, hi]."""
    if hi < lo:
        raise InvalidParam("need lo <= hi")
    return math.sqrt((hi - lo) ** 2 / 12.0)
