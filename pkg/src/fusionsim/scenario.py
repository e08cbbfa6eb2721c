"""Experiment scenarios.

A scenario fixes everything about a run except the seed: the serving
discipline, the arrival process, the output-length distribution, the
parallelism layout and the cost parameters.  One (scenario, seed) cell
deterministically yields one trace.  The seed is split into independent
substreams for arrival gaps and output lengths, so changing the length
distribution never perturbs the arrival times.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .arrivals import (
    ArrivalSchedule,
    FixedLength,
    LengthDistribution,
    UniformLength,
    constant_schedule,
    poisson_schedule,
    sample_output_lengths,
)
from .baselines import (
    BatchWindowConfig,
    run_concurrent_instances,
    run_dynamic_batching,
)
from .core import Request
from .cost import CostParams, TPConfig
from .engine import run_fusion
from .errors import ConfigError
from .rng import derive_seed
from .trace import Trace

_ARRIVAL_STREAM = 1
_LENGTH_STREAM = 2


class Discipline(Enum):
    FUSION = "fusion"
    FUSION_NO_SHUFFLE = "fusion_noshuffle"
    DYNAMIC_BATCHING = "dynamic_batching"
    CONCURRENT = "concurrent"


@dataclass(frozen=True)
class ConstantArrival:
    interval_ms: float


@dataclass(frozen=True)
class PoissonArrival:
    mean_interval_ms: float


ArrivalSpec = ConstantArrival | PoissonArrival


@dataclass(frozen=True)
class Scenario:
    scenario_id: str
    discipline: Discipline
    n_requests: int
    arrival: ArrivalSpec
    lengths: LengthDistribution
    max_output_length: int
    batch_size: int = 1
    input_len: int = 32
    tp: TPConfig = field(default_factory=TPConfig)
    seeds: tuple[int, ...] = (0,)
    cost: CostParams = field(default_factory=CostParams)
    window_ms: float | None = None
    max_batch: int | None = None

    def validate(self) -> None:
        if self.n_requests < 1:
            raise ConfigError(f"scenario {self.scenario_id}: n_requests must be >= 1")
        if not self.seeds:
            raise ConfigError(f"scenario {self.scenario_id}: needs at least one seed")
        if isinstance(self.lengths, FixedLength):
            upper = self.lengths.tokens
        else:
            upper = self.lengths.hi
        if upper > self.max_output_length:
            raise ConfigError(
                f"scenario {self.scenario_id}: length distribution can exceed "
                f"max_output_length ({upper} > {self.max_output_length})"
            )
        if self.discipline is Discipline.DYNAMIC_BATCHING and self.window_ms is None:
            raise ConfigError(
                f"scenario {self.scenario_id}: dynamic_batching needs window_ms"
            )


def build_schedule(scenario: Scenario, seed: int) -> ArrivalSchedule:
    if isinstance(scenario.arrival, ConstantArrival):
        return constant_schedule(scenario.n_requests, scenario.arrival.interval_ms)
    return poisson_schedule(
        scenario.n_requests,
        scenario.arrival.mean_interval_ms,
        derive_seed(seed, _ARRIVAL_STREAM),
    )


def build_requests(scenario: Scenario, seed: int) -> list[Request]:
    """Materialize the scenario's request list for one seed."""
    scenario.validate()
    schedule = build_schedule(scenario, seed)
    lengths = sample_output_lengths(
        scenario.n_requests, scenario.lengths, derive_seed(seed, _LENGTH_STREAM)
    )
    return [
        Request(
            request_id=rid,
            batch_size=scenario.batch_size,
            input_len=scenario.input_len,
            max_output_length=scenario.max_output_length,
            actual_output_length=lengths[rid],
            arrival_time=t,
        )
        for rid, t in schedule.entries
    ]


def run_scenario(scenario: Scenario, seed: int, record_tokens: bool = True) -> Trace:
    """Run one (scenario, seed) cell and return its trace."""
    requests = build_requests(scenario, seed)
    if scenario.discipline in (Discipline.FUSION, Discipline.FUSION_NO_SHUFFLE):
        return run_fusion(
            requests,
            scenario.cost,
            scenario.tp,
            shuffle_enabled=scenario.discipline is Discipline.FUSION,
            record_tokens=record_tokens,
        )
    if scenario.discipline is Discipline.DYNAMIC_BATCHING:
        cfg = BatchWindowConfig(scenario.window_ms, scenario.max_batch)
        return run_dynamic_batching(
            requests, cfg, scenario.cost, scenario.tp, record_tokens=record_tokens
        )
    return run_concurrent_instances(
        requests, scenario.cost, scenario.tp, record_tokens=record_tokens
    )
