"""fusionsim: a desk-scale discrete-event model of fused-stream
autoregressive inference serving, its memory-shuffle policy, and the
batching and per-request baselines it is measured against."""

from .arrivals import (
    ArrivalSchedule,
    FixedLength,
    UniformLength,
    constant_schedule,
    overlap_ratio,
    poisson_schedule,
    sample_output_lengths,
    uniform_std,
)
from .baselines import BatchWindowConfig, run_concurrent_instances, run_dynamic_batching
from .buffer import (
    BufferLayout,
    ShufflePlan,
    Slot,
    apply_shuffle,
    brute_force_min_window,
    find_shuffled_memory_region,
    plan_shuffle,
)
from .calibrate import CalibrationAnchors, calibrate, save_cost_params
from .config import load_config
from .core import Context, Phase, Request, RuntimeInfo, advance_phase, record_token
from .cost import (
    CostParams,
    Placement,
    TPConfig,
    comm_time,
    contention_factor,
    iteration_time,
    shuffle_time,
)
from .engine import FusionStream, preprocess, run_fusion
from .errors import (
    AlreadyFinished,
    CalibrationFailed,
    CapacityExceeded,
    ConfigError,
    DuplicateRequest,
    EmptyStream,
    IllegalTransition,
    IncompleteTrace,
    InvalidParam,
    OracleBoundExceeded,
    SimulationError,
    StalePlan,
    UnknownRequest,
)
from .metrics import Metrics, compute_metrics
from .scenario import (
    ConstantArrival,
    Discipline,
    PoissonArrival,
    Scenario,
    build_requests,
    run_scenario,
)
from .suite import run_suite
from .trace import EventKind, Trace, TraceEvent

__version__ = "0.1.0"
