"""Exception types shared across the simulator.

Every error raised on purpose by this package derives from SimulationError,
so callers can catch one base class at the CLI boundary.
"""


class SimulationError(Exception):
    """Base class for all errors raised by fusionsim."""


class InvalidParam(SimulationError):
    """A numeric or structural argument violates a precondition."""


class IllegalTransition(SimulationError):
    """A request phase transition that skips or revisits a phase."""


class AlreadyFinished(SimulationError):
    """Token recorded for a request that already produced its last token."""


class DuplicateRequest(SimulationError):
    """Request id fused twice into the same layout."""


class UnknownRequest(SimulationError):
    """Operation on a request id the layout does not hold."""


class CapacityExceeded(SimulationError):
    """Layout slot count would grow past its configured maximum."""


class StalePlan(SimulationError):
    """Shuffle plan applied to a layout mutated since the plan was built."""


class OracleBoundExceeded(SimulationError):
    """Brute-force oracle asked to search an array above its size bound."""


class EmptyStream(SimulationError):
    """Iteration stepped with no active requests in the stream."""


class IncompleteTrace(SimulationError):
    """Metrics requested from a trace missing part of a request lifecycle."""


class ConfigError(SimulationError):
    """Config file rejected; message carries the offending table and key."""


class CalibrationFailed(SimulationError):
    """No parameter value inside the search range meets the anchor target."""
