"""TOML experiment configs.

The schema is small and checked hard: any key the parser does not
recognize is an error naming the table and key, so a typo like
`interval_mss` can never silently fall back to a default.

Top level:

    [suite]                optional; keys: seeds, cost_file
    [cost]                 optional CostParams overrides, field names as keys
    [[scenario]]           one table per scenario (at least one required)

Scenario keys: id, discipline, n_requests, arrival ("constant" |
"poisson"), interval_ms, lengths ("fixed" | "uniform"), length_tokens,
length_min, length_max, max_output_length, batch_size, input_len,
tp_size, placement ("intra" | "inter"), seeds, window_ms, max_batch,
plus an optional [scenario.cost] override table.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python < 3.11
    import tomli as tomllib

from .arrivals import FixedLength, UniformLength
from .cost import CostParams, Placement, TPConfig
from .errors import ConfigError
from .scenario import ConstantArrival, Discipline, PoissonArrival, Scenario

_COST_FIELDS = {f.name: f for f in dataclasses.fields(CostParams)}

_SCENARIO_KEYS = {
    "id",
    "discipline",
    "n_requests",
    "arrival",
    "interval_ms",
    "lengths",
    "length_tokens",
    "length_min",
    "length_max",
    "max_output_length",
    "batch_size",
    "input_len",
    "tp_size",
    "placement",
    "seeds",
    "window_ms",
    "max_batch",
    "cost",
}

_SUITE_KEYS = {"seeds", "cost_file"}


def _reject_unknown(table: dict, allowed: set, where: str) -> None:
    for key in table:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in [{where}]")


def _need(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError(f"missing key '{key}' in [{where}]")
    return table[key]


def _as_number(value, key: str, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key '{key}' in [{where}] must be a number")
    return float(value)


def _as_int(value, key: str, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"key '{key}' in [{where}] must be an integer")
    return value


def parse_cost_table(table: dict, where: str, base: CostParams | None = None) -> CostParams:
    _reject_unknown(table, set(_COST_FIELDS), where)
    kwargs = {}
    for key, value in table.items():
        f = _COST_FIELDS[key]
        if f.type in ("int", int):
            kwargs[key] = _as_int(value, key, where)
        else:
            kwargs[key] = _as_number(value, key, where)
    if base is None:
        base = CostParams()
    return dataclasses.replace(base, **kwargs)


def _parse_seeds(value, where: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"key 'seeds' in [{where}] must be a non-empty list")
    return tuple(_as_int(v, "seeds", where) for v in value)


def _parse_scenario(
    table: dict, index: int, default_seeds: tuple[int, ...], base_cost: CostParams
) -> Scenario:
    where = f"scenario #{index}"
    if not isinstance(table, dict):
        raise ConfigError(f"[{where}] must be a table")
    _reject_unknown(table, _SCENARIO_KEYS, where)

    sid = table.get("id", f"scenario{index}")
    if not isinstance(sid, str) or not sid:
        raise ConfigError(f"key 'id' in [{where}] must be a non-empty string")
    where = f"scenario '{sid}'"

    disc_raw = _need(table, "discipline", where)
    try:
        discipline = Discipline(disc_raw)
    except ValueError:
        names = ", ".join(d.value for d in Discipline)
        raise ConfigError(
            f"key 'discipline' in [{where}] must be one of: {names}"
        ) from None

    arrival_kind = _need(table, "arrival", where)
    interval = _as_number(_need(table, "interval_ms", where), "interval_ms", where)
    if arrival_kind == "constant":
        arrival = ConstantArrival(interval)
    elif arrival_kind == "poisson":
        arrival = PoissonArrival(interval)
    else:
        raise ConfigError(
            f"key 'arrival' in [{where}] must be 'constant' or 'poisson'"
        )

    lengths_kind = _need(table, "lengths", where)
    if lengths_kind == "fixed":
        lengths = FixedLength(
            _as_int(_need(table, "length_tokens", where), "length_tokens", where)
        )
        for bad in ("length_min", "length_max"):
            if bad in table:
                raise ConfigError(f"key '{bad}' in [{where}] only applies to uniform lengths")
    elif lengths_kind == "uniform":
        lengths = UniformLength(
            _as_int(_need(table, "length_min", where), "length_min", where),
            _as_int(_need(table, "length_max", where), "length_max", where),
        )
        if "length_tokens" in table:
            raise ConfigError(
                f"key 'length_tokens' in [{where}] only applies to fixed lengths"
            )
    else:
        raise ConfigError(f"key 'lengths' in [{where}] must be 'fixed' or 'uniform'")

    placement_raw = table.get("placement", "intra")
    try:
        placement = Placement(placement_raw)
    except ValueError:
        raise ConfigError(
            f"key 'placement' in [{where}] must be 'intra' or 'inter'"
        ) from None

    cost = base_cost
    if "cost" in table:
        if not isinstance(table["cost"], dict):
            raise ConfigError(f"[{where}.cost] must be a table")
        cost = parse_cost_table(table["cost"], f"{where}.cost", base=base_cost)

    seeds = default_seeds
    if "seeds" in table:
        seeds = _parse_seeds(table["seeds"], where)

    window_ms = None
    if "window_ms" in table:
        window_ms = _as_number(table["window_ms"], "window_ms", where)
    max_batch = None
    if "max_batch" in table:
        max_batch = _as_int(table["max_batch"], "max_batch", where)

    scenario = Scenario(
        scenario_id=sid,
        discipline=discipline,
        n_requests=_as_int(_need(table, "n_requests", where), "n_requests", where),
        arrival=arrival,
        lengths=lengths,
        max_output_length=_as_int(
            _need(table, "max_output_length", where), "max_output_length", where
        ),
        batch_size=_as_int(table.get("batch_size", 1), "batch_size", where),
        input_len=_as_int(table.get("input_len", 32), "input_len", where),
        tp=TPConfig(
            tp_size=_as_int(table.get("tp_size", 1), "tp_size", where),
            placement=placement,
        ),
        seeds=seeds,
        cost=cost,
        window_ms=window_ms,
        max_batch=max_batch,
    )
    scenario.validate()
    return scenario


def load_config(path: str | Path) -> list[Scenario]:
    """Parse a config file into validated scenarios."""
    raw = Path(path).read_bytes()
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: not valid TOML: {exc}") from None

    _reject_unknown(doc, {"suite", "cost", "scenario"}, "top level")

    suite = doc.get("suite", {})
    if not isinstance(suite, dict):
        raise ConfigError("[suite] must be a table")
    _reject_unknown(suite, _SUITE_KEYS, "suite")
    default_seeds = (0,)
    if "seeds" in suite:
        default_seeds = _parse_seeds(suite["seeds"], "suite")

    base_cost = CostParams()
    if "cost_file" in suite:
        ref = suite["cost_file"]
        if not isinstance(ref, str):
            raise ConfigError("key 'cost_file' in [suite] must be a string")
        cost_path = Path(path).parent / ref
        if not cost_path.exists():
            raise ConfigError(f"cost_file '{ref}' not found next to {path}")
        sub = tomllib.loads(cost_path.read_text())
        _reject_unknown(sub, {"cost"}, f"cost file {ref}")
        base_cost = parse_cost_table(sub.get("cost", {}), f"{ref}:cost")

    if "cost" in doc:
        if not isinstance(doc["cost"], dict):
            raise ConfigError("[cost] must be a table")
        base_cost = parse_cost_table(doc["cost"], "cost", base=base_cost)

    raw_scenarios = doc.get("scenario")
    if not raw_scenarios:
        raise ConfigError("config needs at least one [[scenario]] table")
    if not isinstance(raw_scenarios, list):
        raise ConfigError("[[scenario]] must be an array of tables")

    scenarios = [
        _parse_scenario(tbl, i, default_seeds, base_cost)
        for i, tbl in enumerate(raw_scenarios)
    ]
    seen = set()
    for s in scenarios:
        if s.scenario_id in seen:
            raise ConfigError(f"duplicate scenario id '{s.scenario_id}'")
        seen.add(s.scenario_id)
    return scenarios
