"""Command line entry point.

Verbs:
    run        execute every scenario in a config, write metrics CSV
    calibrate  fit cost parameters to the built-in anchors, write TOML
    oracle     cross-check the shuffle window search and report the
               byte-level packing comparison
    trace      run one (scenario, seed) cell, emit the event log

Exit codes: 0 success, 1 simulation error, 2 config error,
3 calibration failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .calibrate import CalibrationAnchors, calibrate, save_cost_params
from .config import load_config
from .errors import CalibrationFailed, ConfigError, SimulationError
from .oracle import all_binary_arrays, check_arrays, compare_against_byte_packing, random_weighted_arrays
from .scenario import run_scenario
from .suite import format_trace, run_suite

log = logging.getLogger("fusionsim")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fusionsim",
        description="Discrete-event model of fused-stream inference serving",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_run = sub.add_parser("run", help="run a scenario suite, write CSV metrics")
    p_run.add_argument("--config", required=True, help="TOML scenario config")
    p_run.add_argument("--out", required=True, help="output CSV path")
    p_run.add_argument("--verbose", action="store_true")

    p_cal = sub.add_parser("calibrate", help="fit cost parameters, write TOML")
    p_cal.add_argument("--out", required=True, help="output parameter file")
    p_cal.add_argument("--verbose", action="store_true")

    p_or = sub.add_parser("oracle", help="verify the shuffle search against oracles")
    p_or.add_argument("--seed", type=int, default=0)
    p_or.add_argument("--verbose", action="store_true")

    p_tr = sub.add_parser("trace", help="emit one cell's event log")
    p_tr.add_argument("--config", required=True, help="TOML scenario config")
    p_tr.add_argument("--seed", type=int, default=None, help="seed (default: scenario's first)")
    p_tr.add_argument("--out", default=None, help="write log here instead of stdout")
    p_tr.add_argument("--verbose", action="store_true")
    return parser


def _cmd_run(args) -> int:
    scenarios = load_config(args.config)
    results = run_suite(scenarios, args.out)
    log.info("ran %d cells over %d scenarios", len(results), len(scenarios))
    print(f"wrote {args.out}: {len(results)} cells, {len(scenarios)} scenarios")
    return 0


def _cmd_calibrate(args) -> int:
    anchors = CalibrationAnchors()
    params = calibrate(anchors)
    save_cost_params(params, args.out)
    print(
        f"wrote {args.out}: base_iteration_ms={params.base_iteration_ms!r} "
        f"contention_gamma={params.contention_gamma!r}"
    )
    return 0


def _cmd_oracle(args) -> int:
    binary = check_arrays(all_binary_arrays(12))
    weighted = check_arrays(random_weighted_arrays(1000, args.seed))
    print(f"binary arrays len 12: {binary.cases} cases, "
          f"{len(binary.mismatches)} mismatches")
    print(f"weighted arrays: {weighted.cases} cases, "
          f"{len(weighted.mismatches)} mismatches")
    cmp = compare_against_byte_packing(400, args.seed + 1)
    print(
        "byte-level packing comparison over "
        f"{cmp.cases} small layouts: equal {cmp.equal}, "
        f"slot model cheaper {cmp.slot_cheaper}, byte packing cheaper {cmp.byte_cheaper}"
    )
    for extents, occupied, slot_cost, byte_cost in cmp.examples:
        shown = ", ".join(
            str(ext) if occ else f"hole({ext})"
            for ext, occ in zip(extents, occupied)
        )
        print(f"  example [{shown}]: slot cost {slot_cost}, byte optimum {byte_cost}")
    if not (binary.ok and weighted.ok):
        for arr, got, want in (binary.mismatches + weighted.mismatches)[:5]:
            print(f"  MISMATCH {arr}: got offset {got}, oracle {want}")
        return 2
    return 0


def _cmd_trace(args) -> int:
    scenarios = load_config(args.config)
    scenario = scenarios[0]
    if len(scenarios) > 1:
        log.info("config has %d scenarios; tracing '%s'", len(scenarios), scenario.scenario_id)
    seed = args.seed if args.seed is not None else scenario.seeds[0]
    trace = run_scenario(scenario, seed)
    text = format_trace(trace)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}: {len(trace.events)} events")
    else:
        sys.stdout.write(text)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(name)s %(levelname)s %(message)s",
    )
    handlers = {
        "run": _cmd_run,
        "calibrate": _cmd_calibrate,
        "oracle": _cmd_oracle,
        "trace": _cmd_trace,
    }
    try:
        return handlers[args.verb](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CalibrationFailed as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return 3
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
