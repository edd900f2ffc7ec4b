"""Command-line interface.

    slicesla validate CONTRACT
    slicesla evaluate CONTRACT TRACE [--window-start TS] [--window-end TS] [--now TS] [--output REPORT]
    slicesla curve [CONTRACT] [--schedule NAME] [--resolution R] [--interpolate]
    slicesla simulate CONTRACT SCENARIO [--runs N] [--seed S] [--output SUMMARY]
    slicesla report REPORT

Exit codes: 0 success, 1 invalid contract (validate), 2 unreadable input,
3 evaluation error.
"""
import argparse
import logging
import sys
from dataclasses import replace
from decimal import Decimal
from decimal import InvalidOperation
from pathlib import Path
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional

from slicesla import __version__
from slicesla.availability import ObservationWindow
from slicesla.base.config import ConfigError
from slicesla.base.config import Settings
from slicesla.base.config import setup_logging
from slicesla.base.error import SliceSlaError
from slicesla.base.store import RecordStore
from slicesla.base.timeutil import parse_ts
from slicesla.contract.catalog import load_catalog
from slicesla.contract.error import SchemaError
from slicesla.contract.validate import validate_contract
from slicesla.evaluation import default_window
from slicesla.evaluation import evaluate_trace
from slicesla.formats.contract import load_contract
from slicesla.formats.error import FormatError
from slicesla.formats.report import emit_curve
from slicesla.formats.report import emit_report
from slicesla.formats.report import emit_runs_csv
from slicesla.formats.report import emit_summary
from slicesla.formats.report import load_report
from slicesla.formats.report import render_report
from slicesla.formats.report import render_summary
from slicesla.formats.scenario import load_scenario
from slicesla.formats.trace import load_trace
from slicesla.formats.trace import write_trace
from slicesla.penalty.schedule import BreakpointSchedule
from slicesla.penalty.schedule import linear_reference_schedule
from slicesla.penalty.schedule import nonlinear_reference_schedule
from slicesla.penalty.schedule import sample_curve
from slicesla.simulator import derive_seed
from slicesla.simulator import generate_trace
from slicesla.simulator import monte_carlo

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_EVALUATION = 3

REFERENCE_SCHEDULES: Dict[str, Callable[[], BreakpointSchedule]] = {
    "linear-reference": linear_reference_schedule,
    "nonlinear-reference": nonlinear_reference_schedule,
}


class UsageError(SliceSlaError):
    """Error raised for inconsistent command-line arguments."""


def _timestamp(value: str):
    try:
        return parse_ts(value)
    except ValueError:
        raise argparse.ArgumentTypeError("invalid timestamp {!r}, expected YYYY-MM-DDTHH:MM:SSZ".format(value))


def _resolution(value: str) -> Decimal:
    """A fraction (`0.002`) or a percent (`0.2%`)."""
    try:
        if value.endswith("%"):
            return Decimal(value[:-1]) / 100
        return Decimal(value)
    except InvalidOperation:
        raise argparse.ArgumentTypeError("invalid resolution {!r}".format(value))


def _write(path: Optional[str], text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args: argparse.Namespace, settings: Settings) -> int:
    contract = load_contract(args.contract)
    catalog = [] if args.no_catalog else load_catalog(args.catalog or settings.catalog)
    violations = validate_contract(contract, catalog)
    if not violations:
        print("{}: valid".format(args.contract))
        return EXIT_OK
    for violation in violations:
        print("{}: {}".format(args.contract, violation))
    return EXIT_INVALID


def cmd_evaluate(args: argparse.Namespace, settings: Settings) -> int:
    contract = load_contract(args.contract)
    events = load_trace(args.trace)

    window = None
    if args.window_start or args.window_end:
        lifetime = default_window(contract, args.now)
        window = ObservationWindow(args.window_start or lifetime.start, args.window_end or lifetime.end)
    store = RecordStore(settings.data_dir) if settings.data_dir else None

    report = evaluate_trace(contract, events, window=window, now=args.now, store=store)
    if args.output:
        _write(args.output, emit_report(report))
    _write(None, emit_report(report) if args.format == "json" else render_report(report))
    return EXIT_OK


def cmd_curve(args: argparse.Namespace, settings: Settings) -> int:
    if args.contract and args.schedule:
        raise UsageError("give either a contract or --schedule, not both")
    if args.contract:
        schedule = load_contract(args.contract).terms.schedule()
    else:
        schedule = REFERENCE_SCHEDULES[args.schedule or "linear-reference"]()

    resolution = args.resolution if args.resolution is not None else settings.resolution
    samples = sample_curve(schedule, resolution, interpolate=args.interpolate)
    _write(args.output, emit_curve(samples))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> int:
    contract = load_contract(args.contract)
    config = load_scenario(args.scenario)
    seed = args.seed if args.seed is not None else settings.seed
    if seed is not None:
        config = replace(config, seed=seed)
    runs = args.runs if args.runs is not None else settings.runs
    workers = args.workers if args.workers is not None else settings.workers

    if args.trace_output:
        first = replace(config, seed=derive_seed(config.seed, 0), start=config.start or contract.start_time)
        write_trace(generate_trace(first), args.trace_output)

    summary = monte_carlo(contract, config, runs, workers=workers)
    if args.output:
        _write(args.output, emit_summary(summary))
    if args.runs_csv:
        _write(args.runs_csv, emit_runs_csv(summary))
    _write(None, emit_summary(summary) if args.format == "json" else render_summary(summary))
    return EXIT_OK


def cmd_report(args: argparse.Namespace, settings: Settings) -> int:
    report = load_report(args.report)
    _write(args.output, emit_report(report) if args.format == "json" else render_report(report))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slicesla", description="SLA evaluation for network slices")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("--config", help="settings file (default: slicesla.yaml or $SLICESLA_CONFIG)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("validate", help="check a contract against its invariants and the QoS catalog")
    p.add_argument("contract")
    p.add_argument("--catalog", help="QoS catalog file (default: the packaged catalog)")
    p.add_argument("--no-catalog", action="store_true", help="skip the QoS catalog bounds")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", help="evaluate a contract against an event trace")
    p.add_argument("contract")
    p.add_argument("trace")
    p.add_argument("--window-start", type=_timestamp)
    p.add_argument("--window-end", type=_timestamp)
    p.add_argument("--now", type=_timestamp, help="evaluation instant, later events are ignored")
    p.add_argument("--output", help="write the JSON report to this file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("curve", help="sample an availability penalty schedule")
    p.add_argument("contract", nargs="?")
    p.add_argument("--schedule", choices=sorted(REFERENCE_SCHEDULES))
    p.add_argument("--resolution", type=_resolution, help="sampling step, a fraction or a percent (0.2%%)")
    p.add_argument("--interpolate", action="store_true", help="interpolate between breakpoints")
    p.add_argument("--output")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("simulate", help="Monte Carlo penalty exposure of a contract")
    p.add_argument("contract")
    p.add_argument("scenario")
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--output", help="write the JSON summary to this file")
    p.add_argument("--runs-csv", help="write the per-run results to this CSV file")
    p.add_argument("--trace-output", help="write the trace of the first run to this file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="render a saved JSON report")
    p.add_argument("report")
    p.add_argument("--output")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = Settings.load(args.config, log_level=args.log_level)
    except ConfigError as error:
        print("slicesla: {}".format(error), file=sys.stderr)
        return EXIT_PARSE
    setup_logging(settings.log_level)

    try:
        return args.func(args, settings)
    except (FormatError, SchemaError, UsageError, OSError) as error:
        print("slicesla: {}".format(error), file=sys.stderr)
        return EXIT_PARSE
    except SliceSlaError as error:
        logger.debug("command_failed", exc_info=True)
        print("slicesla: {}".format(error), file=sys.stderr)
        return EXIT_EVALUATION
