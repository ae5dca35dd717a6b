"""
Command line entry point: ``fflab list | run | sweep | baseline | table``.

Exit codes are 0 when every scenario passed or only reported, 1 when a scenario failed and 2 for configuration,
baseline and IO errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from ..config import get_settings, override_settings
from ..errors import ConfigurationError, FFLabError
from .baselines import BaselineStore, regenerate
from .renderer import ReportFormat, RendererFactory
from .runner import render_json, run_scenario, sweep
from .scenario import Parameters, all_scenarios, get_scenario
from .table import exponent_table

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_CONFIGURATION = 0, 1, 2
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _csv(cast: Callable[[str], object]) -> Callable[[str], List]:
    def parse(value: str) -> List:
        try:
            return [cast(item.strip()) for item in value.split(",") if item.strip()]
        except ValueError as error:
            raise argparse.ArgumentTypeError(f"{value!r} is not a comma separated list: {error}") from error

    return parse


def _configure_logging(verbose: int) -> None:
    level = logging.DEBUG if verbose > 1 else logging.INFO if verbose else get_settings().log_level
    root = logging.getLogger("fflab")
    if not any(getattr(handler, "_fflab", False) for handler in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        setattr(handler, "_fflab", True)
        root.addHandler(handler)
    root.setLevel(level)


def _list(arguments: argparse.Namespace) -> int:
    del arguments
    renderer = RendererFactory.listing()
    for registered in all_scenarios():
        line = renderer.render(
            {
                "id": registered.id,
                "kind": registered.kind.value,
                "dims": tuple(registered.dims),
                "anchor": registered.anchor,
            }
        )
        print(line.rstrip("\n"))
    return EXIT_OK


def _run(arguments: argparse.Namespace) -> int:
    registered = get_scenario(arguments.scenario)
    defaults = registered.default_parameters(arguments.seed)
    parameters = Parameters(
        arguments.prime if arguments.prime is not None else defaults.prime,
        arguments.dim if arguments.dim is not None else defaults.dim,
        arguments.trials if arguments.trials is not None else defaults.trials,
        arguments.seed,
    )
    try:
        report = run_scenario(registered.id, parameters)
    except ValueError as error:
        if isinstance(error, FFLabError):
            raise
        raise ConfigurationError(str(error)) from error
    payload = render_json([report], arguments.timings)
    if arguments.out is None:
        sys.stdout.write(payload)
    else:
        try:
            Path(arguments.out).parent.mkdir(parents=True, exist_ok=True)
            Path(arguments.out).write_text(payload, encoding="utf-8")
        except OSError as error:
            raise OSError(f"cannot write {arguments.out}: {error}") from error
    print(f"{report.scenario}: {report.status.value} (metric {report.metric:.6g})", file=sys.stderr)
    return EXIT_FAILED if report.failed else EXIT_OK


def _sweep(arguments: argparse.Namespace) -> int:
    ids = arguments.ids or [registered.id for registered in all_scenarios()]
    for scenario_id in ids:
        get_scenario(scenario_id)
    result = sweep(
        ids,
        arguments.primes,
        arguments.dims,
        arguments.trials,
        arguments.seed,
        out_dir=arguments.out_dir,
        workers=arguments.workers,
    )
    for report in result.reports:
        print(f"{report.scenario:<8} p={report.parameters.prime:<3} d={report.parameters.dim:<2} {report.status.value}")
    if result.skipped:
        logger.info("skipped %d unsupported combinations", len(result.skipped))
    return result.exit_code


def _baseline(arguments: argparse.Namespace) -> int:
    if not arguments.regen:
        raise ConfigurationError("nothing to do; pass --regen to rebuild baselines")
    ids = arguments.ids or [registered.id for registered in all_scenarios()]
    store = BaselineStore.load(arguments.baseline_dir)
    written = regenerate([get_scenario(scenario_id) for scenario_id in ids], store)
    path = store.save()
    for scenario_id, entry in written.items():
        print(f"{scenario_id:<8} {entry.constant:.12g}")
    print(f"wrote {len(written)} baselines to {path}", file=sys.stderr)
    return EXIT_OK


def _table(arguments: argparse.Namespace) -> int:
    report_format = ReportFormat.from_str(arguments.format)
    if report_format is None:
        raise ConfigurationError(f"unknown table format {arguments.format!r}")
    sys.stdout.write(exponent_table(report_format, measured=[] if arguments.no_measure else None))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fflab", description="Finite field restriction and Kakeya lab.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("list", help="list the registered scenarios").set_defaults(handler=_list)

    run = commands.add_parser("run", help="run one scenario at one parameter point")
    run.add_argument("--scenario", required=True)
    run.add_argument("--prime", type=int)
    run.add_argument("--dim", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", type=Path)
    run.add_argument("--timings", action="store_true", help="include runtime_ms in the JSON report")
    run.add_argument("--baseline-dir", type=Path)
    run.set_defaults(handler=_run)

    sweeper = commands.add_parser("sweep", help="run scenarios over primes × dimensions")
    sweeper.add_argument("--ids", type=_csv(str), default=[])
    sweeper.add_argument("--primes", type=_csv(int), default=[3, 5])
    sweeper.add_argument("--dims", type=_csv(int), default=[2, 3])
    sweeper.add_argument("--trials", type=int, default=10)
    sweeper.add_argument("--seed", type=int, default=0)
    sweeper.add_argument("--out-dir", type=Path)
    sweeper.add_argument("--workers", type=int, default=1)
    sweeper.add_argument("--baseline-dir", type=Path)
    sweeper.set_defaults(handler=_sweep)

    baseline = commands.add_parser("baseline", help="regenerate baseline constants from their oracles")
    baseline.add_argument("--regen", action="store_true")
    baseline.add_argument("--ids", type=_csv(str), default=[])
    baseline.add_argument("--baseline-dir", type=Path)
    baseline.set_defaults(handler=_baseline)

    table = commands.add_parser("table", help="print the exponent table")
    table.add_argument("--format", default=ReportFormat.TEXT.value, choices=["text", "markdown"])
    table.add_argument("--no-measure", action="store_true", help="skip the desk-scale measured rows")
    table.set_defaults(handler=_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parses ``argv`` and dispatches to the subcommand.

    Args:
        argv (Optional[Sequence[str]]): arguments without the program name, ``sys.argv[1:]`` if None

    Returns (int): the exit code
    """
    arguments = build_parser().parse_args(argv)
    try:
        _configure_logging(arguments.verbose)
        changes: Dict[str, object] = {}
        if getattr(arguments, "baseline_dir", None) is not None:
            changes["baseline_dir"] = arguments.baseline_dir
        with override_settings(**changes):
            return arguments.handler(arguments)
    except FFLabError as error:
        print(f"fflab: {error}", file=sys.stderr)
        return EXIT_CONFIGURATION
    except OSError as error:
        print(f"fflab: {error}", file=sys.stderr)
        return EXIT_CONFIGURATION


if __name__ == "__main__":
    sys.exit(main())
