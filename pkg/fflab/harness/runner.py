"""
Scenario execution, sweeps and report files.

Reports are deterministic given (scenario id, parameters, seed): randomness comes from the per-trial seed fan-out and
the JSON payload carries no timestamps. Runtimes only reach the CSV summary unless asked for.
"""

from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field, replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..config import get_settings
from ..errors import BaselineError
from .baselines import BaselineStore
from .renderer import RendererFactory
from .scenario import Outcome, Parameters, Scenario, ScenarioContext, ScenarioKind, Status, get_scenario
from .serialization import serialize_witness

logger = logging.getLogger(__name__)

SCHEMA = "fflab-report/1"


@dataclass(frozen=True)
class ScenarioReport:
    """Result of running one scenario at one parameter point.

    Attributes:
        scenario (str): scenario id
        parameters (Parameters): the parameter point, seed included
        status (Status): pass, fail or report_only
        metric (float): max deviation, measured constant or exponent error
        witness (Optional[Dict[str, Any]]): serialized witness, always present on failure
        runtime_ms (float): wall time of the check
        details (Dict[str, Any]): extra measurements of the check
    """

    scenario: str
    parameters: Parameters
    status: Status
    metric: float
    witness: Optional[Dict[str, Any]] = None
    runtime_ms: float = 0.0
    details: Dict[str, Any] = dataclass_field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL

    def dict(self, timings: bool = False) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "scenario": self.scenario,
            "parameters": self.parameters.dict(),
            "status": self.status.value,
            "metric": _number(self.metric),
            "witness": self.witness,
            "details": _jsonable(self.details),
        }
        if timings:
            payload["runtime_ms"] = round(self.runtime_ms, 3)
        return payload


def _number(value: float) -> Any:
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return str(value)
    return float(repr(value))


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if hasattr(value, "denominator") and not isinstance(value, int):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value
    if hasattr(value, "item"):
        return _jsonable(value.item())
    if isinstance(value, complex):
        return [_number(value.real), _number(value.imag)]
    return _number(value)


def _judge(scenario: Scenario, outcome: Outcome, store: Optional[BaselineStore]) -> Tuple[Status, Dict[str, Any]]:
    details = dict(outcome.details)
    settings = get_settings()
    if scenario.kind is ScenarioKind.REPORT_ONLY:
        return Status.REPORT_ONLY, details
    if outcome.passed is not None:
        return (Status.PASS if outcome.passed else Status.FAIL), details
    if scenario.kind is ScenarioKind.EXACT_IDENTITY:
        details["tolerance"] = settings.tolerance
        return (Status.PASS if outcome.metric < settings.tolerance else Status.FAIL), details
    if scenario.kind is ScenarioKind.CONSTANT_TRACKED:
        store = store if store is not None else BaselineStore.load()
        try:
            entry = store.get(scenario.id)
        except BaselineError as error:
            details["error"] = str(error)
            return Status.FAIL, details
        if scenario.floor:
            limit = entry.constant / settings.slack
            passed = outcome.metric >= limit - settings.tolerance
        else:
            limit = settings.slack * entry.constant
            passed = outcome.metric <= limit + settings.tolerance
        details.update(baseline=entry.constant, origin=entry.origin, slack=settings.slack, limit=limit)
        return (Status.PASS if passed else Status.FAIL), details
    return (Status.PASS if outcome.metric < settings.tolerance else Status.FAIL), details


def run_scenario(scenario_id: str, parameters: Parameters, store: Optional[BaselineStore] = None) -> ScenarioReport:
    """Runs one scenario at one parameter point.

    Args:
        scenario_id (str): registered scenario id
        parameters (Parameters): prime, dimension, trials and master seed
        store (Optional[BaselineStore]): baselines for constant-tracked scenarios, loaded from settings if None

    Returns (ScenarioReport): the report

    Raises:
        UnknownScenario: if the id is not registered
        ValueError: if the scenario does not accept the parameters
        SizeOverflow: if an enumeration exceeds the configured guard
    """
    scenario = get_scenario(scenario_id)
    if not scenario.supports(parameters):
        raise ValueError(f"{scenario_id} does not accept p={parameters.prime}, d={parameters.dim}")
    logger.info("running %s with %s", scenario_id, parameters)
    start = time.perf_counter()
    outcome = scenario.check(ScenarioContext(scenario_id, parameters))
    runtime_ms = (time.perf_counter() - start) * 1000
    status, details = _judge(scenario, outcome, store)
    witness = serialize_witness(outcome.witness)
    if status is Status.FAIL and witness is None:
        witness = {"type": "none", "reason": details.get("error", "metric outside tolerance")}
    logger.info("%s finished: %s (metric %.6g, %.1f ms)", scenario_id, status.value, outcome.metric, runtime_ms)
    return ScenarioReport(scenario_id, parameters, status, outcome.metric, witness, runtime_ms, details)


def _run_point(point: Tuple[str, Parameters, Optional[str]]) -> ScenarioReport:
    scenario_id, parameters, directory = point
    return run_scenario(scenario_id, parameters, BaselineStore.load(Path(directory)) if directory else None)


@dataclass(frozen=True)
class SweepResult:
    reports: Tuple[ScenarioReport, ...]
    skipped: Tuple[Tuple[str, int, int], ...] = ()

    @property
    def failed(self) -> bool:
        return any(report.failed for report in self.reports)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0


def sweep_points(
    ids: Sequence[str], primes: Sequence[int], dims: Sequence[int], trials: int, seed: int
) -> Tuple[List[Tuple[str, Parameters]], List[Tuple[str, int, int]]]:
    """The admissible part of ids × primes × dims, in a fixed order, and the skipped combinations."""
    points: List[Tuple[str, Parameters]] = []
    skipped: List[Tuple[str, int, int]] = []
    for scenario_id in ids:
        scenario = get_scenario(scenario_id)
        for prime in primes:
            for dim in dims:
                parameters = Parameters(prime, dim, trials, seed)
                if scenario.supports(parameters):
                    points.append((scenario_id, parameters))
                else:
                    logger.info("skipping %s at p=%d, d=%d", scenario_id, prime, dim)
                    skipped.append((scenario_id, prime, dim))
    return points, skipped


def sweep(
    ids: Sequence[str],
    primes: Sequence[int],
    dims: Sequence[int],
    trials: int,
    seed: int,
    out_dir: Optional[Path] = None,
    workers: int = 1,
    baseline_dir: Optional[Path] = None,
) -> SweepResult:
    """Runs every admissible (id, prime, dim) combination and optionally writes the report files.

    Nonincreasing scenarios are then checked across primes with :func:`check_trends`.

    Args:
        ids (Sequence[str]): scenario ids
        primes (Sequence[int]): primes to sweep
        dims (Sequence[int]): dimensions to sweep
        trials (int): trials per point
        seed (int): master seed
        out_dir (Optional[Path]): directory receiving ``report.json`` and ``summary.csv``
        workers (int): process count, results do not depend on it
        baseline_dir (Optional[Path]): baseline directory, defaults to the configured one

    Returns (SweepResult): the reports in sweep order

    Raises:
        BaselineError: if a stored baseline's oracle hash does not match, before anything runs
    """
    store = BaselineStore.load(baseline_dir)
    store.verify(get_scenario(scenario_id) for scenario_id in ids)
    points, skipped = sweep_points(ids, primes, dims, trials, seed)
    if workers > 1 and len(points) > 1:
        directory = str(store.path.parent)
        with ProcessPoolExecutor(max_workers=workers) as executor:
            reports = list(executor.map(_run_point, [(i, params, directory) for i, params in points]))
    else:
        reports = [run_scenario(scenario_id, parameters, store) for scenario_id, parameters in points]
    reports = check_trends(reports)
    result = SweepResult(tuple(reports), tuple(skipped))
    if out_dir is not None:
        write_reports(result.reports, out_dir)
    return result


def check_trends(reports: Sequence[ScenarioReport]) -> List[ScenarioReport]:
    """Fails the reports of nonincreasing scenarios whose metric rose above the one at the next smaller prime.

    Reports are compared per (scenario, dimension) in order of increasing prime; the others pass through unchanged.
    """
    checked = list(reports)
    tolerance = get_settings().tolerance
    previous: Dict[Tuple[str, int], ScenarioReport] = {}
    for index in sorted(range(len(checked)), key=lambda i: checked[i].parameters.prime):
        report = checked[index]
        if not get_scenario(report.scenario).nonincreasing:
            continue
        key = (report.scenario, report.parameters.dim)
        before = previous.get(key)
        previous[key] = report
        if before is None or report.metric <= before.metric + tolerance:
            continue
        trend = (
            f"metric rose from {before.metric:.6g} at p={before.parameters.prime} "
            f"to {report.metric:.6g} at p={report.parameters.prime}"
        )
        logger.warning("%s at d=%d: %s", report.scenario, report.parameters.dim, trend)
        checked[index] = replace(
            report,
            status=Status.FAIL,
            witness=report.witness or {"type": "none", "reason": trend},
            details=dict(report.details, trend=trend),
        )
    return checked


def render_json(reports: Iterable[ScenarioReport], timings: bool = False) -> str:
    payload = {"schema": SCHEMA, "reports": [report.dict(timings) for report in reports]}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_csv(reports: Iterable[ScenarioReport]) -> str:
    rows = [
        {
            "scenario": report.scenario,
            "prime": report.parameters.prime,
            "dim": report.parameters.dim,
            "trials": report.parameters.trials,
            "seed": report.parameters.seed,
            "status": report.status.value,
            "metric": repr(float(report.metric)),
            "runtime_ms": f"{report.runtime_ms:.1f}",
        }
        for report in reports
    ]
    return RendererFactory.summary().render({"rows": rows})


def write_reports(reports: Sequence[ScenarioReport], out_dir: Path, timings: bool = False) -> Tuple[Path, Path]:
    """Writes ``report.json`` and ``summary.csv`` into ``out_dir``.

    Raises:
        OSError: with the offending path in the message
    """
    out_dir = Path(out_dir)
    json_path, csv_path = out_dir / "report.json", out_dir / "summary.csv"
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path.write_text(render_json(reports, timings), encoding="utf-8")
        csv_path.write_text(render_csv(reports), encoding="utf-8")
    except OSError as error:
        raise OSError(f"cannot write reports to {out_dir}: {error}") from error
    logger.info("wrote %d reports to %s", len(reports), out_dir)
    return json_path, csv_path
