"""
Baseline store for constant-tracked scenarios.

Each entry holds the constant for the oracle's smallest parameter, the parameters themselves, the oracle hash and
where the constant came from. The hash covers the scenario id, the oracle name and parameters, the slack factor and the
package version, so changing any of them invalidates the entry.

Origins:

- ``oracle``: measured by running the oracle, what ``fflab baseline --regen`` writes
- ``enumeration``: the exact value of an exhaustive oracle, computed independently of the harness
- ``bound``: a proven bound on everything the oracle can measure, an upper bound for ordinary tracked scenarios and
  a lower bound for floor scenarios; regenerating tightens it
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from ..config import get_settings
from ..errors import BaselineError
from .scenario import Scenario, ScenarioContext, ScenarioKind

logger = logging.getLogger(__name__)

BASELINE_FILE = "baselines.json"
SCHEMA = "fflab-baselines/1"
ORIGINS = ("oracle", "enumeration", "bound")


def _version() -> str:
    from .. import __version__  # pylint: disable=import-outside-toplevel

    return __version__


def oracle_hash(scenario: Scenario, slack: Optional[float] = None) -> str:
    """sha256 over the scenario id, the oracle name and parameters, the slack and the package version."""
    if scenario.oracle is None:
        raise BaselineError(f"scenario {scenario.id} has no oracle")
    payload = {
        "scenario": scenario.id,
        "oracle": scenario.oracle.name,
        "parameters": scenario.oracle.parameters.dict(),
        "slack": get_settings().slack if slack is None else slack,
        "version": _version(),
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class BaselineEntry:
    constant: float
    parameters: Dict[str, int]
    oracle_hash: str
    origin: str = "oracle"

    def __post_init__(self) -> None:
        if self.origin not in ORIGINS:
            raise BaselineError(f"unknown baseline origin {self.origin!r}, expected one of {', '.join(ORIGINS)}")


class BaselineStore:
    """JSON-backed mapping from scenario id to :class:`BaselineEntry`."""

    __slots__ = "_path", "_entries"

    def __init__(self, path: Path, entries: Optional[Dict[str, BaselineEntry]] = None):
        self._path = path
        self._entries = dict(entries or {})

    @classmethod
    def load(cls, directory: Optional[Path] = None) -> BaselineStore:
        """Reads the store from ``directory``, an empty store if the file does not exist yet.

        Args:
            directory (Optional[Path]): baseline directory, defaults to the configured one

        Returns (BaselineStore): the store
        """
        path = Path(directory or get_settings().baseline_dir) / BASELINE_FILE
        if not path.exists():
            logger.info("no baseline file at %s", path)
            return cls(path)
        try:
            with open(path, "r", encoding="utf-8") as file:
                raw = json.load(file)
        except (OSError, json.JSONDecodeError) as error:
            raise BaselineError(f"cannot read baselines from {path}: {error}") from error
        if raw.get("schema") != SCHEMA:
            raise BaselineError(f"{path} has schema {raw.get('schema')!r}, expected {SCHEMA!r}")
        try:
            entries = {key: BaselineEntry(**value) for key, value in raw["entries"].items()}
        except (KeyError, TypeError) as error:
            raise BaselineError(f"malformed baseline entry in {path}: {error}") from error
        return cls(path, entries)

    @property
    def path(self) -> Path:
        return self._path

    def __contains__(self, scenario_id: object) -> bool:
        return scenario_id in self._entries

    def get(self, scenario_id: str) -> BaselineEntry:
        try:
            return self._entries[scenario_id]
        except KeyError:
            raise BaselineError(
                f"no baseline for {scenario_id} in {self._path}; run `fflab baseline --regen --ids {scenario_id}`"
            ) from None

    def put(self, scenario: Scenario, constant: float) -> BaselineEntry:
        if scenario.oracle is None:
            raise BaselineError(f"scenario {scenario.id} has no oracle")
        entry = BaselineEntry(float(constant), scenario.oracle.parameters.dict(), oracle_hash(scenario))
        self._entries[scenario.id] = entry
        logger.info("baseline %s = %.12g", scenario.id, entry.constant)
        return entry

    def verify(self, scenarios: Iterable[Scenario]) -> None:
        """Checks the stored oracle hash of every constant-tracked scenario that has an entry.

        Raises:
            BaselineError: on the first hash mismatch
        """
        for scenario in scenarios:
            if scenario.kind is not ScenarioKind.CONSTANT_TRACKED or scenario.id not in self._entries:
                continue
            if self._entries[scenario.id].oracle_hash != oracle_hash(scenario):
                raise BaselineError(
                    f"baseline for {scenario.id} in {self._path} was produced by a different oracle, slack or "
                    f"version; run `fflab baseline --regen --ids {scenario.id}`"
                )

    def dict(self) -> Dict[str, Any]:
        return {"schema": SCHEMA, "entries": {key: asdict(self._entries[key]) for key in sorted(self._entries)}}

    def save(self) -> Path:
        self._path.parent.mkdir(parents=True, exist_ok=True)
        with open(self._path, "w", encoding="utf-8") as file:
            json.dump(self.dict(), file, indent=2, sort_keys=True)
            file.write("\n")
        logger.info("wrote %d baselines to %s", len(self._entries), self._path)
        return self._path


def regenerate(scenarios: Iterable[Scenario], store: BaselineStore) -> Dict[str, BaselineEntry]:
    """Reruns each constant-tracked scenario's oracle and stores the constant it measures.

    Args:
        scenarios (Iterable[Scenario]): scenarios to regenerate, others are ignored
        store (BaselineStore): store receiving the entries, saved by the caller

    Returns (Dict[str, BaselineEntry]): the new entries by scenario id
    """
    written: Dict[str, BaselineEntry] = {}
    for scenario in scenarios:
        if scenario.kind is not ScenarioKind.CONSTANT_TRACKED or scenario.oracle is None:
            logger.debug("%s is not constant-tracked, no baseline", scenario.id)
            continue
        outcome = scenario.check(ScenarioContext(scenario.id, scenario.oracle.parameters))
        written[scenario.id] = store.put(scenario, outcome.metric)
    return written
