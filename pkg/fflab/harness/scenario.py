"""
Scenario registry.

A scenario turns one identity or inequality into a named, parameterized, reproducible check. Its check function
receives a :class:`ScenarioContext` and returns an :class:`Outcome`; the runner turns the outcome into a status
according to the scenario kind.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import asdict, dataclass, field as dataclass_field
from enum import Enum
from typing import Any, Callable, Dict, Iterator, Optional, Tuple

import numpy as np

from ..config import Settings, get_settings
from ..errors import UnknownScenario
from ..field import PrimeField, get_field

logger = logging.getLogger(__name__)


class ScenarioKind(Enum):
    """How a scenario's metric is judged."""

    EXACT_IDENTITY = "exact_identity"
    CONSTANT_TRACKED = "constant_tracked"
    EXPONENT_ARITH = "exponent_arith"
    REPORT_ONLY = "report_only"

    @classmethod
    def from_str(cls, value: str) -> Optional[ScenarioKind]:
        for kind in cls:
            if kind.value == value.strip().lower().replace("-", "_"):
                return kind
        return None


class Status(Enum):
    PASS = "pass"
    FAIL = "fail"
    REPORT_ONLY = "report_only"

    @classmethod
    def from_str(cls, value: str) -> Optional[Status]:
        for status in cls:
            if status.value == value.strip().lower():
                return status
        return None


@dataclass(frozen=True)
class Parameters:
    """One point of a scenario's parameter space."""

    prime: int
    dim: int
    trials: int = 1
    seed: int = 0

    def dict(self) -> Dict[str, int]:
        return asdict(self)


def derive_seed(master: int, scenario_id: str, trial: int) -> int:
    """Seed of a single trial, a fixed hash of the master seed, the scenario id and the trial number."""
    digest = hashlib.sha256(f"{master}:{scenario_id}:{trial}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass(frozen=True)
class Outcome:
    """What a check measured.

    Attributes:
        metric (float): max deviation, measured constant or exponent error depending on the kind
        passed (Optional[bool]): verdict of checks that judge themselves, None to let the runner decide
        witness (Any): FFunction, SurfaceFunction or PointSet that produced the metric
        details (Dict[str, Any]): JSON-ready extra measurements
    """

    metric: float
    passed: Optional[bool] = None
    witness: Any = None
    details: Dict[str, Any] = dataclass_field(default_factory=dict)


class ScenarioContext:
    """Everything a check may depend on: the parameters, the settings and per-trial randomness."""

    __slots__ = "_scenario_id", "_parameters", "_settings"

    def __init__(self, scenario_id: str, parameters: Parameters, settings: Optional[Settings] = None):
        self._scenario_id = scenario_id
        self._parameters = parameters
        self._settings = settings or get_settings()

    @property
    def scenario_id(self) -> str:
        return self._scenario_id

    @property
    def parameters(self) -> Parameters:
        return self._parameters

    @property
    def settings(self) -> Settings:
        return self._settings

    @property
    def field(self) -> PrimeField:
        return get_field(self._parameters.prime)

    @property
    def dim(self) -> int:
        return self._parameters.dim

    @property
    def trials(self) -> int:
        return self._parameters.trials

    def rng(self, trial: int = 0) -> np.random.Generator:
        """Randomness for one trial, independent of the order trials run in."""
        return np.random.default_rng(derive_seed(self._parameters.seed, self._scenario_id, trial))

    def trial_rngs(self) -> Iterator[np.random.Generator]:
        for trial in range(self._parameters.trials):
            yield self.rng(trial)


Check = Callable[[ScenarioContext], Outcome]


@dataclass(frozen=True)
class Oracle:
    """Brute-force run a constant-tracked scenario's baseline comes from.

    Attributes:
        name (str): name of the generator, part of the baseline hash
        parameters (Parameters): the smallest parameter the baseline is measured at
    """

    name: str
    parameters: Parameters


@dataclass(frozen=True)
class Scenario:
    """A registered check.

    Attributes:
        id (str): identifier such as ``FT-1``
        anchor (str): the statement the check exercises
        kind (ScenarioKind): how the metric is judged
        check (Check): the check function
        primes (Tuple[int, ...]): default primes of a sweep
        dims (Tuple[int, ...]): dimensions the check accepts
        trials (int): default number of random trials
        oracle (Optional[Oracle]): baseline generator, required for constant-tracked scenarios
        requires (Optional[Callable[[Parameters], bool]]): extra admissibility condition on the parameters
        floor (bool): the tracked metric is a lower bound, passing while it stays above baseline / slack
        nonincreasing (bool): within a sweep the metric may not rise from one prime to the next at a fixed dimension
    """

    id: str
    anchor: str
    kind: ScenarioKind
    check: Check
    primes: Tuple[int, ...] = (3, 5, 7)
    dims: Tuple[int, ...] = (3,)
    trials: int = 10
    oracle: Optional[Oracle] = None
    requires: Optional[Callable[[Parameters], bool]] = None
    floor: bool = False
    nonincreasing: bool = False

    def __post_init__(self) -> None:
        if self.kind is ScenarioKind.CONSTANT_TRACKED and self.oracle is None:
            raise ValueError(f"constant-tracked scenario {self.id} needs an oracle")

    def supports(self, parameters: Parameters) -> bool:
        if parameters.dim not in self.dims:
            return False
        return self.requires is None or self.requires(parameters)

    def default_parameters(self, seed: int = 0) -> Parameters:
        return Parameters(self.primes[0], self.dims[0], self.trials, seed)


_REGISTRY: Dict[str, Scenario] = {}


def scenario(
    scenario_id: str,
    anchor: str,
    kind: ScenarioKind,
    primes: Tuple[int, ...] = (3, 5, 7),
    dims: Tuple[int, ...] = (3,),
    trials: int = 10,
    oracle: Optional[Tuple[str, Parameters]] = None,
    requires: Optional[Callable[[Parameters], bool]] = None,
    floor: bool = False,
    nonincreasing: bool = False,
) -> Callable[[Check], Check]:
    """Registers the decorated check under ``scenario_id``.

    Args:
        scenario_id (str): unique identifier
        anchor (str): the statement the check exercises
        kind (ScenarioKind): how the metric is judged
        primes (Tuple[int, ...]): default primes
        dims (Tuple[int, ...]): accepted dimensions
        trials (int): default number of trials
        oracle (Optional[Tuple[str, Parameters]]): baseline generator name and parameters
        requires (Optional[Callable[[Parameters], bool]]): extra admissibility condition
        floor (bool): judge the tracked metric as a lower bound
        nonincreasing (bool): fail sweeps in which the metric rises with p

    Returns (Callable[[Check], Check]): decorator returning the check unchanged
    """

    def register(check: Check) -> Check:
        if scenario_id in _REGISTRY:
            raise ValueError(f"scenario {scenario_id} registered twice")
        _REGISTRY[scenario_id] = Scenario(
            scenario_id,
            anchor,
            kind,
            check,
            primes,
            dims,
            trials,
            Oracle(*oracle) if oracle is not None else None,
            requires,
            floor,
            nonincreasing,
        )
        return check

    return register


def _load_scenarios() -> None:
    from . import scenarios  # noqa: F401  pylint: disable=import-outside-toplevel,unused-import


def _sort_key(scenario_id: str) -> Tuple[str, int]:
    prefix, _, number = scenario_id.partition("-")
    return prefix, int(number) if number.isdigit() else 0


def get_scenario(scenario_id: str) -> Scenario:
    _load_scenarios()
    try:
        return _REGISTRY[scenario_id]
    except KeyError:
        raise UnknownScenario(scenario_id) from None


def all_scenarios() -> Tuple[Scenario, ...]:
    _load_scenarios()
    return tuple(_REGISTRY[key] for key in sorted(_REGISTRY, key=_sort_key))
