"""Exception hierarchy shared by every fflab module."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Optional, Sequence, Tuple, Union


class FFLabError(Exception):
    """Base class of every error raised by the library."""


class SizeOverflow(FFLabError, ValueError):
    """Raised when an enumeration would exceed the configured size guard."""

    def __init__(self, size: int, guard: int, parameter: str = "p^d"):
        self.size = size
        self.guard = guard
        self.parameter = parameter
        super().__init__(f"{parameter} = {size} exceeds the enumeration guard {guard}")


class DegenerateForm(FFLabError, ValueError):
    def __init__(self, rank: int, dim: int):
        self.rank = rank
        self.dim = dim
        super().__init__(f"quadratic form has rank {rank} < {dim}; split off the radical first")


class FullyDegenerate(FFLabError, ValueError):
    """Raised when a quadratic form restricted to a subspace vanishes identically."""


class NotMaximalIsotropic(FFLabError, ValueError):
    pass


class NonComplementary(FFLabError, ValueError):
    pass


class NotOnSurface(FFLabError, ValueError):
    def __init__(self, point: Sequence[int]):
        self.point = tuple(int(c) for c in point)
        super().__init__(f"point {self.point} does not lie on the surface")


class NotCongruent(FFLabError, ValueError):
    pass


class NotIsotropicPair(FFLabError, ValueError):
    pass


class OutOfValidityRange(FFLabError, ValueError):
    def __init__(self, kind: str, alpha: Union[float, Fraction], interval: Tuple[Fraction, Fraction]):
        self.kind = kind
        self.alpha = alpha
        self.interval = interval
        super().__init__(f"alpha = {alpha} outside [{interval[0]}, {interval[1]}] for {kind}")


class NoRoot(FFLabError):
    """Raised when the equalizing parameter of the dimension induction does not exist.

    The endpoint bound is kept on the exception so callers can fall back to it.
    """

    def __init__(self, alpha: float, bound: float, detail: Optional[str] = None):
        self.alpha = alpha
        self.bound = bound
        message = f"no equalizing rho in [{alpha}, 1); endpoint bound {bound}"
        super().__init__(f"{message} ({detail})" if detail else message)


class UnknownScenario(FFLabError, KeyError):
    def __init__(self, scenario_id: Any):
        self.scenario_id = scenario_id
        super().__init__(scenario_id)

    def __str__(self) -> str:
        return f"unknown scenario {self.scenario_id!r}; run `fflab list` for the registered ids"


class BaselineError(FFLabError):
    pass


class ConfigurationError(FFLabError):
    pass


class EnergyExcess(FFLabError):
    """Raised when a measured energy exponent rises above the proven curve by more than the log slack.

    Every sample of the scatter is kept on the exception, the offending ones in ``breaches``.
    """

    def __init__(self, samples: Sequence[Any], breaches: Sequence[Any], slack: float):
        self.samples = tuple(samples)
        self.breaches = tuple(breaches)
        self.slack = slack
        worst = max(self.breaches, key=lambda sample: sample.excess)
        super().__init__(
            f"{len(self.breaches)} energy samples exceed the curve by more than {slack}; worst is {worst.label!r} "
            f"with |E| = {worst.size}, exponent {worst.exponent:.6g} against {worst.curve:.6g}"
        )
