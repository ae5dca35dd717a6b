"""
Prime-field arithmetic, the additive character and dense functions on F_p^d.

Points of F_p^d are indexed little-endian: the point (x_0, ..., x_{d-1}) lives at index
x_0 + x_1 p + ... + x_{d-1} p^{d-1}, which is numpy's Fortran order on a (p,)*d grid.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dataclass_field
from enum import Enum, auto
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence, Tuple, Type, Union

import galois
import numpy as np
import numpy.typing as npt

from .config import get_settings
from .errors import SizeOverflow

logger = logging.getLogger(__name__)

ComplexArray = npt.NDArray[np.complex128]
IntArray = npt.NDArray[np.int64]
Scalar = Union[int, float, complex]


class Measure(Enum):
    """Measure an L^p norm is taken against. Every norm call names one explicitly."""

    COUNTING = auto()
    NORMALIZED = auto()

    @classmethod
    def from_str(cls, value: str) -> Optional[Measure]:
        for measure in cls:
            if measure.name.lower() == value.strip().lower():
                return measure
        return None


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


class PrimeField:
    """The field F_p for an odd prime p, with precomputed inverse and square tables."""

    __slots__ = "_p", "_inverses", "_residues", "_roots"

    def __init__(self, p: int):
        if not _is_prime(p) or p == 2:
            raise ValueError(f"{p} is not an odd prime")
        self._p = p
        elements = np.arange(p, dtype=np.int64)
        self._inverses = np.zeros(p, dtype=np.int64)
        self._inverses[1:] = [pow(int(x), p - 2, p) for x in elements[1:]]
        squares = elements * elements % p
        self._residues = np.zeros(p, dtype=bool)
        self._residues[squares] = True
        self._roots = np.full(p, -1, dtype=np.int64)
        for y in range(p - 1, -1, -1):
            self._roots[y * y % p] = y
        for table in (self._inverses, self._residues, self._roots):
            table.setflags(write=False)

    @property
    def p(self) -> int:
        return self._p

    @property
    def gf(self) -> Type[galois.FieldArray]:
        """The galois array class of F_p, used for matrix algebra."""
        return galois.GF(self._p)

    @property
    def inverses(self) -> IntArray:
        return self._inverses

    @property
    def residues(self) -> npt.NDArray[np.bool_]:
        """Boolean table, ``residues[x]`` is True iff x = y² for some y in F_p (0 included)."""
        return self._residues

    def elements(self) -> IntArray:
        return np.arange(self._p, dtype=np.int64)

    def inverse(self, x: int) -> int:
        x %= self._p
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self._p}")
        return int(self._inverses[x])

    def is_square(self, x: int) -> bool:
        return bool(self._residues[x % self._p])

    def sqrt(self, x: int) -> Optional[int]:
        """Returns the smallest y with y² = x, or None when x is a non-residue."""
        root = int(self._roots[x % self._p])
        return None if root < 0 else root

    def non_residue(self) -> int:
        return int(np.flatnonzero(~self._residues)[0])

    def characters(self) -> CharacterTable:
        return character_table(self._p)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self._p

    def __hash__(self) -> int:
        return hash(("PrimeField", self._p))

    def __repr__(self) -> str:
        return f"PrimeField({self._p})"


@lru_cache(maxsize=None)
def get_field(p: int) -> PrimeField:
    """Returns the cached field F_p."""
    return PrimeField(p)


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Values of e(k) = exp(2πik/p) for k in F_p."""

    p: int
    values: ComplexArray = dataclass_field(repr=False)

    def __call__(self, x: Union[int, IntArray]) -> Union[complex, ComplexArray]:
        return self.values[np.mod(x, self.p)]


@lru_cache(maxsize=None)
def character_table(p: int) -> CharacterTable:
    values = np.exp(2j * np.pi * np.arange(p) / p)
    values[0] = 1.0
    values.setflags(write=False)
    return CharacterTable(p, values)


def char_eval(field: PrimeField, x: int) -> complex:
    """Evaluates the additive character e(x) = exp(2πix/p)."""
    return complex(field.characters()(int(x)))


@dataclass(frozen=True)
class FFVector:
    """A point of F_p^d."""

    coords: Tuple[int, ...]
    field: PrimeField

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        if any(not 0 <= c < self.field.p for c in coords):
            raise ValueError(f"coordinates {coords} not reduced modulo {self.field.p}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, field: PrimeField, coords: Iterable[int]) -> FFVector:
        return cls(tuple(int(c) % field.p for c in coords), field)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def dot(self, other: FFVector) -> int:
        return sum(a * b for a, b in zip(self.coords, other.coords)) % self.field.p

    def __add__(self, other: FFVector) -> FFVector:
        return FFVector.of(self.field, (a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: FFVector) -> FFVector:
        return FFVector.of(self.field, (a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> FFVector:
        return FFVector.of(self.field, (-a for a in self.coords))

    def scale(self, scalar: int) -> FFVector:
        return FFVector.of(self.field, (scalar * a for a in self.coords))

    def index(self) -> int:
        return encode_point(self.field, self.coords)

    def array(self) -> IntArray:
        return np.array(self.coords, dtype=np.int64)


def check_size(size: int, parameter: str = "p^d") -> int:
    """Raises SizeOverflow when ``size`` exceeds the configured guard, otherwise returns it."""
    guard = get_settings().guard
    if size > guard:
        raise SizeOverflow(size, guard, parameter)
    return size


def encode_point(field: PrimeField, coords: Sequence[int]) -> int:
    return sum(int(c) % field.p * field.p**i for i, c in enumerate(coords))


def decode_index(field: PrimeField, dim: int, index: int) -> Tuple[int, ...]:
    coords = []
    for _ in range(dim):
        index, digit = divmod(index, field.p)
        coords.append(digit)
    return tuple(coords)


def encode_array(field: PrimeField, points: npt.ArrayLike) -> IntArray:
    """Vectorised :func:`encode_point` over the rows of ``points``."""
    points = np.atleast_2d(np.asarray(points, dtype=np.int64)) % field.p
    weights = field.p ** np.arange(points.shape[1], dtype=np.int64)
    return points @ weights


@lru_cache(maxsize=32)
def _coordinates(p: int, dim: int) -> IntArray:
    size = check_size(p**dim)
    grid = np.stack(np.unravel_index(np.arange(size), (p,) * dim, order="F"), axis=1).astype(np.int64)
    grid.setflags(write=False)
    return grid


def coordinates(field: PrimeField, dim: int) -> IntArray:
    """Returns the (p^d, d) array of all points of F_p^d in index order."""
    return _coordinates(field.p, dim)


def enumerate_points(field: PrimeField, dim: int) -> Iterator[FFVector]:
    """Yields every point of F_p^d once, in index order.

    Args:
        field (PrimeField): the field
        dim (int): dimension d ≥ 1

    Returns (Iterator[FFVector]): the points, (0, ..., 0) first
    """
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    size = check_size(field.p**dim)

    def points() -> Iterator[FFVector]:
        for index in range(size):
            yield FFVector(decode_index(field, dim, index), field)

    return points()


class FFunction:
    """A dense complex-valued function on F_p^d, stored flat in index order and never mutated."""

    __slots__ = "_field", "_dim", "_data"

    def __init__(self, field: PrimeField, dim: int, data: npt.ArrayLike):
        values = np.array(data, dtype=np.complex128).ravel(order="F")
        if values.size != field.p**dim:
            raise ValueError(f"expected {field.p ** dim} values for F_{field.p}^{dim}, got {values.size}")
        values.setflags(write=False)
        self._field = field
        self._dim = dim
        self._data = values

    @property
    def field(self) -> PrimeField:
        return self._field

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def data(self) -> ComplexArray:
        return self._data

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self._field.p,) * self._dim

    def grid(self) -> ComplexArray:
        """Returns the values as a (p,)*d array indexed by coordinates."""
        return self._data.reshape(self.shape, order="F")

    @classmethod
    def from_grid(cls, field: PrimeField, grid: npt.ArrayLike) -> FFunction:
        grid = np.asarray(grid, dtype=np.complex128)
        return cls(field, grid.ndim, grid.ravel(order="F"))

    @classmethod
    def zeros(cls, field: PrimeField, dim: int) -> FFunction:
        return cls(field, dim, np.zeros(check_size(field.p**dim), dtype=np.complex128))

    @classmethod
    def constant(cls, field: PrimeField, dim: int, value: Scalar = 1.0) -> FFunction:
        return cls(field, dim, np.full(check_size(field.p**dim), value, dtype=np.complex128))

    @classmethod
    def delta(cls, field: PrimeField, dim: int, point: Optional[Sequence[int]] = None) -> FFunction:
        data = np.zeros(check_size(field.p**dim), dtype=np.complex128)
        data[encode_point(field, point if point is not None else (0,) * dim)] = 1.0
        return cls(field, dim, data)

    @classmethod
    def indicator(cls, field: PrimeField, dim: int, points: npt.ArrayLike) -> FFunction:
        data = np.zeros(check_size(field.p**dim), dtype=np.complex128)
        points = np.asarray(points, dtype=np.int64).reshape(-1, dim)
        if points.size:
            data[encode_array(field, points)] = 1.0
        return cls(field, dim, data)

    @classmethod
    def from_callable(cls, field: PrimeField, dim: int, func: Callable[[IntArray], npt.ArrayLike]) -> FFunction:
        """Builds a function by evaluating ``func`` on the (p^d, d) coordinate array."""
        return cls(field, dim, func(coordinates(field, dim)))

    def __call__(self, point: Sequence[int]) -> complex:
        return complex(self._data[encode_point(self._field, point)])

    def _compatible(self, other: FFunction) -> None:
        if other.field != self._field or other.dim != self._dim:
            raise ValueError("functions live on different spaces")

    def __add__(self, other: FFunction) -> FFunction:
        self._compatible(other)
        return FFunction(self._field, self._dim, self._data + other.data)

    def __sub__(self, other: FFunction) -> FFunction:
        self._compatible(other)
        return FFunction(self._field, self._dim, self._data - other.data)

    def __mul__(self, other: Union[FFunction, Scalar]) -> FFunction:
        if isinstance(other, FFunction):
            self._compatible(other)
            return FFunction(self._field, self._dim, self._data * other.data)
        return FFunction(self._field, self._dim, self._data * other)

    __rmul__ = __mul__

    def __neg__(self) -> FFunction:
        return FFunction(self._field, self._dim, -self._data)

    def conj(self) -> FFunction:
        return FFunction(self._field, self._dim, self._data.conj())

    def abs(self) -> FFunction:
        return FFunction(self._field, self._dim, np.abs(self._data))

    def support(self, tolerance: float = 0.0) -> IntArray:
        """Returns the indices where |f| exceeds ``tolerance``."""
        return np.flatnonzero(np.abs(self._data) > tolerance)

    def max_deviation(self, other: FFunction) -> float:
        self._compatible(other)
        return float(np.max(np.abs(self._data - other.data), initial=0.0))

    def __repr__(self) -> str:
        return f"FFunction(F_{self._field.p}^{self._dim})"


def array_norm(values: npt.ArrayLike, p_exp: float, weight: float = 1.0) -> float:
    """(weight · Σ|v|^p)^{1/p}, or max|v| for p = ∞."""
    magnitudes = np.abs(np.asarray(values))
    if magnitudes.size == 0:
        return 0.0
    if np.isinf(p_exp):
        return float(magnitudes.max())
    if p_exp < 1:
        raise ValueError(f"norm exponent must be at least 1, got {p_exp}")
    return float((weight * np.sum(magnitudes**p_exp)) ** (1.0 / p_exp))


def measure_weight(measure: Measure, size: int) -> float:
    return 1.0 if measure is Measure.COUNTING else 1.0 / size


def lp_norm(f: FFunction, p_exp: float, measure: Measure) -> float:
    """L^p norm of ``f`` on F_p^d.

    Args:
        f (FFunction): the function
        p_exp (float): exponent in [1, ∞]
        measure (Measure): counting measure, or the normalized measure weighting each point by p^{-d}

    Returns (float): the norm
    """
    return array_norm(f.data, p_exp, measure_weight(measure, f.data.size))


def inner(f: FFunction, g: FFunction, measure: Measure) -> complex:
    """⟨f, g⟩ = Σ f·conj(g), scaled by p^{-d} under the normalized measure."""
    f._compatible(g)  # pylint: disable=protected-access
    return complex(np.vdot(g.data, f.data) * measure_weight(measure, f.data.size))


def random_function(field: PrimeField, dim: int, rng: np.random.Generator, real: bool = False) -> FFunction:
    """Standard complex Gaussian values at every point (real Gaussian when ``real``)."""
    size = check_size(field.p**dim)
    data = rng.standard_normal(size)
    if not real:
        data = data + 1j * rng.standard_normal(size)
    return FFunction(field, dim, data)
