"""
Random inputs shared by the scenario checks.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
import numpy.typing as npt

from ...field import FFunction, IntArray, PrimeField, coordinates, encode_array
from ...qforms import QuadraticSpace, Subspace, determinant


def log_p(value: float, p: int) -> float:
    return math.log(value, p) if value > 0 else 0.0


def unit_phases(rng: np.random.Generator, size: int) -> npt.NDArray[np.complex128]:
    return np.exp(2j * np.pi * rng.random(size))


def phase_function(field: PrimeField, dim: int, points: npt.ArrayLike, rng: np.random.Generator) -> FFunction:
    """A function with |F| = 1 on ``points`` and zero elsewhere."""
    points = np.asarray(points, dtype=np.int64).reshape(-1, dim)
    data = np.zeros(field.p**dim, dtype=np.complex128)
    if len(points):
        indices = np.unique(encode_array(field, points))
        data[indices] = unit_phases(rng, len(indices))
    return FFunction(field, dim, data)


def random_points(field: PrimeField, dim: int, size: int, rng: np.random.Generator) -> IntArray:
    total = field.p**dim
    chosen = rng.choice(total, size=min(size, total), replace=False)
    return coordinates(field, dim)[np.sort(chosen)]


def random_invertible(field: PrimeField, size: int, rng: np.random.Generator) -> IntArray:
    while True:
        matrix = rng.integers(0, field.p, (size, size))
        if determinant(field, matrix):
            return matrix


def random_form(field: PrimeField, size: int, rng: np.random.Generator) -> QuadraticSpace:
    """A non-degenerate form: a random diagonal form under a random change of basis."""
    entries = rng.integers(1, field.p, size)
    return QuadraticSpace.diagonal(field, entries.tolist()).transformed(random_invertible(field, size, rng))


def random_subspace(
    field: PrimeField, ambient: int, dim: int, rng: np.random.Generator, attempts: int = 100
) -> Optional[Subspace]:
    """A uniformly drawn spanning set of ``dim`` vectors, kept only when it is independent."""
    for _ in range(attempts):
        space = Subspace.span(field, rng.integers(0, field.p, (dim, ambient)), ambient)
        if space.dim == dim:
            return space
    return None
