from typing import Iterator

import numpy as np

from fflab.combinatorics import PointSet
from fflab.field import FFunction, PrimeField, get_field, random_function
from fflab.surfaces import Surface

SEED = 20240611


def rng(offset: int = 0) -> np.random.Generator:
    return np.random.default_rng(SEED + offset)


def random_ffunction(p: int, dim: int, offset: int = 0, real: bool = False) -> FFunction:
    return random_function(get_field(p), dim, rng(offset), real=real)


def random_subset(field: PrimeField, dim: int, size: int, offset: int = 0) -> PointSet:
    return PointSet.random(field, dim, size, rng(offset))


def random_surface_subset(surface: Surface, size: int, offset: int = 0) -> PointSet:
    return PointSet.random_on_surface(surface, size, rng(offset))


def closed_form_surfaces(p: int) -> Iterator[Surface]:
    field = get_field(p)
    yield Surface.paraboloid(field, 3)
    yield Surface.hyperbolic_paraboloid(field, 3)
