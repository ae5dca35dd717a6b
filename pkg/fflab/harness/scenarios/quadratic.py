"""
Witt indices, isotropic complements, orthogonality and the classification of (d−3)-dimensional sections.
"""

from __future__ import annotations

import itertools
import logging
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from ...errors import FullyDegenerate
from ...field import PrimeField, coordinates, get_field
from ...qforms import (
    QuadraticSpace,
    Subspace,
    classify_subsurface,
    complementary_isotropic,
    dual_basis,
    enumerate_max_isotropic,
    is_affine_set,
    mat_mul,
    matrix_rank,
    orthogonal_complement,
    orthogonal_indicator,
    subsurface_table,
    surface_graph,
    witt_index,
    witt_index_exhaustive,
)
from ..scenario import Outcome, ScenarioContext, ScenarioKind, scenario
from .sampling import random_form, random_invertible, random_subspace

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 343


@lru_cache(maxsize=None)
def _exhaustive_by_class(p: int, classes: Tuple[bool, ...]) -> int:
    """Brute-force Witt index of the diagonal form with entries 1 (square) or the least non-residue."""
    field = get_field(p)
    entries = [1 if square else field.non_residue() for square in classes]
    return witt_index_exhaustive(QuadraticSpace.diagonal(field, entries))


def _exhaustive(form: QuadraticSpace, entries: Tuple[int, ...]) -> int:
    field = form.field
    if field.p**form.dim <= EXHAUSTIVE_LIMIT:
        return witt_index_exhaustive(form)
    return _exhaustive_by_class(field.p, tuple(field.is_square(e) for e in entries))


@scenario(
    "QF-1",
    "the determinant classification of the Witt index agrees with exhaustive search on every diagonal form",
    ScenarioKind.EXACT_IDENTITY,
    primes=(3, 5, 7),
    dims=(2, 3, 4),
)
def witt_classification(context: ScenarioContext) -> Outcome:
    field, size = context.field, context.dim
    mismatches: List[str] = []
    for entries in itertools.product(range(1, field.p), repeat=size):
        form = QuadraticSpace.diagonal(field, list(entries))
        expected = _exhaustive(form, entries)
        if witt_index(form) != expected:
            mismatches.append(f"diag{entries}: {witt_index(form)} != {expected}")
    return Outcome(float(len(mismatches)), witness=mismatches or None, details={"forms": (field.p - 1) ** size})


@scenario(
    "QF-2",
    "a totally isotropic complement V of W with a basis dual to W",
    ScenarioKind.EXACT_IDENTITY,
    primes=(3, 5, 7),
    dims=(2, 4),
    trials=100,
)
def isotropic_complements(context: ScenarioContext) -> Outcome:
    """The dimension parameter is 2n, the size of the form."""
    field, n = context.field, context.dim // 2
    hyperbolic = QuadraticSpace.hyperbolic(field, n)
    failures: List[str] = []
    for trial, rng in enumerate(context.trial_rngs()):
        form = hyperbolic.transformed(random_invertible(field, 2 * n, rng))
        spaces = enumerate_max_isotropic(form)
        isotropic = spaces[int(rng.integers(len(spaces)))]
        complement = complementary_isotropic(form, isotropic)
        basis = dual_basis(form, isotropic, complement)
        pairing = mat_mul(field, isotropic.matrix, form.matrix, basis.T)
        if not np.array_equal(pairing, np.eye(n, dtype=np.int64)):
            failures.append(f"trial {trial}: pairing is not the identity")
        if complement.dim != n or not complement.is_totally_isotropic(form):
            failures.append(f"trial {trial}: complement is not totally isotropic of dimension {n}")
        if matrix_rank(field, np.vstack([isotropic.matrix, complement.matrix])) != 2 * n:
            failures.append(f"trial {trial}: W and V intersect")
    return Outcome(float(len(failures)), witness=failures or None)


@scenario(
    "QF-3",
    "|W|^{-1} Σ_{w∈W} e(x∘w) is the indicator of W⊥, and dim W⊥ = m − dim W",
    ScenarioKind.EXACT_IDENTITY,
    primes=(3, 5),
    dims=(2, 3, 4),
    trials=20,
)
def orthogonality(context: ScenarioContext) -> Outcome:
    field, size = context.field, context.dim
    points = coordinates(field, size)
    worst, failures = 0.0, 0
    for rng in context.trial_rngs():
        form = random_form(field, size, rng)
        subspace = random_subspace(field, size, int(rng.integers(1, size)), rng)
        if subspace is None:
            continue
        complement = orthogonal_complement(form, subspace)
        membership = np.array([complement.contains(point) for point in points], dtype=np.float64)
        worst = max(worst, float(np.max(np.abs(orthogonal_indicator(form, subspace) - membership))))
        if complement.dim != size - subspace.dim:
            failures += 1
    return Outcome(worst + failures, details={"indicator_deviation": worst, "dimension_failures": failures})


def _sections(field: PrimeField, form: QuadraticSpace, rng: np.random.Generator, isotropic: bool) -> List[Subspace]:
    """A random (d−3)-dimensional V and, if asked and there is one, a totally isotropic V of that size."""
    size = form.dim - 2
    sections = []
    random_section = random_subspace(field, form.dim, size, rng)
    if random_section is not None:
        sections.append(random_section)
    if isotropic and size and witt_index(form) >= size:
        spaces = enumerate_max_isotropic(form)
        chosen = spaces[int(rng.integers(len(spaces)))]
        sections.append(Subspace.span(field, chosen.matrix[:size], form.dim))
    return sections


@scenario(
    "QF-4",
    "sections S_V lie in the admissible (r, s, w) table, and S_V is affine exactly when V is totally isotropic",
    ScenarioKind.EXACT_IDENTITY,
    primes=(3, 5),
    dims=(4, 5, 6),
    trials=30,
)
def subsurfaces(context: ScenarioContext) -> Outcome:
    """The dimension parameter is d; the base form lives on F_p^{d−1}."""
    field, dim = context.field, context.dim
    failures: List[str] = []
    degenerate = 0
    dot = QuadraticSpace.dot(field, dim - 1)
    for rng in context.trial_rngs():
        for form, isotropic in ((dot, True), (random_form(field, dim - 1, rng), False)):
            table = subsurface_table(dim, witt_index(form))
            for section in _sections(field, form, rng, isotropic):
                totally_isotropic = section.is_totally_isotropic(form)
                if is_affine_set(field, surface_graph(form, section)) != totally_isotropic:
                    failures.append(f"affine test disagrees on {section}")
                try:
                    row = classify_subsurface(form, section)
                except FullyDegenerate:
                    degenerate += 1
                    continue
                if row not in table:
                    failures.append(f"{tuple(row)} for {section} is outside {[tuple(r) for r in table]}")
    logger.debug("sections: %d totally degenerate", degenerate)
    return Outcome(float(len(failures)), witness=failures or None, details={"fully_degenerate": degenerate})
