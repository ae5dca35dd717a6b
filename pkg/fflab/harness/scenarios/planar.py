"""
Functions of F_p³ concentrated on VH planes, and their restriction to the hyperbolic paraboloid.
"""

from __future__ import annotations

import logging
from typing import List, Tuple

import numpy as np

from ...combinatorics import PointSet, VHPlane, planar_entropy, vh_planes
from ...field import Measure, PrimeField, coordinates, random_function
from ...surfaces import Surface, plane_embed_ft, restriction
from ..scenario import Outcome, Parameters, ScenarioContext, ScenarioKind, scenario
from .sampling import log_p, phase_function

logger = logging.getLogger(__name__)

PLANAR_EXPONENTS = (1.5, 2.0)
LEVEL_EXPONENTS = (1.6, 1.75, 1.9)


def plane_points(field: PrimeField, plane: VHPlane) -> np.ndarray:
    """The p² points of a VH plane, coordinates (x1, x2, t)."""
    p = field.p
    free, t = coordinates(field, 2).T
    constrained = (plane.slope * t + plane.offset) % p
    if plane.kind == 1:
        return np.stack([free, constrained, t], axis=1)
    return np.stack([constrained, free, t], axis=1)


@scenario(
    "PL-1",
    "the transform of f embedded in {x2 = a x3 + b} is f̂(ξ1, ξ3 + aξ2) e(−bξ2)",
    ScenarioKind.EXACT_IDENTITY,
    primes=(3, 5, 7),
    dims=(3,),
    trials=100,
)
def plane_embedding(context: ScenarioContext) -> Outcome:
    p = context.field.p
    worst, witness = 0.0, None
    for rng in context.trial_rngs():
        f = random_function(context.field, 2, rng)
        a, b = (int(v) for v in rng.integers(0, p, 2))
        deviation = plane_embed_ft(f, a, b).deviation
        if deviation >= worst:
            worst, witness = deviation, f
    return Outcome(worst, witness=witness)


def _planar_set(context: ScenarioContext, rng: np.random.Generator, planes: List[VHPlane]) -> PointSet:
    field = context.field
    count = int(rng.integers(1, 4))
    rows = []
    for index in rng.choice(len(planes), size=count, replace=False):
        points = plane_points(field, planes[int(index)])
        rows.append(points[rng.random(len(points)) < rng.uniform(0.2, 1.0)])
    points = PointSet(field, 3, np.vstack(rows))
    if not len(points):
        points = PointSet(field, 3, plane_points(field, planes[0])[:1])
    return points


def planar_bound(gamma: float, entropy: float, exponent: float, p: int) -> float:
    """p^{γ−1/r} + p^{γ/2+e/2} up to |E| = p², p^{2+(γ−2)/r−1/r} + p^{γ/2+e/2} beyond."""
    first = gamma - 1 / exponent if gamma <= 2 else 2 + (gamma - 2) / exponent - 1 / exponent
    return p**first + p ** (gamma / 2 + entropy / 2)


@scenario(
    "PL-2",
    "‖F̂‖_{L^r(ℋ,dσ)} for F ∼ 1 on E against the planar-entropy bound, 1 ≤ r ≤ 2",
    ScenarioKind.CONSTANT_TRACKED,
    primes=(3, 5, 7),
    dims=(3,),
    trials=100,
    oracle=("random-planar-sets", Parameters(3, 3, 300, 0)),
)
def planar_restriction(context: ScenarioContext) -> Outcome:
    field = context.field
    p = field.p
    surface = Surface.hyperbolic_paraboloid(field, 3)
    planes = vh_planes(field)
    worst, witness = 0.0, None
    for rng in context.trial_rngs():
        points = _planar_set(context, rng, planes)
        F = phase_function(field, 3, points.points, rng)  # pylint: disable=invalid-name
        gamma = log_p(len(points), p)
        entropy = planar_entropy(points)
        transform = restriction(F, surface)
        for exponent in PLANAR_EXPONENTS:
            ratio = transform.norm(exponent, Measure.NORMALIZED) / planar_bound(gamma, entropy, exponent, p)
            if ratio >= worst:
                worst, witness = ratio, F
    return Outcome(worst, witness=witness)


def _level_sets(
    context: ScenarioContext, rng: np.random.Generator, planes: List[VHPlane]
) -> List[Tuple[str, PointSet]]:
    """A proper piece of one VH plane and a union of a few full VH planes."""
    field = context.field
    p = field.p
    single = plane_points(field, planes[int(rng.integers(len(planes)))])
    size = int(rng.integers(p, p * p))
    piece = PointSet(field, 3, single[np.sort(rng.choice(len(single), size=size, replace=False))])
    count = int(rng.integers(2, 4))
    chosen = rng.choice(len(planes), size=count, replace=False)
    union = PointSet(field, 3, np.vstack([plane_points(field, planes[int(i)]) for i in chosen]))
    return [("small", piece), ("large", union)]


@scenario(
    "PL-3",
    "‖F̂‖_{L^r(dσ)} ≲ ‖F‖_{2r/(2r−1)} for constant-modulus F on sets of low planar entropy, 3/2 < r < 2",
    ScenarioKind.CONSTANT_TRACKED,
    primes=(3, 5, 7),
    dims=(3,),
    trials=50,
    oracle=("random-level-sets", Parameters(3, 3, 200, 0)),
)
def level_set_restriction(context: ScenarioContext) -> Outcome:
    """Below p² points the entropy may reach γ(r−1)/r, above it 2(r−1)/r; samples outside are skipped."""
    field = context.field
    p = field.p
    surface = Surface.hyperbolic_paraboloid(field, 3)
    planes = vh_planes(field)
    worst, witness, skipped, samples = 0.0, None, 0, 0
    for rng in context.trial_rngs():
        for label, points in _level_sets(context, rng, planes):
            gamma = log_p(len(points), p)
            entropy = planar_entropy(points)
            F = phase_function(field, 3, points.points, rng)  # pylint: disable=invalid-name
            transform = restriction(F, surface)
            for exponent in LEVEL_EXPONENTS:
                allowed = (gamma if label == "small" else 2.0) * (exponent - 1) / exponent
                if (label == "small") != (gamma < 2) or entropy > allowed + 1e-12:
                    skipped += 1
                    continue
                scale = len(points) ** (-(2 * exponent - 1) / (2 * exponent))
                ratio = scale * transform.norm(exponent, Measure.NORMALIZED)
                samples += 1
                if ratio >= worst:
                    worst, witness = ratio, F
    logger.debug("level sets: %d samples, %d outside the hypotheses", samples, skipped)
    return Outcome(worst, witness=witness, details={"samples": samples, "skipped": skipped})
