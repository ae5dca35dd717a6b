"""
Bochner–Riesz tubes in F_p³ and the pseudo-conformal slicing of the extension operator.
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Any, Dict, List, Tuple

import numpy as np

from ...combinatorics import PointSet, max_isotropic_slice, surface_energy_curve, vh_planes
from ...field import FFunction, Measure, coordinates, lp_norm, random_function
from ...surfaces import (
    BochnerRieszVariant,
    ConvolutionMethod,
    Surface,
    SurfaceFunction,
    Tube,
    bochner_riesz,
    extension,
    line_intersection_exponent,
    line_union_function,
    pseudo_conformal_check,
    restriction,
)
from ..scenario import Outcome, Parameters, ScenarioContext, ScenarioKind, scenario
from .sampling import log_p, unit_phases

logger = logging.getLogger(__name__)


@scenario(
    "BR-1",
    "a line mass e(m x1) on {x2 = x2′, t = t′} is mapped onto the tube of direction m",
    ScenarioKind.EXACT_IDENTITY,
    primes=(3, 5),
    dims=(3,),
    trials=1,
)
def line_to_tube(context: ScenarioContext) -> Outcome:
    field = context.field
    p = field.p
    surface = Surface.hyperbolic_paraboloid(field, 3)
    characters = field.characters()
    worst, witness = 0.0, None
    for direction, x2, t in itertools.product(range(p), repeat=3):
        grid = np.zeros((p, p, p), dtype=np.complex128)
        grid[:, x2, t] = characters(direction * np.arange(p))
        F = FFunction.from_grid(field, grid)  # pylint: disable=invalid-name
        image = bochner_riesz(F, surface, BochnerRieszVariant.KERNEL_ONLY)
        tube = Tube(field, direction, (x2, t)).indicator()
        expected = FFunction.from_grid(field, tube.grid() * characters(direction * np.arange(p))[:, None, None])
        deviation = image.max_deviation(expected)
        if deviation >= worst:
            worst, witness = deviation, F
    F = random_function(field, 3, context.rng())  # pylint: disable=invalid-name
    methods = bochner_riesz(F, surface, BochnerRieszVariant.WITH_DELTA, ConvolutionMethod.DIRECT).max_deviation(
        bochner_riesz(F, surface, BochnerRieszVariant.WITH_DELTA, ConvolutionMethod.FOURIER)
    )
    return Outcome(max(worst, methods), witness=witness, details={"tube_deviation": worst, "methods": methods})


def _line_sets(context: ScenarioContext) -> List[Tuple[List[Tuple[int, int]], np.random.Generator]]:
    """Every non-empty set of (x2, t) points when p = 3, random sets otherwise."""
    field = context.field
    points = [tuple(int(c) for c in row) for row in coordinates(field, 2)]
    if field.p == 3:
        rng = context.rng()
        subsets = itertools.chain.from_iterable(itertools.combinations(points, k) for k in range(1, len(points) + 1))
        return [(list(subset), rng) for subset in subsets]
    sets = []
    for rng in context.trial_rngs():
        size = int(rng.integers(1, len(points) + 1))
        chosen = rng.choice(len(points), size=size, replace=False)
        sets.append(([points[i] for i in sorted(chosen)], rng))
    return sets


@scenario(
    "BR-2",
    "‖TF‖₂ ≤ C p^{(1+u)/2} ‖F‖₂ for F supported on lines {x2 = x2_i, t = t_i}",
    ScenarioKind.CONSTANT_TRACKED,
    primes=(3, 5, 7),
    dims=(3,),
    trials=50,
    oracle=("exhaustive-line-sets", Parameters(3, 3, 1, 0)),
)
def line_sets_bound(context: ScenarioContext) -> Outcome:
    """u is log_p of the largest number of the points (x2_i, t_i) on one line; the constant never exceeds 1."""
    field = context.field
    surface = Surface.hyperbolic_paraboloid(field, 3)
    worst, witness, samples = 0.0, None, 0
    for lines, rng in _line_sets(context):
        slices = rng.standard_normal((len(lines), field.p)) + 1j * rng.standard_normal((len(lines), field.p))
        F = line_union_function(field, lines, slices)  # pylint: disable=invalid-name
        exponent = line_intersection_exponent(field, lines)
        image = bochner_riesz(F, surface, BochnerRieszVariant.KERNEL_ONLY)
        norm = lp_norm(F, 2, Measure.COUNTING)
        ratio = lp_norm(image, 2, Measure.COUNTING) / (field.p ** ((1 + exponent) / 2) * norm)
        samples += 1
        if ratio >= worst:
            worst, witness = ratio, F
    passed = False if worst > 1 + context.settings.tolerance else None
    return Outcome(worst, passed, witness, {"samples": samples})


def _line_pieces(context: ScenarioContext, rng: np.random.Generator) -> Tuple[np.ndarray, int]:
    """A union of pieces of the lines {(·, x2_i, t_i)}, with the smallest piece size."""
    p = context.field.p
    bases = coordinates(context.field, 2)
    count = int(rng.integers(1, p * p + 1))
    chosen = bases[np.sort(rng.choice(p * p, size=count, replace=False))]
    floor = int(rng.integers(1, p + 1))
    rows, smallest = [], p
    for x2, t in chosen:
        size = int(rng.integers(floor, p + 1))
        smallest = min(smallest, size)
        x1 = np.sort(rng.choice(p, size=size, replace=False))
        rows.append(np.stack([x1, np.full(size, x2), np.full(size, t)], axis=1))
    return np.vstack(rows), smallest


@scenario(
    "BR-3",
    "‖F̂‖_{L²(ℋ,dσ)} ≲ p^{(1+α−β)/4} ‖F‖₂ for unions of line pieces",
    ScenarioKind.CONSTANT_TRACKED,
    primes=(3, 5, 7),
    dims=(3,),
    trials=100,
    oracle=("random-line-pieces", Parameters(3, 3, 300, 0)),
)
def line_pieces_bound(context: ScenarioContext) -> Outcome:
    """α is log_p of the largest intersection with a VH plane, β is log_p of the smallest piece."""
    field = context.field
    p = field.p
    surface = Surface.hyperbolic_paraboloid(field, 3)
    planes = vh_planes(field)
    worst, witness = 0.0, None
    for rng in context.trial_rngs():
        points, smallest = _line_pieces(context, rng)
        data = np.zeros(p**3, dtype=np.complex128)
        data[PointSet(field, 3, points).indices()] = unit_phases(rng, len(points))
        F = FFunction(field, 3, data)  # pylint: disable=invalid-name
        alpha = log_p(max(int(plane.mask(points, p).sum()) for plane in planes), p)
        beta = log_p(smallest, p)
        lhs = restriction(F, surface).norm(2, Measure.NORMALIZED)
        ratio = lhs / (p ** ((1 + alpha - beta) / 4) * lp_norm(F, 2, Measure.COUNTING))
        if ratio >= worst:
            worst, witness = ratio, F
    return Outcome(worst, witness=witness)


@scenario(
    "MT-1",
    "|h0 * (dσ)∨| at (x, t) equals p^{m/2} |(h̃0 dσ)∨| at the pseudo-conformal image",
    ScenarioKind.EXACT_IDENTITY,
    primes=(3, 5, 7),
    dims=(3, 5),
    trials=100,
)
def pseudo_conformal(context: ScenarioContext) -> Outcome:
    field, dim = context.field, context.dim
    surfaces = [Surface.hyperbolic_paraboloid(field, dim), Surface.paraboloid(field, dim)]
    worst, witness = 0.0, None
    for rng in context.trial_rngs():
        grid = np.zeros((field.p,) * dim, dtype=np.complex128)
        grid[..., 0] = rng.standard_normal(grid[..., 0].shape) + 1j * rng.standard_normal(grid[..., 0].shape)
        h0 = FFunction.from_grid(field, grid)
        for surface in surfaces:
            deviation = pseudo_conformal_check(h0, surface)
            if deviation >= worst:
                worst, witness = deviation, h0
    return Outcome(worst, witness=witness)


def _sliced_set(context: ScenarioContext, rng: np.random.Generator) -> Tuple[FFunction, Dict[int, np.ndarray]]:
    """A unit-modulus function on a set whose non-empty slices all have the same size."""
    field, dim = context.field, context.dim
    p = field.p
    base = coordinates(field, dim - 1)
    slices = np.sort(rng.choice(p, size=int(rng.integers(1, p + 1)), replace=False))
    width = int(rng.integers(max(1, p // 2), len(base) + 1))
    members: Dict[int, np.ndarray] = {}
    data = np.zeros(p**dim, dtype=np.complex128)
    for z in slices:
        chosen = base[np.sort(rng.choice(len(base), size=width, replace=False))]
        members[int(z)] = chosen
        points = np.hstack([chosen, np.full((width, 1), z)])
        data[PointSet(field, dim, points).indices()] = unit_phases(rng, width)
    return FFunction(field, dim, data), members


@scenario(
    "MT-2",
    "slice bounds for ‖ĥ‖_{L²(𝒫,dσ)}: through ‖(h_z dσ)∨‖_4 and through the energy exponent",
    ScenarioKind.CONSTANT_TRACKED,
    primes=(3, 5, 7),
    dims=(3, 5),
    trials=50,
    oracle=("random-sliced-sets", Parameters(3, 3, 200, 0)),
)
def slice_bounds(context: ScenarioContext) -> Outcome:
    """Both p^{3γ/8 + n/2 + α/2 + s/2} + p^{γ/2} and p^{γ(3+Ψ)/8 + (4−Ψ)/8 − d/8 + 1/4} + p^{γ/2}."""
    field, dim = context.field, context.dim
    p = field.p
    n = (dim - 1) // 2
    surface = Surface.paraboloid(field, dim)
    curve = surface_energy_curve(surface)
    worst, witness = 0.0, None
    details: Dict[str, Any] = {"slice_ratio": 0.0, "energy_ratio": 0.0}
    for rng in context.trial_rngs():
        h, members = _sliced_set(context, rng)
        grid = h.grid()
        size = sum(len(points) for points in members.values())
        gamma = log_p(size, p)
        s = log_p(len(members), p)
        slice_norms = []
        isotropic = 1
        for z, points in members.items():
            values = grid[..., z].ravel(order="F")
            slice_norms.append(lp_norm(extension(SurfaceFunction(surface, values)), 4, Measure.COUNTING))
            isotropic = max(isotropic, max_isotropic_slice(PointSet(field, dim - 1, points), surface.form))
        alpha = log_p(max(slice_norms), p)
        width = len(next(iter(members.values())))
        psi = curve(math.log(isotropic, width) if width > 1 else 1.0)
        lhs = restriction(h, surface).norm(2, Measure.NORMALIZED)
        slice_bound = p ** (3 * gamma / 8 + n / 2 + alpha / 2 + s / 2) + p ** (gamma / 2)
        energy_bound = p ** (gamma * (3 + psi) / 8 + (4 - psi) / 8 - dim / 8 + 1 / 4) + p ** (gamma / 2)
        details["slice_ratio"] = max(details["slice_ratio"], lhs / slice_bound)
        details["energy_ratio"] = max(details["energy_ratio"], lhs / energy_bound)
        ratio = max(lhs / slice_bound, lhs / energy_bound)
        if ratio >= worst:
            worst, witness = ratio, h
    return Outcome(worst, witness=witness, details=details)
