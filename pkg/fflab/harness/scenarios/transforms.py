"""
Closed forms of (dσ)∨, Plancherel, the L² restriction estimates and the transfer between congruent surfaces.
"""

from __future__ import annotations

import logging
import math
from typing import Any, Dict, List

import numpy as np

from ...errors import NotCongruent
from ...field import FFunction, Measure, lp_norm, random_function
from ...fourier import (
    exact_r22,
    fourier_transform,
    fourier_transform_naive,
    stein_tomas_exponent,
    stein_tomas_transfer,
)
from ...qforms import congruence_transform
from ...surfaces import (
    Surface,
    SurfaceFunction,
    equivalence_transfer,
    extension,
    extension_operator_norm,
    fourier_decay,
    restriction,
    surface_measure_direct,
    surface_measure_inverse_ft,
)
from ..scenario import Outcome, Parameters, ScenarioContext, ScenarioKind, scenario
from .sampling import log_p, phase_function, random_form, random_invertible, random_points

logger = logging.getLogger(__name__)

# Exponents of the support and L^∞ estimates: q = 2, θ = 1/2, so ‖f‖ is taken in L^{(q/θ)'} = L^{4/3}.
Q_EXP = 2.0
THETA = 0.5
NORMALIZING_EXP = 4.0 / 3.0


def closed_form_surfaces(context: ScenarioContext) -> List[Surface]:
    surfaces = [Surface.paraboloid(context.field, context.dim)]
    if context.dim % 2:
        surfaces.insert(0, Surface.hyperbolic_paraboloid(context.field, context.dim))
    return surfaces


def _closed_form_deviation(surface: Surface) -> Outcome:
    closed = surface_measure_inverse_ft(surface)
    direct = surface_measure_direct(surface)
    deviation = closed.max_deviation(direct)
    decay = fourier_decay(surface)
    predicted = surface.field.p ** (-(surface.dim - 1) / 2)
    details = {"surface": repr(surface), "decay": decay, "predicted_decay": predicted}
    return Outcome(max(deviation, abs(decay - predicted)), witness=closed - direct, details=details)


@scenario("FT-1", "closed form of (dσ)∨ on the hyperbolic paraboloid", ScenarioKind.EXACT_IDENTITY, dims=(3, 5))
def hyperbolic_closed_form(context: ScenarioContext) -> Outcome:
    return _closed_form_deviation(Surface.hyperbolic_paraboloid(context.field, context.dim))


@scenario("FT-2", "closed form of (dσ)∨ on the paraboloid", ScenarioKind.EXACT_IDENTITY, dims=(2, 3, 4, 5))
def paraboloid_closed_form(context: ScenarioContext) -> Outcome:
    return _closed_form_deviation(Surface.paraboloid(context.field, context.dim))


@scenario(
    "FT-3",
    "Plancherel and the fast transform against the defining sum",
    ScenarioKind.EXACT_IDENTITY,
    dims=(1, 2, 3),
    trials=20,
)
def plancherel(context: ScenarioContext) -> Outcome:
    worst, witness = 0.0, None
    size = context.field.p**context.dim
    for rng in context.trial_rngs():
        f = random_function(context.field, context.dim, rng)
        transform = fourier_transform(f)
        energy = float(np.sum(np.abs(f.data) ** 2))
        deviation = abs(float(np.sum(np.abs(transform.data) ** 2)) / size - energy) / energy
        deviation = max(deviation, transform.max_deviation(fourier_transform_naive(f)))
        if deviation >= worst:
            worst, witness = deviation, f
    return Outcome(worst, witness=witness)


def _worst_ratio(ratios: List[float], witnesses: List[Any]) -> Outcome:
    if not ratios:
        return Outcome(0.0, details={"samples": 0})
    best = int(np.argmax(ratios))
    return Outcome(ratios[best], witness=witnesses[best], details={"samples": len(ratios)})


@scenario(
    "ST-1",
    "Stein–Tomas with a lower bound λ on the support",
    ScenarioKind.CONSTANT_TRACKED,
    dims=(3, 5),
    oracle=("random-support-functions", Parameters(3, 3, 200, 0)),
)
def support_lower_bound(context: ScenarioContext) -> Outcome:
    """‖f̂‖_{L²(dσ)} ≤ C(1 + p^{−d̃/4} λ^{−θ/(q−θ)}) when |f| ≥ λ on its support and ‖f‖_{4/3} = 1.

    The exact chain ‖f̂‖² ≤ ‖f‖₂² + max|(dσ)∨|·‖f‖₁² behind it is checked on every sample.
    """
    field, dim = context.field, context.dim
    tolerance = context.settings.tolerance
    d_tilde = dim - 1
    ratios: List[float] = []
    witnesses: List[Any] = []
    chain_failures = 0
    for rng in context.trial_rngs():
        size = int(rng.integers(1, field.p**dim // 2 + 1))
        support = random_points(field, dim, size, rng)
        f = phase_function(field, dim, support, rng)
        f = FFunction(field, dim, f.data * rng.uniform(1.0, 4.0, f.data.size))
        f = f * (1.0 / lp_norm(f, NORMALIZING_EXP, Measure.COUNTING))
        magnitudes = np.abs(f.data)
        lam = float(magnitudes[magnitudes > 0].min())
        for surface in closed_form_surfaces(context):
            lhs = restriction(f, surface).norm(2, Measure.NORMALIZED)
            chain = float(np.sum(magnitudes**2)) + fourier_decay(surface) * float(np.sum(magnitudes)) ** 2
            if lhs**2 > chain * (1 + tolerance) + tolerance:
                chain_failures += 1
                logger.warning("support chain fails on %r: %.12g > %.12g", surface, lhs**2, chain)
            bound = 1 + field.p ** (-d_tilde / 4) * lam ** (-THETA / (Q_EXP - THETA))
            ratios.append(lhs / bound)
            witnesses.append(f)
    outcome = _worst_ratio(ratios, witnesses)
    outcome.details["chain_failures"] = chain_failures
    return Outcome(outcome.metric, False if chain_failures else None, outcome.witness, outcome.details)


@scenario(
    "ST-2",
    "Stein–Tomas with an upper bound λ on ‖f‖_∞",
    ScenarioKind.CONSTANT_TRACKED,
    dims=(3, 5),
    oracle=("random-dense-functions", Parameters(3, 3, 200, 0)),
)
def sup_upper_bound(context: ScenarioContext) -> Outcome:
    """‖f̂‖_{L²(dσ)} ≤ R*(2→2) λ^{(1−θ)/(q−θ)} when ‖f‖_∞ ≤ λ and ‖f‖_{4/3} = 1; the constant is at most 1."""
    field, dim = context.field, context.dim
    ratios: List[float] = []
    witnesses: List[Any] = []
    for rng in context.trial_rngs():
        size = int(rng.integers(1, field.p**dim + 1))
        f = phase_function(field, dim, random_points(field, dim, size, rng), rng)
        f = FFunction(field, dim, f.data * rng.exponential(1.0, f.data.size))
        f = f * (1.0 / lp_norm(f, NORMALIZING_EXP, Measure.COUNTING))
        lam = float(np.abs(f.data).max())
        for surface in closed_form_surfaces(context):
            lhs = restriction(f, surface).norm(2, Measure.NORMALIZED)
            ratios.append(lhs / (exact_r22(surface) * lam ** ((1 - THETA) / (Q_EXP - THETA))))
            witnesses.append(f)
    outcome = _worst_ratio(ratios, witnesses)
    passed = False if outcome.metric > 1 + context.settings.tolerance else None
    return Outcome(outcome.metric, passed, outcome.witness, outcome.details)


@scenario(
    "ST-3",
    "R*(2→2) = (p^d/|S|)^{1/2} against power iteration",
    ScenarioKind.EXACT_IDENTITY,
    primes=(3, 5),
    dims=(2, 3, 4, 5),
    trials=3,
)
def exact_l2_constant(context: ScenarioContext) -> Outcome:
    worst = 0.0
    estimates: Dict[str, float] = {}
    surfaces = closed_form_surfaces(context)
    for trial, rng in enumerate(context.trial_rngs()):
        for surface in surfaces:
            exact = exact_r22(surface)
            estimate = extension_operator_norm(surface, rng)
            estimates[f"{surface.kind.name.lower()}[{trial}]"] = estimate
            worst = max(worst, abs(estimate - exact) / exact)
    details: Dict[str, Any] = {"exact": exact_r22(surfaces[0]), "estimates": estimates}
    return Outcome(worst, worst <= context.settings.power_tolerance, details=details)


@scenario(
    "ST-4",
    "exponent transfer max(0, θα − d̃(1−θ)/4) and the Stein–Tomas exponent it yields",
    ScenarioKind.EXPONENT_ARITH,
    primes=(3,),
    dims=(3, 4, 5, 7),
    trials=1,
)
def transfer_arithmetic(context: ScenarioContext) -> Outcome:
    dim = context.dim
    d_tilde = dim - 1
    theta = (dim - 1) / (dim + 1)
    errors = {
        "half_half_two": abs(stein_tomas_transfer(0.5, 0.5, 2)),
        "theta_one": abs(stein_tomas_transfer(0.75, 1.0, d_tilde) - 0.75),
        "alpha_zero": abs(stein_tomas_transfer(0.0, 0.3, d_tilde)),
        "from_l2": abs(stein_tomas_transfer(0.5, theta, d_tilde)),
        "stein_tomas_exponent": abs(2 / theta - float(stein_tomas_exponent(dim))),
    }
    return Outcome(max(errors.values()), details=errors)


@scenario(
    "ST-5",
    "decay bound for sets: ‖f̂‖_{L²(dσ)} ≲ ‖f‖₂ + ‖f‖_{4γ/(4γ−d̃)}",
    ScenarioKind.CONSTANT_TRACKED,
    dims=(3, 5),
    oracle=("random-level-sets", Parameters(3, 3, 200, 0)),
)
def set_decay_bound(context: ScenarioContext) -> Outcome:
    field, dim = context.field, context.dim
    tolerance = context.settings.tolerance
    d_tilde = dim - 1
    smallest = int(math.floor(field.p ** (d_tilde / 4))) + 1
    ratios: List[float] = []
    witnesses: List[Any] = []
    chain_failures = 0
    for rng in context.trial_rngs():
        size = int(rng.integers(smallest, field.p**dim + 1))
        f = phase_function(field, dim, random_points(field, dim, size, rng), rng)
        gamma = log_p(size, field.p)
        exponent = 4 * gamma / (4 * gamma - d_tilde)
        for surface in closed_form_surfaces(context):
            lhs = restriction(f, surface).norm(2, Measure.NORMALIZED)
            if lhs**2 > (size + fourier_decay(surface) * size**2) * (1 + tolerance):
                chain_failures += 1
            rhs = lp_norm(f, 2, Measure.COUNTING) + lp_norm(f, exponent, Measure.COUNTING)
            ratios.append(lhs / rhs)
            witnesses.append(f)
    outcome = _worst_ratio(ratios, witnesses)
    outcome.details["chain_failures"] = chain_failures
    return Outcome(outcome.metric, False if chain_failures else None, outcome.witness, outcome.details)


@scenario(
    "ST-6",
    "level sets under R*(2→2) ≲ p^{1/2}: ‖f̂‖_{L²(dσ)} ≤ ‖f‖_{2γ/(γ+1)}",
    ScenarioKind.CONSTANT_TRACKED,
    dims=(3, 5),
    oracle=("random-level-sets", Parameters(3, 3, 200, 0)),
)
def level_set_transfer(context: ScenarioContext) -> Outcome:
    """With R*(p→q) ≲ p^α and |E| = p^γ, ‖f̂‖_{L^{p'}(dσ)} ≲ ‖f‖_{qγ/(qγ−γ+αq)}; here p = q = 2 and α = log_p R*."""
    field, dim = context.field, context.dim
    ratios: List[float] = []
    witnesses: List[Any] = []
    for rng in context.trial_rngs():
        size = int(rng.integers(field.p, field.p**dim + 1))
        f = phase_function(field, dim, random_points(field, dim, size, rng), rng)
        gamma = log_p(size, field.p)
        for surface in closed_form_surfaces(context):
            alpha = log_p(exact_r22(surface), field.p)
            exponent = 2 * gamma / (2 * gamma - gamma + 2 * alpha)
            lhs = restriction(f, surface).norm(2, Measure.NORMALIZED)
            ratios.append(lhs / lp_norm(f, exponent, Measure.COUNTING))
            witnesses.append(f)
    outcome = _worst_ratio(ratios, witnesses)
    passed = False if outcome.metric > 1 + context.settings.tolerance else None
    return Outcome(outcome.metric, passed, outcome.witness, outcome.details)


def _norm_deviation(f: SurfaceFunction, g: SurfaceFunction, dim: int) -> float:
    worst = 0.0
    extended_f, extended_g = extension(f), extension(g)
    for exponent in (2.0, 4.0, float(stein_tomas_exponent(dim))):
        first = lp_norm(extended_f, exponent, Measure.COUNTING)
        second = lp_norm(extended_g, exponent, Measure.COUNTING)
        worst = max(worst, abs(first - second) / max(first, 1e-300))
    for exponent in (1.0, 2.0, 4.0):
        first = f.norm(exponent, Measure.NORMALIZED)
        second = g.norm(exponent, Measure.NORMALIZED)
        worst = max(worst, abs(first - second) / max(first, 1e-300))
    return worst


@scenario(
    "EQ-1",
    "congruent forms have surfaces with the same extension norms",
    ScenarioKind.EXACT_IDENTITY,
    dims=(3, 4, 5),
    trials=10,
)
def congruent_surfaces(context: ScenarioContext) -> Outcome:
    field, dim = context.field, context.dim
    worst, witness = 0.0, None
    details: Dict[str, Any] = {}
    for rng in context.trial_rngs():
        source = random_form(field, dim - 1, rng)
        target = source.transformed(random_invertible(field, dim - 1, rng))
        first, second = Surface(source), Surface(target)
        f = SurfaceFunction.random(first, rng)
        g = equivalence_transfer(f, congruence_transform(source, target), second)
        deviation = _norm_deviation(f, g, dim)
        if deviation >= worst:
            worst, witness = deviation, f
    if dim % 2:
        paraboloid = Surface.paraboloid(field, dim)
        hyperbolic = Surface.hyperbolic_paraboloid(field, dim)
        try:
            change = congruence_transform(paraboloid.form, hyperbolic.form)
        except NotCongruent:
            details["paraboloid_congruent"] = False
        else:
            details["paraboloid_congruent"] = True
            f = SurfaceFunction.random(paraboloid, context.rng(context.trials))
            worst = max(worst, _norm_deviation(f, equivalence_transfer(f, change, hyperbolic), dim))
    return Outcome(worst, witness=witness, details=details)
