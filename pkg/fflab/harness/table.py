"""
Exponent bookkeeping: the asymptotic restriction landscape next to constants measured at small p.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..field import get_field
from ..fourier import conjectured_exponent, exact_r22, stein_tomas_exponent
from ..surfaces import Surface, extension_norm_lower_bound, extension_operator_norm
from .renderer import ReportFormat, RendererFactory
from .template_engines.template_engine import fraction

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]

# R*(9/4 → 18/5) ≲ 1 on the hyperbolic paraboloid in F_p³.
PAIR_P3 = Fraction(18, 5)
PAIR_Q3 = Fraction(9, 4)
# Improvements over the Stein–Tomas exponent (2d+2)/(d−1) − δ_d.
DELTA_3 = Fraction(4, 10)
DELTA_5 = Fraction(1, 16)
# ‖F̂‖_{L^{3/2}(𝒫,dσ)} ≲ ‖F‖_{L^p(F^5)} for p below this threshold.
D5_THRESHOLD = Fraction(47, 31)


def d5_competing_exponents(gamma: Number) -> Tuple[Number, Number]:
    """The two exponents of p bounding ‖F̂‖_{L^{3/2}(𝒫,dσ)} for F ∼ 1 on |E| = p^γ in F_p⁵."""
    return (-22 * gamma**2 + 7 * gamma + 1) / (3 - 31 * gamma), (47 * gamma - 15) / Fraction(64)


def d5_energy_exponent(alpha: Number) -> Number:
    """Ψ(α) = max((19 + 2α)/7, 23/8) for the paraboloid in F_p⁵."""
    return max((19 + 2 * alpha) / Fraction(7), Fraction(23, 8))


def main_cutoff(dim: int) -> Tuple[Fraction, Fraction]:
    """(γ, α): sets with γ ≤ (d+1)/2 − 1/d² are handled by decay alone, the rest are split at α = 1 − 1/d²."""
    return Fraction(dim + 1, 2) - Fraction(1, dim * dim), 1 - Fraction(1, dim * dim)


@dataclass(frozen=True)
class Bound:
    label: str
    value: str
    exponent: Optional[Fraction] = None


@dataclass(frozen=True)
class ExponentRow:
    dim: int
    surface: str
    conjectured: Fraction
    stein_tomas: Fraction
    bounds: Tuple[Bound, ...]


@dataclass(frozen=True)
class MeasuredRow:
    """R*(2→2) exactly and by power iteration, and a lower bound for R*(q → p). Never asymptotic."""

    surface: str
    dim: int
    prime: int
    exact: float
    power: float
    lower: Optional[float] = None
    q_exp: Optional[Fraction] = None
    p_exp: Optional[Fraction] = None


def exponent_rows() -> List[ExponentRow]:
    rows = [
        ExponentRow(
            3,
            "hyperbolic paraboloid",
            conjectured_exponent(3),
            stein_tomas_exponent(3),
            (
                Bound("R*(q -> p)", f"p = {fraction(PAIR_P3)}, q = {fraction(PAIR_Q3)}", PAIR_P3),
                Bound("delta_3", f"4/10, p = {fraction(stein_tomas_exponent(3) - DELTA_3)}", DELTA_3),
                Bound("sharp q at p = 18/5", fraction(PAIR_Q3), PAIR_Q3),
            ),
        )
    ]
    for dim in (4, 5, 6, 7):
        gamma, alpha = main_cutoff(dim)
        bounds = [Bound("decay cut-off", f"gamma <= {fraction(gamma)}, alpha = {fraction(alpha)}", gamma)]
        if dim == 5:
            bounds = [
                Bound("delta_5", f"1/16 - eps, p = {fraction(stein_tomas_exponent(5) - DELTA_5)} + eps", DELTA_5),
                Bound("L^{3/2}(dsigma) <- L^p", f"p < {fraction(D5_THRESHOLD)}", D5_THRESHOLD),
                Bound("competing exponents", "(-22g^2 + 7g + 1)/(3 - 31g), (47g - 15)/64"),
                Bound("energy exponent", "max((19 + 2a)/7, 23/8)"),
            ] + bounds
        row = ExponentRow(dim, "paraboloid", conjectured_exponent(dim), stein_tomas_exponent(dim), tuple(bounds))
        rows.append(row)
    return rows


def measured_rows(
    primes: Sequence[int] = (3, 5), trials: int = 2, seed: int = 0, lower_bounds: bool = True
) -> List[MeasuredRow]:
    """Desk-scale constants for the closed-form surfaces in F_p³."""
    rows = []
    for p in primes:
        field = get_field(p)
        for surface in (Surface.hyperbolic_paraboloid(field, 3), Surface.paraboloid(field, 3)):
            rng = np.random.default_rng(seed)
            lower = None
            if lower_bounds:
                lower = extension_norm_lower_bound(surface, float(PAIR_P3), float(PAIR_Q3), trials, rng).value
            name = surface.kind.name.lower().replace("_", " ")
            power = extension_operator_norm(surface, rng)
            row = MeasuredRow(name, 3, p, exact_r22(surface), power, lower, PAIR_Q3, PAIR_P3)
            logger.debug("measured %s at p=%d: exact %.6g, power %.6g", name, p, row.exact, row.power)
            rows.append(row)
    return rows


def exponent_table(
    report_format: ReportFormat = ReportFormat.TEXT, measured: Optional[Sequence[MeasuredRow]] = None
) -> str:
    """Renders the exponent landscape, measuring the desk-scale rows unless they are given."""
    if measured is None:
        measured = measured_rows()
    return RendererFactory.table(report_format).render({"rows": exponent_rows(), "measured": list(measured)})
