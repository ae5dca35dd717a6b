"""
The exponent table against the values it is supposed to state.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List

from ...fourier import conjectured_exponent, stein_tomas_exponent
from ..renderer import ReportFormat
from ..scenario import Outcome, ScenarioContext, ScenarioKind, scenario
from ..table import (
    D5_THRESHOLD,
    DELTA_3,
    DELTA_5,
    PAIR_P3,
    PAIR_Q3,
    d5_energy_exponent,
    exponent_rows,
    exponent_table,
    main_cutoff,
)
from ..template_engines.template_engine import fraction

EXPECTED = {
    "pair_p3": (PAIR_P3, Fraction(18, 5)),
    "pair_q3": (PAIR_Q3, Fraction(9, 4)),
    "delta_3": (DELTA_3, Fraction(4, 10)),
    "delta_5": (DELTA_5, Fraction(1, 16)),
    "d5_threshold": (D5_THRESHOLD, Fraction(47, 31)),
    "stein_tomas_3_minus_delta_3": (stein_tomas_exponent(3) - DELTA_3, Fraction(18, 5)),
    "d5_energy_at_9/16": (d5_energy_exponent(Fraction(9, 16)), Fraction(23, 8)),
    "d5_cutoff": (main_cutoff(5), (Fraction(74, 25), Fraction(24, 25))),
}

RENDERED = ("18/5", "9/4", "4/10", "47/31", "47/16")


@scenario(
    "MAIN-1",
    "the exponent table states the d = 3 restriction pair, δ3, the d = 5 threshold and the Stein–Tomas rows",
    ScenarioKind.EXPONENT_ARITH,
    primes=(3,),
    dims=(3,),
)
def exponent_bookkeeping(context: ScenarioContext) -> Outcome:
    del context
    failures: List[str] = []
    for name, (value, expected) in EXPECTED.items():
        if value != expected:
            failures.append(f"{name} = {value}, expected {expected}")
    for row in exponent_rows():
        if row.stein_tomas != Fraction(2 * row.dim + 2, row.dim - 1):
            failures.append(f"d={row.dim}: Stein-Tomas exponent {row.stein_tomas}")
        if row.conjectured != conjectured_exponent(row.dim) or row.conjectured != Fraction(2 * row.dim, row.dim - 1):
            failures.append(f"d={row.dim}: conjectured exponent {row.conjectured}")
    for report_format in (ReportFormat.TEXT, ReportFormat.MARKDOWN):
        text = exponent_table(report_format, measured=[])
        failures += [f"{report_format.value} table lacks {value}" for value in RENDERED if value not in text]
        for row in exponent_rows():
            rendered = fraction(row.stein_tomas)
            if rendered not in text:
                failures.append(f"{report_format.value} table lacks the Stein-Tomas exponent {rendered}")
    return Outcome(float(len(failures)), witness=failures or None)
