"""
Scenario modules. Importing this package registers every scenario.
"""

from . import bochner_riesz, energy, kakeya, main, planar, quadratic, transforms  # noqa: F401

__all__ = ["bochner_riesz", "energy", "kakeya", "main", "planar", "quadratic", "transforms"]
