"""
Finite field restriction and Kakeya lab: Fourier analysis on F_p^d, quadratic surfaces and the combinatorics that
controls their extension operators, with a harness that turns each identity and inequality into a reproducible check.

:copyright: (c) 2026-present fflab contributors
:license: MIT, see LICENSE for more details.
"""

from __future__ import annotations

from .config import Settings, get_settings, override_settings
from .errors import FFLabError
from .field import FFunction, Measure, PrimeField, get_field
from .fourier import fourier_transform, inverse_transform
from .qforms import QuadraticSpace, Subspace, witt_index
from .surfaces import Surface, SurfaceFunction, extension, restriction

__title__ = "fflab"
__author__ = "fflab contributors"
__license__ = "MIT"
__copyright__ = "Copyright 2026-present fflab contributors"
__version__ = "0.3.0"

__all__ = [
    "FFLabError",
    "FFunction",
    "Measure",
    "PrimeField",
    "QuadraticSpace",
    "Settings",
    "Subspace",
    "Surface",
    "SurfaceFunction",
    "extension",
    "fourier_transform",
    "get_field",
    "get_settings",
    "inverse_transform",
    "override_settings",
    "restriction",
    "witt_index",
]
