"""
Fourier analysis on F_p^d.

Space carries counting measure and the dual carries normalized counting measure, so

    f̂(ξ) = Σ_x f(x) e(−x·ξ),        f(x) = p^{-d} Σ_ξ f̂(ξ) e(x·ξ).

On the (p,)*d grid these are exactly ``numpy.fft.fftn`` and ``numpy.fft.ifftn``: one length-p transform along
each axis.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Tuple, Union

import numpy as np
import numpy.typing as npt
from typing_extensions import Protocol

from .config import get_settings
from .errors import NonComplementary
from .field import ComplexArray, FFunction, Measure, PrimeField, array_norm, check_size, coordinates, encode_array
from .qforms import Subspace, matrix_inverse

logger = logging.getLogger(__name__)

Operator = Callable[[ComplexArray], ComplexArray]
Norm = Callable[[ComplexArray], float]


def fourier_transform(f: FFunction) -> FFunction:
    """f̂(ξ) = Σ_x f(x) e(−x·ξ), computed axis by axis."""
    return FFunction.from_grid(f.field, np.fft.fftn(f.grid()))


def inverse_transform(g: FFunction) -> FFunction:
    """g∨(x) = p^{-d} Σ_ξ g(ξ) e(x·ξ)."""
    return FFunction.from_grid(g.field, np.fft.ifftn(g.grid()))


def fourier_transform_naive(f: FFunction) -> FFunction:
    """The defining double sum, through the full character matrix. Reserved for cross-checks."""
    check_size(f.data.size**2, "p^{2d}")
    points = coordinates(f.field, f.dim)
    pairing = points @ points.T % f.field.p
    return FFunction(f.field, f.dim, f.field.characters()(-pairing) @ f.data)


@dataclass(frozen=True)
class MixedNormSpec:
    """Iterated norm ‖F‖_{L^q_{V(,t)} L^p_W} over the decomposition F_p^m = V ⊕ W.

    Attributes:
        outer (Subspace): V, summed in the outer L^q
        inner (Subspace): W, summed in the inner L^p
        outer_exp (float): q
        inner_exp (float): p
        include_t (bool): whether the time coordinate of F_p^m × F_p joins the outer sum (otherwise the inner one)
    """

    outer: Subspace
    inner: Subspace
    outer_exp: float
    inner_exp: float
    include_t: bool = True

    def __post_init__(self) -> None:
        if self.outer.ambient != self.inner.ambient or not (self.outer.is_linear and self.inner.is_linear):
            raise NonComplementary("V and W must be linear subspaces of the same space")
        if self.outer.dim + self.inner.dim != self.outer.ambient:
            raise NonComplementary(f"dim V + dim W = {self.outer.dim + self.inner.dim} != {self.outer.ambient}")
        if self.outer.intersection(self.inner).dim:  # type: ignore[union-attr]
            raise NonComplementary("V and W intersect non-trivially")
        if min(self.outer_exp, self.inner_exp) < 1:
            raise ValueError("norm exponents must be at least 1")

    @property
    def ambient(self) -> int:
        return self.outer.ambient

    def coefficients(self) -> Tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
        """For every x of F_p^m in index order, the index of its W-part and of its V-part."""
        field = self.outer.field
        basis = np.vstack([self.inner.matrix, self.outer.matrix])
        coords = coordinates(field, self.ambient) @ matrix_inverse(field, basis) % field.p
        inner = encode_array(field, coords[:, : self.inner.dim]) if self.inner.dim else np.zeros(len(coords), int)
        outer = encode_array(field, coords[:, self.inner.dim :]) if self.outer.dim else np.zeros(len(coords), int)
        return inner, outer


def _row_norms(values: npt.NDArray[np.float64], exponent: float, weight: float) -> npt.NDArray[np.float64]:
    if np.isinf(exponent):
        return values.max(axis=1)
    return (weight * np.sum(values**exponent, axis=1)) ** (1.0 / exponent)


def mixed_norm(values: npt.ArrayLike, spec: MixedNormSpec, measure: Measure) -> float:
    """Iterated norm of a function on F_p^m × F_p (``p^{m+1}`` values) or on F_p^m (``p^m`` values).

    Args:
        values (npt.ArrayLike): flat values in index order, e.g. ``FFunction.data`` or ``SurfaceFunction.values``
        spec (MixedNormSpec): the decomposition and exponents
        measure (Measure): counting measure, or normalized measure on each factor

    Returns (float): the mixed norm
    """
    field = spec.outer.field
    p = field.p
    flat = np.abs(np.asarray(values)).ravel()
    base = p**spec.ambient
    if flat.size not in (base, base * p):
        raise ValueError(f"expected {base} or {base * p} values, got {flat.size}")
    times = flat.size // base
    inner_index, outer_index = spec.coefficients()
    table = np.zeros((spec.outer.size, spec.inner.size, times))
    table[outer_index, inner_index, :] = flat.reshape(times, base).T
    if spec.include_t:
        table = table.transpose(0, 2, 1).reshape(spec.outer.size * times, spec.inner.size)
    else:
        table = table.reshape(spec.outer.size, spec.inner.size * times)
    normalized = measure is Measure.NORMALIZED
    inner_weight = 1.0 / table.shape[1] if normalized else 1.0
    outer_weight = 1.0 / table.shape[0] if normalized else 1.0
    return array_norm(_row_norms(table, spec.inner_exp, inner_weight), spec.outer_exp, outer_weight)


@dataclass(frozen=True)
class ExponentBound:
    """A bound R*(q→p) ≤ C·p^α with C absolute."""

    p_exp: float
    q_exp: float
    alpha: float

    def __post_init__(self) -> None:
        if self.alpha < 0 or min(self.p_exp, self.q_exp) < 1:
            raise ValueError(f"invalid exponent bound {self}")


def stein_tomas_transfer(alpha: float, theta: float, d_tilde: float) -> float:
    """log_p of the constant for R*(p → q/θ) given R*(p → q) ≲ p^α and Fourier dimension d̃.

    Args:
        alpha (float): log_p of the constant at exponent q
        theta (float): interpolation parameter in (0, 1]
        d_tilde (float): Fourier dimension of the surface

    Returns (float): max(0, θα − d̃(1−θ)/4)
    """
    if alpha < 0 or d_tilde <= 0 or not 0 < theta <= 1:
        raise ValueError(f"invalid transfer parameters alpha={alpha}, theta={theta}, d_tilde={d_tilde}")
    return max(0.0, theta * alpha - d_tilde * (1 - theta) / 4)


def stein_tomas_exponent(dim: int) -> Fraction:
    return Fraction(2 * dim + 2, dim - 1)


def conjectured_exponent(dim: int) -> Fraction:
    return Fraction(2 * dim, dim - 1)


class MeasuredSurface(Protocol):
    @property
    def field(self) -> PrimeField:
        """The field the surface lives over."""
        raise NotImplementedError

    @property
    def dim(self) -> int:
        """Dimension d of the ambient space F_p^d."""
        raise NotImplementedError

    @property
    def size(self) -> int:
        """Number of points |S|."""
        raise NotImplementedError


def exact_r22(surface: MeasuredSurface) -> float:
    """R*(2→2) = (p^d/|S|)^{1/2} for any codimension one surface."""
    if surface.size <= 0:
        raise ValueError("surface must be non-empty")
    return float(np.sqrt(surface.field.p**surface.dim / surface.size))


def power_iteration(
    apply: Operator,
    adjoint: Operator,
    x0: ComplexArray,
    max_iter: int = 200,
    tol: Optional[float] = None,
    norm_in: Optional[Norm] = None,
    norm_out: Optional[Norm] = None,
) -> Tuple[float, ComplexArray]:
    """Dominant singular value of ``apply`` by iterating its normal operator.

    Args:
        apply (Operator): the operator A
        adjoint (Operator): A* with respect to the inner products behind ``norm_in``/``norm_out``
        x0 (ComplexArray): non-zero starting vector
        max_iter (int): iteration cap
        tol (Optional[float]): relative change at which to stop, defaults to the configured power tolerance
        norm_in (Optional[Norm]): norm on the domain, Euclidean by default
        norm_out (Optional[Norm]): norm on the range, Euclidean by default

    Returns (Tuple[float, ComplexArray]): the estimate and the final unit vector
    """
    tol = get_settings().power_tolerance if tol is None else tol
    norm_in = norm_in or (lambda v: float(np.linalg.norm(v)))
    norm_out = norm_out or (lambda v: float(np.linalg.norm(v)))
    x = x0 / norm_in(x0)
    ratio_old = float("inf")
    for iteration in range(max_iter):
        image = apply(x)
        ratio = norm_out(image)
        logger.debug("power iteration %d: estimate %.12g", iteration + 1, ratio)
        if ratio == 0 or abs(ratio - ratio_old) / ratio < tol:
            logger.debug("power iteration converged after %d iterations", iteration + 1)
            return ratio, x
        ratio_old = ratio
        x = adjoint(image)
        x = x / norm_in(x)
    logger.warning("power iteration stopped at max_iter=%d without reaching tol=%g", max_iter, tol)
    return norm_out(apply(x)), x


def _duality_map(values: ComplexArray, exponent: float) -> ComplexArray:
    """y ↦ y|y|^{r−2}, the gradient direction of ‖y‖_r^r."""
    magnitude = np.abs(values)
    scale = np.zeros_like(magnitude)
    nonzero = magnitude > 0
    scale[nonzero] = magnitude[nonzero] ** (exponent - 2)
    return values * scale


def ratio_power_method(
    apply: Operator,
    adjoint: Operator,
    x0: ComplexArray,
    p_exp: float,
    q_exp: float,
    weight_in: float = 1.0,
    weight_out: float = 1.0,
    max_iter: int = 100,
) -> Tuple[float, ComplexArray]:
    """Nonlinear power method climbing ‖Ax‖_p/‖x‖_q from ``x0``.

    Iterates x ← ψ_{q'}(A* ψ_p(Ax)) with ψ_r(y) = y|y|^{r−2}. Every iterate is a concrete test function,
    so the best ratio seen is a lower bound for the operator norm, never an estimate from above.

    Args:
        apply (Operator): the operator A
        adjoint (Operator): A* for the weighted inner products
        x0 (ComplexArray): starting vector
        p_exp (float): range exponent p ≥ 1
        q_exp (float): domain exponent q > 1
        weight_in (float): uniform weight of the domain measure
        weight_out (float): uniform weight of the range measure
        max_iter (int): iteration cap

    Returns (Tuple[float, ComplexArray]): best ratio and its function
    """
    if q_exp <= 1:
        raise ValueError("the nonlinear power method needs q > 1")
    dual = q_exp / (q_exp - 1)
    best_ratio, best = 0.0, x0
    x = x0
    for iteration in range(max_iter):
        denominator = array_norm(x, q_exp, weight_in)
        if denominator == 0:
            break
        image = apply(x)
        ratio = array_norm(image, p_exp, weight_out) / denominator
        if ratio > best_ratio * (1 + 1e-12):
            best_ratio, best = ratio, x
        elif iteration:
            break
        x = _duality_map(adjoint(_duality_map(image, p_exp)), dual)
    logger.debug("ratio power method: best ratio %.12g", best_ratio)
    return best_ratio, best


def reverse_minkowski_gap(pieces: npt.ArrayLike, exponent: float) -> float:
    """Σ a_i^r − (Σ a_i)^r for non-negative pieces, non-negative whenever 0 < r ≤ 1."""
    pieces = np.asarray(pieces, dtype=np.float64)
    if np.any(pieces < 0) or not 0 < exponent <= 1:
        raise ValueError("pieces must be non-negative and 0 < r <= 1")
    return float(np.sum(pieces**exponent) - np.sum(pieces) ** exponent)


def hoelder_gap(f: Union[FFunction, ComplexArray], g: Union[FFunction, ComplexArray], exponent: float) -> float:
    """‖f‖_r‖g‖_{r'} − |⟨f, g⟩| under counting measure."""
    f_values = f.data if isinstance(f, FFunction) else np.asarray(f)
    g_values = g.data if isinstance(g, FFunction) else np.asarray(g)
    conjugate = np.inf if exponent == 1 else (1.0 if np.isinf(exponent) else exponent / (exponent - 1))
    pairing = abs(np.vdot(g_values, f_values))
    return array_norm(f_values, exponent) * array_norm(g_values, conjugate) - float(pairing)
