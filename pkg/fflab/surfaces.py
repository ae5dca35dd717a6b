"""
Quadratic surfaces S = {(ξ, Q(ξ)) : ξ ∈ F_p^{d−1}} and the operators living on them.

Surface functions are indexed by ξ ∈ F_p^{d−1} through the identification ξ ↦ (ξ, Q(ξ)) and are measured with
the normalized surface measure dσ, so the extension operator reads

    (g dσ)∨(x) = |S|^{-1} Σ_ξ g(ξ) e(x·(ξ, Q(ξ))).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum, auto
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .errors import DegenerateForm, NotCongruent
from .field import (
    ComplexArray,
    FFunction,
    IntArray,
    Measure,
    PrimeField,
    array_norm,
    coordinates,
    encode_array,
    lp_norm,
    measure_weight,
)
from .fourier import exact_r22, fourier_transform, inverse_transform, power_iteration, ratio_power_method
from .qforms import QuadraticSpace, Subspace, enumerate_max_isotropic, mat_mul, matrix_inverse

logger = logging.getLogger(__name__)


class SurfaceKind(Enum):
    PARABOLOID = auto()
    HYPERBOLIC_PARABOLOID = auto()
    GENERAL = auto()

    @classmethod
    def from_str(cls, value: str) -> Optional[SurfaceKind]:
        normalized = value.strip().lower().replace("-", "_")
        for kind in cls:
            if kind.name.lower() == normalized:
                return kind
        return None


class Surface:
    """The graph of a non-degenerate quadratic form Q on F_p^{d−1}, sitting in F_p^d."""

    __slots__ = "_form", "_kind", "_points", "_lift_index"

    def __init__(self, form: QuadraticSpace, kind: SurfaceKind = SurfaceKind.GENERAL):
        if form.is_degenerate:
            raise DegenerateForm(form.rank, form.dim)
        base = coordinates(form.field, form.dim)
        points = np.hstack([base, form.value(base)[:, None]])
        points.setflags(write=False)
        self._form = form
        self._kind = kind
        self._points = points
        self._lift_index = encode_array(form.field, points)
        self._lift_index.setflags(write=False)

    @classmethod
    def paraboloid(cls, field: PrimeField, dim: int) -> Surface:
        """{(ξ, ξ·ξ)} in F_p^d."""
        return cls(QuadraticSpace.dot(field, dim - 1), SurfaceKind.PARABOLOID)

    @classmethod
    def hyperbolic_paraboloid(cls, field: PrimeField, dim: int) -> Surface:
        """{(ξ1, ξ2, ξ1·ξ2)} in F_p^d with d = 2n + 1."""
        if dim % 2 == 0:
            raise ValueError(f"the hyperbolic paraboloid needs odd dimension, got {dim}")
        return cls(QuadraticSpace.hyperbolic(field, (dim - 1) // 2), SurfaceKind.HYPERBOLIC_PARABOLOID)

    @classmethod
    def of_kind(cls, kind: SurfaceKind, field: PrimeField, dim: int) -> Surface:
        if kind is SurfaceKind.PARABOLOID:
            return cls.paraboloid(field, dim)
        if kind is SurfaceKind.HYPERBOLIC_PARABOLOID:
            return cls.hyperbolic_paraboloid(field, dim)
        raise ValueError("general surfaces need an explicit quadratic form")

    @property
    def form(self) -> QuadraticSpace:
        return self._form

    @property
    def kind(self) -> SurfaceKind:
        return self._kind

    @property
    def field(self) -> PrimeField:
        return self._form.field

    @property
    def dim(self) -> int:
        return self._form.dim + 1

    @property
    def size(self) -> int:
        return len(self._points)

    @property
    def points(self) -> IntArray:
        """The surface points (ξ, Q(ξ)), row i corresponding to the i-th ξ in index order."""
        return self._points

    @property
    def lift_index(self) -> IntArray:
        """Index in F_p^d of every surface point."""
        return self._lift_index

    def contains(self, point: npt.ArrayLike) -> bool:
        point = np.asarray(point, dtype=np.int64) % self.field.p
        return int(self._form.value(point[:-1])) == int(point[-1])

    def base_index(self, points: npt.ArrayLike) -> IntArray:
        """Surface-function index of surface points (the index of their first d−1 coordinates)."""
        points = np.asarray(points, dtype=np.int64).reshape(-1, self.dim)
        return encode_array(self.field, points[:, :-1])

    def lift(self, values: npt.ArrayLike) -> FFunction:
        """The function on F_p^d equal to ``values`` on S and zero elsewhere."""
        data = np.zeros(self.field.p**self.dim, dtype=np.complex128)
        data[self._lift_index] = values
        return FFunction(self.field, self.dim, data)

    def __repr__(self) -> str:
        return f"Surface({self._kind.name.lower()}, F_{self.field.p}^{self.dim})"


@dataclass(frozen=True, eq=False)
class SurfaceFunction:
    """A function on a surface, indexed by ξ ∈ F_p^{d−1}."""

    surface: Surface
    values: ComplexArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128).ravel()
        if values.size != self.surface.size:
            raise ValueError(f"expected {self.surface.size} values, got {values.size}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, surface: Surface, value: complex = 1.0) -> SurfaceFunction:
        return cls(surface, np.full(surface.size, value, dtype=np.complex128))

    @classmethod
    def delta(cls, surface: Surface, base: Sequence[int]) -> SurfaceFunction:
        values = np.zeros(surface.size, dtype=np.complex128)
        values[encode_array(surface.field, [base])[0]] = 1.0
        return cls(surface, values)

    @classmethod
    def indicator(cls, surface: Surface, base_points: npt.ArrayLike) -> SurfaceFunction:
        values = np.zeros(surface.size, dtype=np.complex128)
        base_points = np.asarray(base_points, dtype=np.int64).reshape(-1, surface.dim - 1)
        if base_points.size:
            values[encode_array(surface.field, base_points)] = 1.0
        return cls(surface, values)

    @classmethod
    def random(cls, surface: Surface, rng: np.random.Generator) -> SurfaceFunction:
        return cls(surface, rng.standard_normal(surface.size) + 1j * rng.standard_normal(surface.size))

    def norm(self, exponent: float, measure: Measure) -> float:
        return array_norm(self.values, exponent, measure_weight(measure, self.surface.size))

    def inner(self, other: SurfaceFunction, measure: Measure) -> complex:
        return complex(np.vdot(other.values, self.values) * measure_weight(measure, self.surface.size))


def extension(f: SurfaceFunction) -> FFunction:
    """(f dσ)∨(x) = |S|^{-1} Σ_ξ f(ξ) e(x·(ξ, Q(ξ))) at every x of F_p^d."""
    surface = f.surface
    lifted = inverse_transform(surface.lift(f.values))
    return lifted * (surface.field.p**surface.dim / surface.size)


def restriction(F: FFunction, surface: Surface) -> SurfaceFunction:  # pylint: disable=invalid-name
    """F̂ sampled on the surface, the adjoint of :func:`extension` between L²(dσ) and L²(dx)."""
    return SurfaceFunction(surface, fourier_transform(F).data[surface.lift_index])


def gauss_sum(field: PrimeField, t: int) -> complex:
    """Σ_{ξ ∈ F_p} e(tξ²)."""
    squares = field.elements() ** 2 % field.p
    return complex(field.characters()(t * squares).sum())


def surface_measure_inverse_ft(surface: Surface) -> FFunction:
    """(dσ)∨, in closed form for the paraboloid and the hyperbolic paraboloid.

    Hyperbolic paraboloid, d = 2n + 1: p^{-n} e(−x1·x2/t) for t ≠ 0 and δ(x1)δ(x2) on t = 0.
    Paraboloid, d = m + 1: p^{-m} G(t)^m e(−x·x/(4t)) for t ≠ 0 and δ(x) on t = 0, with G the Gauss sum.
    Any other surface falls back to extending the constant function.
    """
    field = surface.field
    p = field.p
    m = surface.dim - 1
    if surface.kind is SurfaceKind.GENERAL:
        return surface_measure_direct(surface)
    points = coordinates(field, surface.dim)
    base, times = points[:, :-1], points[:, -1]
    values = np.zeros(len(points), dtype=np.complex128)
    slice_zero = times == 0
    values[slice_zero & ~base.any(axis=1)] = 1.0
    inverses = field.inverses[times]
    chars = field.characters()
    active = ~slice_zero
    if surface.kind is SurfaceKind.HYPERBOLIC_PARABOLOID:
        n = m // 2
        pairing = np.sum(base[:, :n] * base[:, n:], axis=1)
        values[active] = p ** (-n) * chars(-pairing[active] * inverses[active])
    else:
        quarter = field.inverse(4)
        norms = np.sum(base * base, axis=1)
        gauss = np.array([gauss_sum(field, t) for t in range(p)])
        values[active] = p ** (-m) * gauss[times[active]] ** m * chars(-norms[active] * quarter * inverses[active])
    return FFunction(field, surface.dim, values)


def surface_measure_direct(surface: Surface) -> FFunction:
    """(dσ)∨ by summing the definition."""
    return extension(SurfaceFunction.constant(surface))


def fourier_decay(surface: Surface) -> float:
    """max_{x ≠ 0} |(dσ)∨(x)|."""
    return float(np.max(np.abs(surface_measure_inverse_ft(surface).data[1:])))


class BochnerRieszVariant(Enum):
    """Which kernel the Bochner–Riesz operator convolves with."""

    KERNEL_ONLY = auto()
    WITH_DELTA = auto()

    @classmethod
    def from_str(cls, value: str) -> Optional[BochnerRieszVariant]:
        for variant in cls:
            if variant.name.lower() == value.strip().lower().replace("-", "_"):
                return variant
        return None


class ConvolutionMethod(Enum):
    DIRECT = auto()
    FOURIER = auto()


def bochner_riesz_kernel(surface: Surface, variant: BochnerRieszVariant) -> FFunction:
    """K̃ = (dσ)∨ for ``KERNEL_ONLY`` and K = (dσ)∨ − δ_0 for ``WITH_DELTA``."""
    kernel = surface_measure_inverse_ft(surface)
    if variant is BochnerRieszVariant.WITH_DELTA:
        kernel = kernel - FFunction.delta(surface.field, surface.dim)
    return kernel


def convolve(f: FFunction, g: FFunction, method: ConvolutionMethod = ConvolutionMethod.FOURIER) -> FFunction:
    """(f * g)(x) = Σ_y f(y) g(x − y) under counting measure."""
    if method is ConvolutionMethod.FOURIER:
        return inverse_transform(fourier_transform(f) * fourier_transform(g))
    grid = g.grid()
    result = np.zeros(f.shape, dtype=np.complex128)
    points = coordinates(f.field, f.dim)
    for index in f.support():
        result += f.data[index] * np.roll(grid, tuple(points[index]), axis=tuple(range(f.dim)))
    return FFunction.from_grid(f.field, result)


def bochner_riesz(
    F: FFunction,  # pylint: disable=invalid-name
    surface: Surface,
    variant: BochnerRieszVariant,
    method: ConvolutionMethod = ConvolutionMethod.FOURIER,
) -> FFunction:
    """Convolution of ``F`` with the Bochner–Riesz kernel of ``surface``.

    Args:
        F (FFunction): function on F_p^d
        surface (Surface): the surface defining the kernel
        variant (BochnerRieszVariant): K̃ = (dσ)∨ or K = (dσ)∨ − δ_0
        method (ConvolutionMethod): direct shifted sums or multiplication on the Fourier side

    Returns (FFunction): F * kernel
    """
    return convolve(F, bochner_riesz_kernel(surface, variant), method)


@dataclass(frozen=True)
class Tube:
    """The tube {(x1, x2, t) : x2 = x2′ − m(t − t′)} ⊂ F_p³ over a line of direction m."""

    field: PrimeField
    direction: int
    base: Tuple[int, int]

    def points(self) -> IntArray:
        p = self.field.p
        x1, t = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
        x2 = (self.base[0] - self.direction * (t - self.base[1])) % p
        return np.stack([x1.ravel(), x2.ravel(), t.ravel()], axis=1)

    def projection(self) -> IntArray:
        """The (x2, t) line underneath the tube."""
        t = np.arange(self.field.p)
        return np.stack([(self.base[0] - self.direction * (t - self.base[1])) % self.field.p, t], axis=1)

    def contains(self, point: Sequence[int]) -> bool:
        _, x2, t = point
        return (x2 - self.base[0] + self.direction * (t - self.base[1])) % self.field.p == 0

    def indicator(self) -> FFunction:
        return FFunction.indicator(self.field, 3, self.points())


def tube_family(field: PrimeField) -> Iterator[Tube]:
    """All p² tubes, parameterized by direction m and base (x2′, 0)."""
    for direction in range(field.p):
        for offset in range(field.p):
            yield Tube(field, direction, (offset, 0))


def tube_kernel(field: PrimeField, direction: int) -> FFunction:
    """𝒥_m(x1, x2, t) = δ(x2/t + m) for t ≠ 0 and δ(x2) on t = 0, i.e. the indicator of x2 + mt = 0."""
    return Tube(field, direction, (0, 0)).indicator()


def line_union_function(field: PrimeField, lines: Sequence[Tuple[int, int]], slices: npt.ArrayLike) -> FFunction:
    """F(x1, x2, t) = Σ_i δ(x2 − x2_i) δ(t − t_i) f_i(x1) in F_p³."""
    slices = np.asarray(slices, dtype=np.complex128).reshape(len(lines), field.p)
    grid = np.zeros((field.p,) * 3, dtype=np.complex128)
    for (x2, t), values in zip(lines, slices):
        grid[:, x2 % field.p, t % field.p] += values
    return FFunction.from_grid(field, grid)


def line_intersection_exponent(field: PrimeField, lines: Sequence[Tuple[int, int]]) -> float:
    """log_p of the largest number of the points (x2_i, t_i) lying on a single tube line x2 + mt = c."""
    points = np.unique(np.asarray(lines, dtype=np.int64).reshape(-1, 2) % field.p, axis=0)
    best = 1
    for direction in range(field.p):
        offsets = (points[:, 0] + direction * points[:, 1]) % field.p
        best = max(best, int(np.bincount(offsets, minlength=field.p).max()))
    return float(np.log(best) / np.log(field.p))


def pseudo_conformal_check(h0: FFunction, surface: Surface) -> float:
    """Max over t ≠ 0 of ||(h0 * (dσ)∨)(x, t)| − p^{m/2} |(h̃0 dσ)∨(w, t′)||.

    Here d = m + 1 is odd, h0 lives on the slice t = 0 and h̃0(ξ) = h0(ξ, 0). The change of variables is
    w = (x2, x1)/t, t′ = −1/t for the hyperbolic paraboloid and w = x/(2t), t′ = −1/(4t) for the paraboloid.
    """
    field = surface.field
    p = field.p
    if surface.dim % 2 == 0 or surface.kind is SurfaceKind.GENERAL:
        raise ValueError("the pseudo-conformal identity needs a closed-form surface in odd dimension")
    grid = h0.grid()
    if np.abs(grid[..., 1:]).max(initial=0.0) > 0:
        raise ValueError("h0 must vanish off the slice t = 0")
    convolved = convolve(h0, surface_measure_inverse_ft(surface))
    extended = extension(SurfaceFunction(surface, grid[..., 0].ravel(order="F")))
    points = coordinates(field, surface.dim)
    active = points[:, -1] != 0
    base, times = points[active, :-1], points[active, -1]
    m = surface.dim - 1
    if surface.kind is SurfaceKind.HYPERBOLIC_PARABOLOID:
        n = m // 2
        inverse = field.inverses[times][:, None]
        w = np.hstack([base[:, n:], base[:, :n]]) * inverse % p
        t_prime = -field.inverses[times] % p
    else:
        inverse = field.inverses[2 * times % p][:, None]
        w = base * inverse % p
        t_prime = -field.inverses[4 * times % p] % p
    target = encode_array(field, np.hstack([w, t_prime[:, None]]))
    lhs = np.abs(convolved.data[active])
    rhs = p ** (m / 2) * np.abs(extended.data[target])
    return float(np.max(np.abs(lhs - rhs), initial=0.0))


@dataclass(frozen=True)
class PlaneEmbedding:
    """F(x1, x2, x3) = δ(x2 − a x3 − b) f(x1, x3) with its transform and the predicted reindexing."""

    embedded: FFunction
    transform: FFunction
    predicted: FFunction

    @property
    def deviation(self) -> float:
        return self.transform.max_deviation(self.predicted)


def plane_embed_ft(f: FFunction, a: int, b: int) -> PlaneEmbedding:
    """Embeds a function of F_p² into the plane x2 = a x3 + b of F_p³ and compares F̂ with
    f̂(ξ1, ξ3 + aξ2) e(−bξ2)."""
    field = f.field
    p = field.p
    if f.dim != 2:
        raise ValueError("plane embedding takes a function on F_p^2")
    points = coordinates(field, 3)
    x1, x2, x3 = points.T
    on_plane = (x2 - a * x3 - b) % p == 0
    values = np.where(on_plane, f.grid()[x1, x3], 0)
    embedded = FFunction(field, 3, values)
    small = fourier_transform(f).grid()
    predicted = small[x1, (x3 + a * x2) % p] * field.characters()(-b * x2)
    return PlaneEmbedding(embedded, fourier_transform(embedded), FFunction(field, 3, predicted))


def equivalence_transfer(f: SurfaceFunction, change: npt.ArrayLike, target: Surface) -> SurfaceFunction:
    """Moves ``f`` from S_A to S_B along M with MᵀBM = A, as g(η) = f(M^{-1}η).

    Then (g dσ_B)∨(x, t) = (f dσ_A)∨(Mᵀx, t), so every L^p(dx) norm of the extension and every L^q(dσ) norm of
    the function are preserved.

    Raises:
        NotCongruent: if MᵀBM ≠ A
    """
    source = f.surface
    field = source.field
    change = np.asarray(change, dtype=np.int64) % field.p
    if target.field != field or not np.array_equal(
        mat_mul(field, change.T, target.form.matrix, change), source.form.matrix
    ):
        raise NotCongruent("MᵀBM does not equal A")
    base = coordinates(field, source.dim - 1)
    preimage = base @ matrix_inverse(field, change).T % field.p
    return SurfaceFunction(target, f.values[encode_array(field, preimage)])


def extension_ratio(f: SurfaceFunction, p_exp: float, q_exp: float) -> float:
    """‖(f dσ)∨‖_{L^p(dx)} / ‖f‖_{L^q(dσ)}."""
    denominator = f.norm(q_exp, Measure.NORMALIZED)
    if denominator == 0:
        return 0.0
    return lp_norm(extension(f), p_exp, Measure.COUNTING) / denominator


def extension_operator_norm(surface: Surface, rng: np.random.Generator, max_iter: int = 200) -> float:
    """Power-iteration estimate of R*(2→2), the norm of extension from L²(dσ) to L²(dx)."""
    weight = 1.0 / surface.size
    estimate, _ = power_iteration(
        lambda values: extension(SurfaceFunction(surface, values)).data,
        lambda values: restriction(FFunction(surface.field, surface.dim, values), surface).values,
        rng.standard_normal(surface.size) + 1j * rng.standard_normal(surface.size),
        max_iter=max_iter,
        norm_in=lambda values: array_norm(values, 2, weight),
        norm_out=lambda values: array_norm(values, 2),
    )
    logger.debug("R*(2->2) power estimate %.12g against exact %.12g", estimate, exact_r22(surface))
    return estimate


@dataclass(frozen=True)
class LowerBound:
    """An extension ratio achieved by a concrete witness, hence a lower bound for R*(q→p)."""

    p_exp: float
    q_exp: float
    value: float
    witness: SurfaceFunction
    label: str = "lower bound"


def structured_candidates(surface: Surface) -> List[SurfaceFunction]:
    """Constant, point mass and the indicators of maximal totally isotropic subspaces of the base."""
    candidates = [SurfaceFunction.constant(surface), SurfaceFunction.delta(surface, (0,) * (surface.dim - 1))]
    for subspace in _isotropic_candidates(surface):
        candidates.append(SurfaceFunction.indicator(surface, subspace.points()))
    return candidates


def _isotropic_candidates(surface: Surface) -> Sequence[Subspace]:
    form = surface.form
    if form.witt_index == 0:
        return ()
    return enumerate_max_isotropic(form)[:8]


def extension_norm_lower_bound(
    surface: Surface, p_exp: float, q_exp: float, trials: int, rng: np.random.Generator
) -> LowerBound:
    """Searches for large ‖(g dσ)∨‖_p/‖g‖_{L^q(dσ)} from structured and random starts.

    Args:
        surface (Surface): the surface
        p_exp (float): exponent on F_p^d
        q_exp (float): exponent on the surface, q > 1
        trials (int): number of random starting points
        rng (np.random.Generator): randomness for the random starts

    Returns (LowerBound): the best ratio found with its witness
    """
    weight = 1.0 / surface.size
    starts = [candidate.values for candidate in structured_candidates(surface)]
    starts += [SurfaceFunction.random(surface, rng).values for _ in range(trials)]
    best = LowerBound(p_exp, q_exp, 0.0, SurfaceFunction.constant(surface))
    for start in starts:
        value, witness = ratio_power_method(
            lambda values: extension(SurfaceFunction(surface, values)).data,
            lambda values: restriction(FFunction(surface.field, surface.dim, values), surface).values,
            np.asarray(start, dtype=np.complex128),
            p_exp,
            q_exp,
            weight_in=weight,
        )
        if value > best.value:
            best = LowerBound(p_exp, q_exp, value, SurfaceFunction(surface, witness))
    logger.info("extension lower bound R*(%g -> %g) >= %.6g", q_exp, p_exp, best.value)
    return best
