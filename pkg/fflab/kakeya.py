"""
Kakeya maximal operators over F_p^m and their bridges to restriction.

Lines are non-horizontal: ℓ(b, η) = {(b + ηt, t) : t ∈ F_p} with b, η ∈ F_p^{m−1}. Directions carry
normalized counting measure, F_p^m carries counting measure.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import numpy.typing as npt

from .combinatorics import PointSet, isotropic_cover
from .errors import NotIsotropicPair
from .field import FFunction, IntArray, Measure, PrimeField, array_norm, check_size, coordinates, encode_array
from .fourier import MixedNormSpec, mixed_norm
from .qforms import QuadraticSpace, Subspace, matrix_rank, orthogonal_complement
from .surfaces import Surface, SurfaceFunction, SurfaceKind, extension, restriction

logger = logging.getLogger(__name__)

BaseMap = Callable[[IntArray], IntArray]


@dataclass(frozen=True)
class AffineLine:
    """ℓ(b, η) = {(b + ηt, t)} in F_p^m."""

    field: PrimeField
    base: Tuple[int, ...]
    direction: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.base) != len(self.direction):
            raise ValueError("base and direction must both live in F_p^{m-1}")
        p = self.field.p
        object.__setattr__(self, "base", tuple(int(c) % p for c in self.base))
        object.__setattr__(self, "direction", tuple(int(c) % p for c in self.direction))

    @property
    def dim(self) -> int:
        return len(self.base) + 1

    def points(self) -> IntArray:
        t = self.field.elements()
        body = (np.asarray(self.base) + np.outer(t, self.direction)) % self.field.p
        return np.hstack([body.reshape(self.field.p, -1), t[:, None]])

    def indices(self) -> IntArray:
        return encode_array(self.field, self.points())

    def indicator(self) -> FFunction:
        return FFunction.indicator(self.field, self.dim, self.points())


def _line_indices(field: PrimeField, dim: int, direction: npt.ArrayLike) -> IntArray:
    """Indices of ℓ(b, η) for every base b, one row per b in index order."""
    p = field.p
    bases = coordinates(field, dim - 1)
    t = field.elements()
    body = (bases[:, None, :] + np.asarray(direction, dtype=np.int64)[None, None, :] * t[None, :, None]) % p
    weights = p ** np.arange(dim - 1, dtype=np.int64)
    return body @ weights + t[None, :] * p ** (dim - 1)


def line_sums(F: FFunction, direction: npt.ArrayLike) -> npt.NDArray[np.float64]:  # pylint: disable=invalid-name
    """Σ_{x ∈ ℓ(b, η)} |F(x)| for every base b, in index order."""
    return np.abs(F.data)[_line_indices(F.field, F.dim, direction)].sum(axis=1)


def _check_kakeya_size(F: FFunction) -> None:  # pylint: disable=invalid-name
    if F.dim < 2:
        raise ValueError(f"the Kakeya maximal function needs m >= 2, got {F.dim}")
    check_size(F.field.p ** (2 * (F.dim - 1)), "p^{2(m-1)}")


def kakeya_maximal(F: FFunction) -> FFunction:  # pylint: disable=invalid-name
    """F*(η) = max_b Σ_{x ∈ ℓ(b, η)} |F(x)|, as a function on the directions F_p^{m−1}.

    Raises:
        SizeOverflow: when p^{2(m−1)} exceeds the guard
    """
    _check_kakeya_size(F)
    directions = coordinates(F.field, F.dim - 1)
    values = np.array([line_sums(F, direction).max() for direction in directions])
    return FFunction(F.field, F.dim - 1, values)


def maximizing_bases(F: FFunction) -> IntArray:  # pylint: disable=invalid-name
    """For every direction η the first base b attaining F*(η), as rows of F_p^{m−1}."""
    _check_kakeya_size(F)
    bases = coordinates(F.field, F.dim - 1)
    directions = coordinates(F.field, F.dim - 1)
    return np.array([bases[int(np.argmax(line_sums(F, direction)))] for direction in directions])


def kakeya_maximal_ratio(F: FFunction, in_exp: Optional[float] = None, out_exp: Optional[float] = None) -> float:
    """‖F*‖_{L^{out}(dθ)} / ‖F‖_{L^{in}(dx)}, both exponents m unless given."""
    in_exp = F.dim if in_exp is None else in_exp
    out_exp = F.dim if out_exp is None else out_exp
    denominator = array_norm(F.data, in_exp)
    if denominator == 0:
        return 0.0
    maximal = kakeya_maximal(F)
    return array_norm(maximal.data, out_exp, 1.0 / maximal.data.size) / denominator


def dual_kakeya_apply(h: FFunction, bases: npt.ArrayLike) -> FFunction:
    """p^{−(m−1)} Σ_v h(v) 1_{ℓ(x0(v), v)} on F_p^m.

    Args:
        h (FFunction): function on the directions F_p^{m−1}
        bases (npt.ArrayLike): x0(v) for every direction v in index order, one row each

    Returns (FFunction): the superposition of lines
    """
    field = h.field
    m = h.dim + 1
    bases = np.asarray(bases, dtype=np.int64).reshape(-1, h.dim)
    directions = coordinates(field, h.dim)
    data = np.zeros(field.p**m, dtype=np.complex128)
    for value, base, direction in zip(h.data, bases, directions):
        if value:
            data[AffineLine(field, tuple(base), tuple(direction)).indices()] += value
    return FFunction(field, m, data / field.p**h.dim)


@dataclass(frozen=True)
class DualPairing:
    """⟨Σ h 1_ℓ dv, G⟩ against ∫ h G* dv for h, G ≥ 0."""

    pairing: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.pairing <= self.bound * (1 + 1e-12) + 1e-12


def dual_pairing_bound(h: FFunction, bases: npt.ArrayLike, target: FFunction) -> DualPairing:
    pairing = float(np.real(np.vdot(np.abs(target.data), dual_kakeya_apply(h.abs(), bases).data)))
    maximal = kakeya_maximal(target)
    bound = float(np.sum(np.abs(h.data) * maximal.data.real)) / maximal.data.size
    return DualPairing(pairing, bound)


def dual_kakeya_ratio(h: FFunction, bases: npt.ArrayLike, in_exp: float, out_exp: float) -> float:
    """‖Σ h 1_ℓ dv‖_{L^{out}(dx)} / ‖h‖_{L^{in}(dv)}, a lower bound for K*_m(in → out)."""
    denominator = array_norm(h.data, in_exp, 1.0 / h.data.size)
    if denominator == 0:
        return 0.0
    return array_norm(dual_kakeya_apply(h, bases).data, out_exp) / denominator


@dataclass(frozen=True)
class DualConsistency:
    """Lower bounds for K_m(p′ → q′) and K*_m(q → p) reached by alternating between the two problems."""

    primal: Tuple[float, ...]
    dual: Tuple[float, ...]

    @property
    def gap(self) -> float:
        return abs(self.primal[-1] - self.dual[-1])


def _conjugate(exponent: float) -> float:
    return exponent / (exponent - 1)


def dual_consistency(  # pylint: disable=invalid-name
    F: FFunction, q_exp: float, p_exp: float, steps: int = 50
) -> DualConsistency:
    """Alternates F ↦ (x0, h) and (h, x0) ↦ (Σ h 1_ℓ)^{p−1}.

    Here x0 are the maximizing bases of F and h = (F*)^{q′−1}.

    Each dual ratio dominates the primal ratio it came from, and both sequences settle on a common value.
    """
    primal: List[float] = []
    dual: List[float] = []
    tolerance = 1e-12
    current = F.abs()
    for _ in range(steps):
        primal.append(kakeya_maximal_ratio(current, _conjugate(p_exp), _conjugate(q_exp)))
        bases = maximizing_bases(current)
        h = FFunction(F.field, F.dim - 1, kakeya_maximal(current).data.real ** (_conjugate(q_exp) - 1))
        dual.append(dual_kakeya_ratio(h, bases, q_exp, p_exp))
        following = FFunction(F.field, F.dim, np.abs(dual_kakeya_apply(h, bases).data) ** (p_exp - 1))
        if len(dual) > 1 and abs(dual[-1] - dual[-2]) <= tolerance * max(dual[-1], 1.0):
            break
        current = following
    logger.debug("dual consistency after %d steps: primal %.12g, dual %.12g", len(primal), primal[-1], dual[-1])
    return DualConsistency(tuple(primal), tuple(dual))


@dataclass(frozen=True)
class KakeyaInstance:
    """A set E ⊆ F_p^m, optionally with a witness base b(η) per direction such that ℓ(b(η), η) ⊆ E."""

    points: PointSet
    witness: Optional[Dict[Tuple[int, ...], Tuple[int, ...]]] = dataclass_field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.witness is None:
            return
        members = set(self.points.indices().tolist())
        for direction, base in self.witness.items():
            line = AffineLine(self.points.field, base, direction)
            if not members.issuperset(line.indices().tolist()):
                raise ValueError(f"witness line {line} is not contained in the set")

    @property
    def field(self) -> PrimeField:
        return self.points.field

    @property
    def dim(self) -> int:
        return self.points.dim


def union_of_lines(field: PrimeField, dim: int, base_map: Optional[BaseMap] = None) -> KakeyaInstance:
    """The union of ℓ(b(η), η) over all directions, b(η) = η² coordinatewise unless given."""
    directions = coordinates(field, dim - 1)
    base_map = base_map or (lambda eta: eta * eta % field.p)
    bases = np.asarray(base_map(directions), dtype=np.int64).reshape(-1, dim - 1) % field.p
    lines = [AffineLine(field, tuple(b), tuple(eta)) for b, eta in zip(bases, directions)]
    points = PointSet(field, dim, np.vstack([line.points() for line in lines]))
    return KakeyaInstance(points, {line.direction: line.base for line in lines})


@dataclass(frozen=True)
class KakeyaAudit:
    is_kakeya: bool
    density: float
    missing: Tuple[Tuple[int, ...], ...]


def _horizontal_directions(field: PrimeField, dim: int) -> IntArray:
    """Projective representatives (v, 0) with the first non-zero entry of v equal to 1."""
    vectors = coordinates(field, dim - 1)[1:]
    leading = vectors[np.arange(len(vectors)), np.argmax(vectors != 0, axis=1)]
    vectors = vectors[leading == 1]
    return np.hstack([vectors, np.zeros((len(vectors), 1), dtype=np.int64)])


def kakeya_set_audit(instance: KakeyaInstance, include_horizontal: bool = False) -> KakeyaAudit:
    """Checks for a line in every direction and reports |E|/p^m.

    Non-horizontal directions use the witness when there is one and an exhaustive base search otherwise.
    Horizontal directions, when requested, are searched through every point of E.
    """
    field, dim = instance.field, instance.dim
    size = check_size(field.p**dim)
    missing: List[Tuple[int, ...]] = []
    if instance.witness is not None and len(instance.witness) == field.p ** (dim - 1):
        logger.debug("audit uses the witness for all %d directions", len(instance.witness))
    else:
        maximal = kakeya_maximal(instance.points.indicator())
        directions = coordinates(field, dim - 1)
        missing += [tuple(int(c) for c in directions[i]) + (1,) for i in np.flatnonzero(maximal.data.real < field.p)]
    if include_horizontal:
        members = np.zeros(size, dtype=bool)
        members[instance.points.indices()] = True
        for direction in _horizontal_directions(field, dim):
            lines = (instance.points.points[:, None, :] + np.outer(field.elements(), direction)[None]) % field.p
            contained = members[encode_array(field, lines.reshape(-1, dim)).reshape(len(instance.points), -1)]
            if not contained.all(axis=1).any():
                missing.append(tuple(int(c) for c in direction))
    return KakeyaAudit(not missing, len(instance.points) / size, tuple(missing))


@dataclass(frozen=True)
class KakeyaEmbedding:
    """f(ξ, θ) = h^{1/2}(θ) e(−b(−θ)·ξ) on the hyperbolic paraboloid, its extension and the line formula."""

    function: SurfaceFunction
    extended: FFunction
    closed_form: FFunction
    collapsed: npt.NDArray[np.float64]
    line_density: npt.NDArray[np.float64]

    @property
    def deviation(self) -> float:
        return self.extended.max_deviation(self.closed_form)

    @property
    def collapse_deviation(self) -> float:
        return float(np.max(np.abs(self.collapsed - self.line_density), initial=0.0))


def restriction_to_kakeya_embed(surface: Surface, h: FFunction, bases: npt.ArrayLike) -> KakeyaEmbedding:
    """Builds the embedding of a line configuration into an extension of the hyperbolic paraboloid in d = 2n + 1.

    With (x1, x2, t) ∈ F_p^n × F_p^n × F_p the extension collapses to

        (f dσ)∨(x1, x2, t) = p^{−n} Σ_θ h^{1/2}(θ) 1_{ℓ(b(−θ), −θ)}(x1, t) e(θ·x2),

    and its L²_{x2} norm to (p^{−n} Σ_θ h(θ) 1_{ℓ(b(−θ), −θ)}(x1, t))^{1/2}.

    Args:
        surface (Surface): the hyperbolic paraboloid
        h (FFunction): non-negative function on F_p^n
        bases (npt.ArrayLike): b(θ) for every θ ∈ F_p^n in index order, one row each

    Returns (KakeyaEmbedding): the function, both sides of the identity and both sides of the collapse
    """
    if surface.kind is not SurfaceKind.HYPERBOLIC_PARABOLOID:
        raise ValueError("the Kakeya embedding lives on the hyperbolic paraboloid")
    field = surface.field
    p = field.p
    n = (surface.dim - 1) // 2
    if h.dim != n or np.any(h.data.real < 0) or np.any(h.data.imag != 0):
        raise ValueError(f"h must be a non-negative real function on F_p^{n}")
    bases = np.asarray(bases, dtype=np.int64).reshape(-1, n) % p
    thetas = coordinates(field, n)
    negated = encode_array(field, -thetas)
    root = np.sqrt(h.data.real)

    base = coordinates(field, 2 * n)
    xi, theta = base[:, :n], base[:, n:]
    theta_index = encode_array(field, theta)
    shift = bases[encode_array(field, -theta)]
    phase = np.einsum("ij,ij->i", shift, xi) % p
    function = SurfaceFunction(surface, root[theta_index] * field.characters()(-phase))

    points = coordinates(field, surface.dim)
    x1, x2, t = points[:, :n], points[:, n : 2 * n], points[:, -1]
    closed = np.zeros(len(points), dtype=np.complex128)
    density = np.zeros(len(points))
    for i, th in enumerate(thetas):
        line_base, line_direction = bases[negated[i]], -th
        on_line = np.all((x1 - line_base - np.outer(t, line_direction)) % p == 0, axis=1)
        closed += on_line * root[i] * field.characters()(x2 @ th % p)
        density += on_line * h.data.real[i]
    closed /= p**n
    density = density / p**n

    extended = extension(function)
    slices = np.abs(extended.data.reshape(-1)) ** 2
    keys = encode_array(field, np.hstack([x1, t[:, None]]))
    collapsed = np.sqrt(np.bincount(keys, weights=slices, minlength=p ** (n + 1)))
    line_density = np.sqrt(np.bincount(keys, weights=density, minlength=p ** (n + 1)) / p**n)
    return KakeyaEmbedding(function, extended, FFunction(field, surface.dim, closed), collapsed, line_density)


def kakeya_exponent_from_restriction(m: int, p_exp: float, restriction_alpha: float) -> float:
    """Exponent of the bound K*_m(q → p) ≲ p^{(m−1)(1−1/p)} (R*(2q → 2p))² when R* ≲ p^α."""
    return (m - 1) * (1 - 1 / p_exp) + 2 * restriction_alpha


def kakeya_density_exponent(m: int) -> Fraction:
    """Exponent e in K*_m((2m−1)/(2m−2)) ≲ p^e obtained from the conjectured restriction estimate."""
    return Fraction(m - 1, 2 * m - 1)


@dataclass(frozen=True)
class CosetFrame:
    """Coordinates adapted to complementary totally isotropic W, V of the surface form.

    Frequencies are ξ = ξ1 + ξ2 with ξ1 ∈ W, ξ2 ∈ V; space points are x = x1 + x2 with x1 in the
    dot-annihilator of V and x2 in the dot-annihilator of W (these are V and W themselves for the paraboloid).
    """

    surface: Surface
    inner: Subspace
    outer: Subspace

    def __post_init__(self) -> None:
        form = self.surface.form
        n = form.dim // 2
        for space in (self.inner, self.outer):
            if not space.is_linear or space.dim != n or not space.is_totally_isotropic(form):
                raise NotIsotropicPair(f"{space} is not a maximal totally isotropic linear subspace")
        if form.dim % 2 or matrix_rank(form.field, np.vstack([self.inner.matrix, self.outer.matrix])) != form.dim:
            raise NotIsotropicPair("W and V are not complementary")

    @property
    def space_outer(self) -> Subspace:
        return orthogonal_complement(QuadraticSpace.dot(self.surface.field, self.surface.dim - 1), self.outer)

    @property
    def space_inner(self) -> Subspace:
        return orthogonal_complement(QuadraticSpace.dot(self.surface.field, self.surface.dim - 1), self.inner)


def coset_extension(f: SurfaceFunction, inner: Subspace, outer: Subspace) -> FFunction:
    """p^{−2n} Σ_{ξ1 ∈ W, ξ2 ∈ V} f(ξ1 + ξ2) e(ξ1·x1 + ξ2·x2 + 2t ξ1∘ξ2) in standard coordinates.

    Raises:
        NotIsotropicPair: unless W and V are complementary maximal totally isotropic subspaces of the surface form
    """
    frame = CosetFrame(f.surface, inner, outer)
    surface = f.surface
    field = surface.field
    p = field.p
    n = (surface.dim - 1) // 2
    check_size(p ** (4 * n + 1), "p^{4n+1}")
    coefficients = coordinates(field, n)
    first = coefficients @ inner.matrix % p
    second = coefficients @ outer.matrix % p
    frequencies = (first[:, None, :] + second[None, :, :]).reshape(-1, 2 * n) % p
    values = f.values[encode_array(field, frequencies)]
    space_outer, space_inner = frame.space_outer, frame.space_inner
    x1 = coefficients @ space_outer.matrix % p
    x2 = coefficients @ space_inner.matrix % p
    pairing_first = first @ x1.T % p
    pairing_second = second @ x2.T % p
    quadratic = 2 * surface.form.bilinear(first[:, None, :], second[None, :, :]) % p
    phase_space = (pairing_first[:, None, :, None] + pairing_second[None, :, None, :]).reshape(p ** (2 * n), -1)
    characters = field.characters()
    data = np.zeros(p ** surface.dim, dtype=np.complex128)
    positions = (x1[:, None, :] + x2[None, :, :]).reshape(-1, 2 * n) % p
    for t in range(p):
        phase = (phase_space + t * quadratic.reshape(-1, 1)) % p
        column = values @ characters(phase) / p ** (2 * n)
        data[encode_array(field, np.hstack([positions, np.full((len(positions), 1), t)]))] = column
    return FFunction(field, surface.dim, data)


def mixed_extension_ratio(f: SurfaceFunction, inner: Subspace, outer: Subspace) -> float:
    """‖(f dσ)∨‖_{L^r_{V,t} L²_W} / ‖f‖_{L^r_V L²_W(dσ)} with r = (2d + 2)/(d − 1)."""
    frame = CosetFrame(f.surface, inner, outer)
    d = f.surface.dim
    r = (2 * d + 2) / (d - 1)
    surface_spec = MixedNormSpec(outer, inner, r, 2.0, include_t=False)
    space_spec = MixedNormSpec(frame.space_outer, frame.space_inner, r, 2.0, include_t=True)
    denominator = mixed_norm(f.values, surface_spec, Measure.NORMALIZED)
    if denominator == 0:
        return 0.0
    return mixed_norm(extension(f).data, space_spec, Measure.COUNTING) / denominator


def single_cap_functions(surface: Surface, inner: Subspace, outer: Subspace) -> List[SurfaceFunction]:
    """Indicators of the caps {ξ1 + α : ξ1 ∈ W}, one for each α ∈ V."""
    CosetFrame(surface, inner, outer)
    return [SurfaceFunction.indicator(surface, inner.shifted(alpha).points()) for alpha in outer.points()]


def kakeya_reg_set_exponent(d: int, gamma: float, e: float) -> float:
    """γ/2 + (e + 1)/(d + 1) + (d − 3)/(2d + 2)."""
    return gamma / 2 + (e + 1) / (d + 1) + (d - 3) / (2 * d + 2)


@dataclass(frozen=True)
class RegularSetCheck:
    """‖F̂‖_{L^{(2d+2)/(d+3)}(dσ)} for a slice-structured indicator, against p^{exponent}."""

    norm: float
    gamma: float
    e: float
    exponent: float
    field: PrimeField

    @property
    def constant(self) -> float:
        return self.norm / self.field.p**self.exponent


def kakeya_reg_set_check(F: FFunction, surface: Surface) -> RegularSetCheck:  # pylint: disable=invalid-name
    """Measures γ = log_p |supp F| and e = log_p of the largest number of isotropic pieces in a slice."""
    field = surface.field
    d = surface.dim
    support = F.support()
    if not support.size:
        raise ValueError("F must have non-empty support")
    points = coordinates(field, d)[support]
    pieces = 1
    for z in range(field.p):
        slice_points = PointSet(field, d - 1, points[points[:, -1] == z, :-1])
        if len(slice_points):
            pieces = max(pieces, len(isotropic_cover(slice_points, surface.form).pieces))
    gamma = float(np.log(support.size) / np.log(field.p))
    e = float(np.log(pieces) / np.log(field.p))
    restricted = restriction(F, surface)
    norm = restricted.norm((2 * d + 2) / (d + 3), Measure.NORMALIZED)
    return RegularSetCheck(norm, gamma, e, kakeya_reg_set_exponent(d, gamma, e), field)
