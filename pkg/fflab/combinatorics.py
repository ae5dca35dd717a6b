"""
Additive energy, incidences, structured decompositions and the energy-exponent calculus.

Point sets live in F_p^n and are stored as sorted, deduplicated integer rows. Energies are exact integers:
Λ(A, B) counts quadruples (a, b, c, d) ∈ A × B × A × B with a + b = c + d.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .config import get_settings
from .errors import EnergyExcess, NoRoot, NotOnSurface, OutOfValidityRange
from .field import FFunction, IntArray, PrimeField, check_size, coordinates, decode_index, encode_array
from .fourier import fourier_transform
from .qforms import QuadraticSpace, Subspace, enumerate_max_isotropic, enumerate_subspaces, galilean
from .surfaces import Surface, SurfaceFunction, extension

logger = logging.getLogger(__name__)

Number = Union[Fraction, float]


@dataclass(frozen=True, eq=False)
class PointSet:
    """A finite set of points of F_p^n, sorted by index and free of duplicates."""

    field: PrimeField
    dim: int
    points: IntArray

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=np.int64).reshape(-1, self.dim) % self.field.p
        indices = np.unique(encode_array(self.field, points)) if len(points) else np.zeros(0, dtype=np.int64)
        ordered = np.array([decode_index(self.field, self.dim, int(i)) for i in indices], dtype=np.int64)
        ordered = ordered.reshape(-1, self.dim)
        ordered.setflags(write=False)
        object.__setattr__(self, "points", ordered)

    @classmethod
    def empty(cls, field: PrimeField, dim: int) -> PointSet:
        return cls(field, dim, np.zeros((0, dim), dtype=np.int64))

    @classmethod
    def random(cls, field: PrimeField, dim: int, size: int, rng: np.random.Generator) -> PointSet:
        total = check_size(field.p**dim)
        chosen = rng.choice(total, size=min(size, total), replace=False)
        return cls(field, dim, coordinates(field, dim)[np.sort(chosen)])

    @classmethod
    def on_surface(cls, surface: Surface, base_points: npt.ArrayLike) -> PointSet:
        """Lifts base points ξ ∈ F_p^{d−1} to (ξ, Q(ξ))."""
        base = np.asarray(base_points, dtype=np.int64).reshape(-1, surface.dim - 1) % surface.field.p
        return cls(surface.field, surface.dim, np.hstack([base, surface.form.value(base)[:, None]]))

    @classmethod
    def random_on_surface(cls, surface: Surface, size: int, rng: np.random.Generator) -> PointSet:
        chosen = rng.choice(surface.size, size=min(size, surface.size), replace=False)
        return cls(surface.field, surface.dim, surface.points[np.sort(chosen)])

    @property
    def size(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return (tuple(int(c) for c in row) for row in self.points)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PointSet)
            and other.field == self.field
            and np.array_equal(other.points, self.points)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.dim, self.points.tobytes()))

    def indices(self) -> IntArray:
        return encode_array(self.field, self.points) if len(self) else np.zeros(0, dtype=np.int64)

    def indicator(self) -> FFunction:
        return FFunction.indicator(self.field, self.dim, self.points)

    def base(self) -> PointSet:
        """Projection to the first n − 1 coordinates."""
        return PointSet(self.field, self.dim - 1, self.points[:, :-1])

    def union(self, other: PointSet) -> PointSet:
        return PointSet(self.field, self.dim, np.vstack([self.points, other.points]))

    def difference(self, other: PointSet) -> PointSet:
        keep = ~np.isin(self.indices(), other.indices())
        return PointSet(self.field, self.dim, self.points[keep])

    def subset(self, mask: npt.ArrayLike) -> PointSet:
        return PointSet(self.field, self.dim, self.points[np.asarray(mask, dtype=bool)])

    def translated(self, vector: npt.ArrayLike) -> PointSet:
        return PointSet(self.field, self.dim, self.points + np.asarray(vector, dtype=np.int64))

    def transformed(self, matrix: npt.ArrayLike) -> PointSet:
        """Image under x ↦ Mx."""
        return PointSet(self.field, self.dim, self.points @ np.asarray(matrix, dtype=np.int64).T)

    def intersection_size(self, subspace: Subspace) -> int:
        return sum(subspace.contains(point) for point in self.points)


class EnergyMethod(Enum):
    """How Λ(A, B) is counted.

    PAIR_SUMS groups the |A||B| pair sums, QUADRUPLE_LOOP tests a + b = c + d on every quadruple of
    A × B × A × B and FOURIER sums |1̂_A|²|1̂_B|² over the frequencies.
    """

    PAIR_SUMS = auto()
    QUADRUPLE_LOOP = auto()
    FOURIER = auto()

    @classmethod
    def from_str(cls, value: str) -> Optional[EnergyMethod]:
        for method in cls:
            if method.name.lower() == value.strip().lower().replace("-", "_"):
                return method
        return None


def _pair_sums(first: PointSet, second: PointSet) -> IntArray:
    sums = first.points[:, None, :] + second.points[None, :, :]
    return encode_array(first.field, sums.reshape(-1, first.dim))


def additive_energy(first: PointSet, second: PointSet, method: EnergyMethod = EnergyMethod.PAIR_SUMS) -> int:
    """Λ(A, B), the number of (a, b, c, d) ∈ A × B × A × B with a + b = c + d.

    Args:
        first (PointSet): A
        second (PointSet): B, in the same ambient space
        method (EnergyMethod): grouping the |A||B| pair sums and counting coincident pairs, testing every quadruple,
            or the Fourier identity Λ = p^{-n} Σ_ξ |1̂_A(ξ)|² |1̂_B(ξ)|² rounded to the nearest integer

    Returns (int): the energy
    """
    if first.field != second.field or first.dim != second.dim:
        raise ValueError("point sets live in different spaces")
    if not len(first) or not len(second):
        return 0
    if method is EnergyMethod.FOURIER:
        check_size(first.field.p**first.dim)
        a_hat = np.abs(fourier_transform(first.indicator()).data) ** 2
        b_hat = np.abs(fourier_transform(second.indicator()).data) ** 2
        return int(round(float(np.sum(a_hat * b_hat)) / first.field.p**first.dim))
    if method is EnergyMethod.QUADRUPLE_LOOP:
        check_size(len(first) ** 2 * len(second) ** 2, "|A|²|B|²")
        a, b = first.points, second.points
        left = a[:, None, None, None, :] + b[None, :, None, None, :]
        right = a[None, None, :, None, :] + b[None, None, None, :, :]
        return int(np.all((left - right) % first.field.p == 0, axis=-1).sum())
    check_size(len(first) * len(second), "|A||B|")
    _, counts = np.unique(_pair_sums(first, second), return_counts=True)
    return int(np.sum(counts.astype(np.int64) ** 2))


def energy(points: PointSet, method: EnergyMethod = EnergyMethod.PAIR_SUMS) -> int:
    """Λ(E) = Λ(E, E)."""
    return additive_energy(points, points, method)


def hstar(field: PrimeField) -> PointSet:
    """Points (ω1, ω2, ω1ω2) of the hyperbolic paraboloid in F_p³ with both ω1, ω2 non-zero."""
    base = coordinates(field, 2)
    base = base[(base[:, 0] != 0) & (base[:, 1] != 0)]
    return PointSet(field, 3, np.hstack([base, (base[:, 0] * base[:, 1] % field.p)[:, None]]))


def off_diagonal_energy(points: PointSet) -> int:
    """Λ*(E): quadruples a + b = c + d in E with b1 ≠ d1 and b2 ≠ d2."""
    if not len(points):
        return 0
    size = len(points)
    sums = _pair_sums(points, points)
    second_index = np.tile(np.arange(size), size)
    order = np.argsort(sums, kind="stable")
    sums, second_index = sums[order], second_index[order]
    boundaries = np.flatnonzero(np.diff(sums)) + 1
    total = 0
    for group in np.split(second_index, boundaries):
        seconds = points.points[group]
        first_differ = seconds[:, None, 0] != seconds[None, :, 0]
        second_differ = seconds[:, None, 1] != seconds[None, :, 1]
        total += int(np.sum(first_differ & second_differ))
    return total


def _check_on_hyperbolic(points: PointSet) -> None:
    if points.dim != 3:
        raise ValueError("VH structure is defined on the hyperbolic paraboloid in F_p^3")
    on_surface = points.points[:, 0] * points.points[:, 1] % points.field.p == points.points[:, 2]
    if not np.all(on_surface):
        raise NotOnSurface(points.points[np.argmin(on_surface)])


@dataclass(frozen=True)
class VHProfile:
    """Slice sizes of E ⊆ ℋ along vertical lines E_j = {x1 = j} and horizontal lines E^k = {x2 = k}."""

    vertical: Tuple[int, ...]
    horizontal: Tuple[int, ...]

    @property
    def max_intersection(self) -> int:
        return max(max(self.vertical, default=0), max(self.horizontal, default=0))

    def alpha(self, field: PrimeField) -> float:
        """log_p of the largest slice; E is a VH(α) set for every α at least this value."""
        return math.log(max(self.max_intersection, 1), field.p)


def vh_profile(points: PointSet) -> VHProfile:
    _check_on_hyperbolic(points)
    p = points.field.p
    vertical = np.bincount(points.points[:, 0], minlength=p)
    horizontal = np.bincount(points.points[:, 1], minlength=p)
    return VHProfile(tuple(int(c) for c in vertical), tuple(int(c) for c in horizontal))


@dataclass(frozen=True)
class EnergyBound:
    energy: int
    bound: float

    @property
    def ratio(self) -> float:
        return self.energy / self.bound if self.bound else 0.0


def energy_vh_bound(points: PointSet) -> EnergyBound:
    """Λ(E) against |E|^{5/2} + Σ_j |E_j|³ + Σ_k |E^k|³ for E on the hyperbolic paraboloid in F_p³."""
    profile = vh_profile(points)
    bound = len(points) ** 2.5 + sum(c**3 for c in profile.vertical) + sum(c**3 for c in profile.horizontal)
    return EnergyBound(energy(points), float(bound))


def l4_identity(points: PointSet, surface: Surface) -> Tuple[float, float]:
    """Both sides of ‖(1_E dσ)∨‖_4^4 = p^d Λ(E)/|S|^4 for E ⊆ S."""
    base = points.points[:, :-1]
    lhs = float(np.sum(np.abs(extension(SurfaceFunction.indicator(surface, base)).data) ** 4))
    rhs = surface.field.p**surface.dim * energy(points, EnergyMethod.FOURIER) / surface.size**4
    return lhs, rhs


@dataclass(frozen=True)
class HyperplaneFamily:
    """A multiset of affine hyperplanes {y : n·y = c} in F_p^m, one row of ``normals`` per item."""

    field: PrimeField
    normals: IntArray
    offsets: IntArray

    @classmethod
    def from_points(cls, form: QuadraticSpace, base_points: npt.ArrayLike) -> HyperplaneFamily:
        """H(x) = {y : x∘y = x∘x} for every base point x."""
        base = np.asarray(base_points, dtype=np.int64).reshape(-1, form.dim)
        return cls(form.field, base @ form.matrix % form.field.p, form.value(base))

    @classmethod
    def all_lines(cls, field: PrimeField) -> HyperplaneFamily:
        """All p² + p lines of F_p²."""
        p = field.p
        normals = [(1, a) for a in range(p) for _ in range(p)] + [(0, 1)] * p
        offsets = [c for _ in range(p) for c in range(p)] + list(range(p))
        return cls(field, np.array(normals, dtype=np.int64), np.array(offsets, dtype=np.int64))

    @property
    def size(self) -> int:
        return len(self.offsets)

    def canonical(self) -> IntArray:
        """Rows (n, c) scaled so the first non-zero entry of n is 1; equal rows describe equal sets."""
        rows = np.hstack([self.normals, self.offsets[:, None]]) % self.field.p
        for row in rows:
            nonzero = np.flatnonzero(row[:-1])
            if nonzero.size:
                row[:] = row * self.field.inverse(int(row[nonzero[0]])) % self.field.p
            else:
                row[-1] = 1 if row[-1] else 0
        return rows

    def multiplicities(self) -> Tuple[IntArray, IntArray]:
        """Distinct canonical items and how often each occurs."""
        return np.unique(self.canonical(), axis=0, return_counts=True)

    def incidence_matrix(self, points: PointSet) -> npt.NDArray[np.bool_]:
        """Entry (i, j) is True iff point i lies on item j."""
        return (points.points @ self.normals.T - self.offsets) % self.field.p == 0


@dataclass(frozen=True)
class IncidenceCount:
    """Incidences together with the double-counting bound C1^{1/2}|P|^{1/2}|L| + C2|P|."""

    count: int
    points: int
    lines: int
    c1: int
    c2: int

    @property
    def bound(self) -> float:
        return self.c1**0.5 * self.points**0.5 * self.lines + self.c2 * self.points

    @property
    def holds(self) -> bool:
        return self.count <= self.bound + 1e-9


def incidence_count(points: PointSet, family: HyperplaneFamily) -> IncidenceCount:
    """|{(x, ℓ) ∈ P × L : x ∈ ℓ}| with multiplicity.

    C1 is the largest |ℓ ∩ ℓ′ ∩ P| over distinct items and C2 the largest multiplicity.
    """
    if not len(points) or not family.size:
        return IncidenceCount(0, len(points), family.size, 0, 0)
    count = int(family.incidence_matrix(points).sum())
    distinct, multiplicity = family.multiplicities()
    distinct_family = HyperplaneFamily(family.field, distinct[:, :-1], distinct[:, -1])
    incidence = distinct_family.incidence_matrix(points).astype(np.int64)
    shared = incidence.T @ incidence
    np.fill_diagonal(shared, 0)
    return IncidenceCount(count, len(points), family.size, int(shared.max(initial=0)), int(multiplicity.max()))


def cs_incidence_bound(size: int) -> float:
    """2N^{3/2}, the Cauchy–Schwarz bound for N points and N lines of a plane."""
    return 2.0 * size**1.5


def same_hyperplane(form: QuadraticSpace, first: npt.ArrayLike, second: npt.ArrayLike) -> bool:
    family = HyperplaneFamily.from_points(form, np.vstack([first, second]))
    canonical = family.canonical()
    return bool(np.array_equal(canonical[0], canonical[1]))


@dataclass(frozen=True)
class EnergyIncidence:
    """The incidence problem extracted from Λ(A, B) after the Galilean normalization."""

    energy: int
    shifted_first: PointSet
    shifted_second: PointSet
    hyperplanes: HyperplaneFamily
    incidences: IncidenceCount

    @property
    def ratio(self) -> float:
        denominator = self.hyperplanes.size * self.incidences.count
        return self.energy / denominator if denominator else 0.0


def energy_to_incidence(first: PointSet, second: PointSet, surface: Surface) -> EnergyIncidence:
    """Reduces Λ(A, B) on a surface to incidences between A′ and the hyperplanes H(d), d ∈ B′.

    The point b ∈ B with the most solutions of a + b = c + d is moved to the origin by the Galilean transform
    τ_{−b}; afterwards every solution puts a on H(d), so Λ(A, B) ≤ |B| · |I(L_{B′}, P_{A′})|.
    """
    if not len(first) or not len(second):
        empty = HyperplaneFamily(surface.field, np.zeros((0, surface.dim - 1), np.int64), np.zeros(0, np.int64))
        return EnergyIncidence(0, first, second, empty, incidence_count(first.base(), empty))
    total = additive_energy(first, second)
    _, inverse, counts = np.unique(_pair_sums(first, second), return_inverse=True, return_counts=True)
    per_b = counts[inverse].reshape(len(first), len(second)).sum(axis=0)
    best = second.points[int(np.argmax(per_b))]
    shift = np.zeros(surface.dim, dtype=np.int64)
    shift[:-1] = -best[:-1]
    shift[-1] = surface.form.value(shift[:-1])
    shifted_first = PointSet(surface.field, surface.dim, galilean(surface, shift, first.points))
    shifted_second = PointSet(surface.field, surface.dim, galilean(surface, shift, second.points))
    hyperplanes = HyperplaneFamily.from_points(surface.form, shifted_second.points[:, :-1])
    incidences = incidence_count(shifted_first.base(), hyperplanes)
    return EnergyIncidence(total, shifted_first, shifted_second, hyperplanes, incidences)


@dataclass(frozen=True)
class Decomposition:
    """E = E_c ∪ E_u with E_c the disjoint union of the structured pieces Ω_i."""

    pieces: Tuple[PointSet, ...]
    subspaces: Tuple[Subspace, ...]
    residual: PointSet
    threshold: float

    @property
    def structured(self) -> Optional[PointSet]:
        if not self.pieces:
            return None
        result = self.pieces[0]
        for piece in self.pieces[1:]:
            result = result.union(piece)
        return result


def _coset_keys(points: IntArray, linear: Subspace) -> IntArray:
    reduced = points.copy()
    for row, pivot in zip(linear.matrix, linear.pivots):
        reduced = (reduced - reduced[:, pivot : pivot + 1] * row) % linear.field.p
    return encode_array(linear.field, reduced)


def _candidate_linear_parts(
    field: PrimeField, ambient: int, dim: int, isotropic_only: bool, form: Optional[QuadraticSpace]
) -> List[Subspace]:
    if isotropic_only:
        if form is None:
            raise ValueError("isotropic decompositions need the quadratic form")
        return list(enumerate_max_isotropic(form)) or [Subspace.zero(field, ambient)]
    return sorted(enumerate_subspaces(field, ambient, dim))


def greedy_decompose(
    points: PointSet,
    dim: int,
    rho: float,
    isotropic_only: bool = False,
    form: Optional[QuadraticSpace] = None,
) -> Decomposition:
    """Peels off affine subspaces holding at least |E|^ρ points until none is left.

    Args:
        points (PointSet): E ⊆ F_p^n
        dim (int): dimension c of the affine subspaces, 0 < c < n
        rho (float): exponent in (0, 1)
        isotropic_only (bool): draw pieces from maximal totally isotropic affine subspaces of ``form``
        form (Optional[QuadraticSpace]): the form on F_p^n

    Returns (Decomposition): the pieces, their subspaces and the unstructured remainder
    """
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    if not isotropic_only and not 0 < dim < points.dim:
        raise ValueError(f"subspace dimension must lie in (0, {points.dim}), got {dim}")
    threshold = len(points) ** rho if len(points) else 0.0
    linear_parts = _candidate_linear_parts(points.field, points.dim, dim, isotropic_only, form)
    return _greedy_pieces(points, linear_parts, threshold)


def isotropic_cover(points: PointSet, form: QuadraticSpace) -> Decomposition:
    """Splits E into pieces of distinct maximal totally isotropic affine subspaces, greedily and with no residual."""
    return _greedy_pieces(points, _candidate_linear_parts(points.field, points.dim, 0, True, form), 1.0)


def _greedy_pieces(points: PointSet, linear_parts: Sequence[Subspace], threshold: float) -> Decomposition:
    residual = points
    pieces: List[PointSet] = []
    subspaces: List[Subspace] = []
    while len(residual):
        best_count, best_subspace = 0, None
        for linear in linear_parts:
            values, counts = np.unique(_coset_keys(residual.points, linear), return_counts=True)
            top = int(counts.max())
            if top < best_count:
                continue
            for key in values[counts == top]:
                candidate = linear.shifted(decode_index(points.field, points.dim, int(key)))
                if top > best_count or best_subspace is None or candidate < best_subspace:
                    best_count, best_subspace = top, candidate
        if best_subspace is None or best_count < threshold:
            break
        mask = np.array([best_subspace.contains(point) for point in residual.points])
        pieces.append(residual.subset(mask))
        subspaces.append(best_subspace)
        residual = residual.subset(~mask)
        logger.debug("greedy piece %d: %d points on %s", len(pieces), best_count, best_subspace)
    return Decomposition(tuple(pieces), tuple(subspaces), residual, threshold)


def max_isotropic_slice(points: PointSet, form: QuadraticSpace) -> int:
    """Largest |E ∩ j| over maximal totally isotropic affine subspaces j of the base F_p^m."""
    if not len(points) or form.witt_index == 0:
        return min(len(points), 1)
    return max(
        int(np.unique(_coset_keys(points.points, linear), return_counts=True)[1].max())
        for linear in enumerate_max_isotropic(form)
    )


@dataclass(frozen=True)
class VHPlane:
    """Type 1: {x2 = a·t + b}, type 2: {x1 = a·t + b}, in coordinates (x1, x2, t) of F_p³."""

    kind: int
    slope: int
    offset: int

    def mask(self, points: IntArray, p: int) -> npt.NDArray[np.bool_]:
        coordinate = points[:, 1] if self.kind == 1 else points[:, 0]
        return (coordinate - self.slope * points[:, 2] - self.offset) % p == 0


def vh_planes(field: PrimeField) -> List[VHPlane]:
    return [VHPlane(kind, a, b) for kind in (1, 2) for a in range(field.p) for b in range(field.p)]


@dataclass(frozen=True)
class PlaneCover:
    planes: Tuple[VHPlane, ...]
    residual: PointSet


def planar_entropy_cover(points: PointSet, budget: int) -> PlaneCover:
    """Greedily picks up to ``budget`` VH planes, each time the one covering most uncovered points.

    Ties go to the first plane in (kind, slope, offset) order. Afterwards every VH plane meets the residual in at
    most ⌈|E|/budget⌉ points.
    """
    if points.dim != 3:
        raise ValueError("VH planes live in F_p^3")
    planes = vh_planes(points.field)
    masks = np.array([plane.mask(points.points, points.field.p) for plane in planes]).reshape(len(planes), -1)
    uncovered = np.ones(len(points), dtype=bool)
    chosen: List[VHPlane] = []
    for _ in range(budget):
        if not uncovered.any():
            break
        coverage = (masks & uncovered).sum(axis=1)
        pick = int(np.argmax(coverage))
        chosen.append(planes[pick])
        uncovered &= ~masks[pick]
    return PlaneCover(tuple(chosen), points.subset(uncovered))


def greedy_plane_cover(points: PointSet) -> PlaneCover:
    """Greedy cover run until nothing is left."""
    return planar_entropy_cover(points, max(len(points), 1))


def minimum_plane_cover(points: PointSet) -> Tuple[VHPlane, ...]:
    """Smallest VH-plane cover by exhaustive search. Only for tiny inputs."""
    if not len(points):
        return ()
    p = points.field.p
    relevant = [plane for plane in vh_planes(points.field) if plane.mask(points.points, p).any()]
    masks = {plane: plane.mask(points.points, p) for plane in relevant}
    for size in range(1, len(points) + 1):
        check_size(math.comb(len(relevant), size), "plane cover candidates")
        for combination in itertools.combinations(relevant, size):
            if np.logical_or.reduce([masks[plane] for plane in combination]).all():
                return combination
    raise AssertionError("every point lies on some VH plane")


def planar_entropy(points: PointSet, exact: bool = False) -> float:
    """log_p of the number of VH planes needed to cover E (greedy unless ``exact``)."""
    count = len(minimum_plane_cover(points)) if exact else len(greedy_plane_cover(points).planes)
    return math.log(max(count, 1), points.field.p)


class EnergyKind(Enum):
    DIM3_WITT1 = auto()
    DIM2 = auto()
    RANK1_DEG = auto()
    RANK2_DEG = auto()
    DIM4 = auto()
    DIM5_WITT2 = auto()

    @classmethod
    def from_str(cls, value: str) -> Optional[EnergyKind]:
        for kind in cls:
            if kind.name.lower() == value.strip().lower():
                return kind
        return None


_CLOSED_FORMS: Dict[EnergyKind, Tuple[Callable[[Number], Number], Tuple[Fraction, Fraction]]] = {
    EnergyKind.DIM3_WITT1: (lambda a: 1 + 2 * a, (Fraction(3, 4), Fraction(1))),
    EnergyKind.DIM2: (lambda a: Fraction(2), (Fraction(0), Fraction(1))),
    EnergyKind.RANK1_DEG: (lambda a: 2 + a, (Fraction(0), Fraction(1))),
    EnergyKind.RANK2_DEG: (lambda a: 1 + 4 * a - 2 * a * a, (Fraction(3, 4), Fraction(1))),
    EnergyKind.DIM4: (lambda a: Fraction(5, 2) + a / 2, (Fraction(3, 5), Fraction(1))),
    EnergyKind.DIM5_WITT2: (lambda a: Fraction(19, 7) + 2 * a / 7, (Fraction(9, 16), Fraction(1))),
}


def validity_range(kind: EnergyKind) -> Tuple[Fraction, Fraction]:
    return _CLOSED_FORMS[kind][1]


def energy_exponent_closed(kind: EnergyKind, alpha: Number) -> Number:
    """Closed-form energy exponent Ψ(α); exact when ``alpha`` is a Fraction.

    Raises:
        OutOfValidityRange: when α lies outside the range the estimate is proved for
    """
    formula, (low, high) = _CLOSED_FORMS[kind]
    if not low <= alpha <= high:
        raise OutOfValidityRange(kind.name.lower(), alpha, (low, high))
    return formula(alpha)


class EnergyProvenance(Enum):
    CLOSED_FORM = auto()
    RECURSION = auto()


@dataclass(frozen=True)
class EnergyExponent:
    """Ψ sampled on an increasing grid of α in [0, 1], evaluated by linear interpolation in between."""

    alpha_grid: Tuple[float, ...]
    psi_values: Tuple[float, ...]
    provenance: EnergyProvenance

    def __post_init__(self) -> None:
        if len(self.alpha_grid) != len(self.psi_values) or len(self.alpha_grid) < 2:
            raise ValueError("an energy exponent needs matching grids of at least two points")
        if np.any(np.diff(self.alpha_grid) <= 0) or self.alpha_grid[0] < 0 or self.alpha_grid[-1] > 1:
            raise ValueError("alpha grid must increase inside [0, 1]")

    @classmethod
    def from_closed_form(cls, kind: EnergyKind, grid: Sequence[float]) -> EnergyExponent:
        """Samples a closed form, holding it at its lowest valid value below the validity range."""
        low, _ = validity_range(kind)
        values = [float(energy_exponent_closed(kind, max(Fraction(a).limit_denominator(10**9), low))) for a in grid]
        return cls(tuple(float(a) for a in grid), tuple(values), EnergyProvenance.CLOSED_FORM)

    def __call__(self, alpha: float) -> float:
        return float(np.interp(alpha, self.alpha_grid, self.psi_values))

    def violations(self, tolerance: float = 1e-9) -> List[str]:
        """Invariant breaches: monotonicity, Ψ(1) = 3 and Ψ(α) < 3 below 1."""
        problems = []
        values = np.asarray(self.psi_values)
        if np.any(np.diff(values) < -tolerance):
            problems.append("not nondecreasing")
        if self.alpha_grid[-1] == 1 and abs(values[-1] - 3) > tolerance:
            problems.append(f"Psi(1) = {values[-1]} != 3")
        if np.any(values[np.asarray(self.alpha_grid) < 1] >= 3):
            problems.append("Psi reaches 3 below alpha = 1")
        return problems


def degenerate_lift(inner: EnergyExponent, alpha: float) -> float:
    """θ(α) = 3α + Ψ(α)(1 − α), the exponent after adding a degenerate direction."""
    return 3 * alpha + inner(alpha) * (1 - alpha)


def energy_exponent_recurse(inner: EnergyExponent, alpha: float) -> float:
    """One step of the dimension induction: Ψ′(α) = (5 + ρ)/2 where ρ ∈ [α, 1] solves
    5/2 + ρ/2 = 4(1 − ρ) + Ψ(α/ρ).

    Raises:
        NoRoot: when the two sides do not cross on [α, 1]; the exception carries the trivial bound 3
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if alpha == 1:
        return 3.0

    def gap(rho: float) -> float:
        return 2.5 + rho / 2 - 4 * (1 - rho) - inner(alpha / rho if rho else 0.0)

    low, high = max(alpha, 1e-12), 1.0
    if gap(low) > 0 or gap(high) < 0:
        logger.warning("no equalizing rho at alpha=%g, falling back to the trivial exponent", alpha)
        raise NoRoot(alpha, 3.0)
    tolerance = get_settings().bisection_tolerance
    while high - low > tolerance:
        middle = (low + high) / 2
        if gap(middle) > 0:
            high = middle
        else:
            low = middle
    rho = (low + high) / 2
    logger.debug("dimension induction at alpha=%g: rho=%.12g", alpha, rho)
    return (5 + rho) / 2


def energy_exponent_curve(inner: EnergyExponent, grid: Sequence[float]) -> EnergyExponent:
    """Applies :func:`energy_exponent_recurse` on a grid and checks the result's invariants."""
    curve = EnergyExponent(
        tuple(float(a) for a in grid),
        tuple(energy_exponent_recurse(inner, float(a)) for a in grid),
        EnergyProvenance.RECURSION,
    )
    problems = curve.violations()
    if problems:
        raise ValueError(f"recursion produced an invalid exponent: {', '.join(problems)}")
    return curve


def energy_decomposition_bound(pieces: Sequence[PointSet], beta: float) -> Tuple[int, float]:
    """Λ(∪Ω_i) against C|I|^{4−β}|E|^β with C = max Λ(Ω_i)/|Ω_i|^β, for disjoint pieces."""
    union = pieces[0]
    for piece in pieces[1:]:
        union = union.union(piece)
    constant = max(energy(piece) / len(piece) ** beta for piece in pieces if len(piece))
    return energy(union), constant * len(pieces) ** (4 - beta) * len(union) ** beta


def surface_energy_curve(surface: Surface) -> Callable[[float], float]:
    """The energy exponent the module proves for the surface's class, trivial (3) when none applies."""
    witt = surface.form.witt_index
    if surface.dim == 3 and witt == 1:
        return lambda alpha: max(2.5, 1 + 2 * alpha)
    if surface.dim == 5 and witt == 2:
        return lambda alpha: max(19 / 7 + 2 * alpha / 7, 23 / 8)
    return lambda alpha: 3.0


@dataclass(frozen=True)
class EnergySample:
    label: str
    size: int
    alpha: float
    exponent: float
    curve: float

    @property
    def excess(self) -> float:
        return self.exponent - self.curve


def empirical_alpha_energy(
    surface: Surface, trials: int, rng: np.random.Generator, log_slack: Optional[float] = None
) -> List[EnergySample]:
    """Samples structured and random subsets E of the surface and measures (α, log_{|E|} Λ(E)).

    α is log_{|E|} of the largest intersection with a maximal totally isotropic affine subspace of the base. Every
    sample must sit at most ``log_slack`` above :func:`surface_energy_curve`.

    Args:
        surface (Surface): surface with d <= 5 over p <= 7
        trials (int): number of random subsets on top of the structured ones
        rng (np.random.Generator): randomness for the random subsets
        log_slack (Optional[float]): allowed excess in the exponent, the configured one if None

    Returns (List[EnergySample]): the samples, structured ones first

    Raises:
        EnergyExcess: if a sample exceeds the curve by more than the slack
    """
    if surface.dim > 5 or surface.field.p > 7:
        raise ValueError("the empirical scatter is limited to d <= 5 and p <= 7")
    curve = surface_energy_curve(surface)
    form = surface.form
    samples: List[Tuple[str, PointSet]] = []
    isotropic = enumerate_max_isotropic(form) if form.witt_index else ()
    if isotropic:
        samples.append(("isotropic subspace", PointSet.on_surface(surface, isotropic[0].points())))
        if len(isotropic) > 1:
            pair = np.vstack([isotropic[0].points(), isotropic[-1].points()])
            samples.append(("two isotropic subspaces", PointSet.on_surface(surface, pair)))
    samples.append(("full surface", PointSet(surface.field, surface.dim, surface.points)))
    low = min(surface.field.p, surface.size)
    for trial in range(trials):
        size = int(rng.integers(low, surface.size + 1))
        samples.append((f"random {trial}", PointSet.random_on_surface(surface, size, rng)))
    results = []
    for label, points in samples:
        if len(points) <= 1:
            continue
        slice_size = max_isotropic_slice(points.base(), form)
        alpha = math.log(max(slice_size, 1), len(points))
        exponent = math.log(energy(points, EnergyMethod.FOURIER), len(points))
        results.append(EnergySample(label, len(points), alpha, exponent, curve(alpha)))
    slack = get_settings().log_slack if log_slack is None else log_slack
    breaches = [sample for sample in results if sample.excess > slack]
    if breaches:
        raise EnergyExcess(results, breaches, slack)
    return results


@dataclass(frozen=True)
class QuasiTriangle:
    """Λ of a union against the two quasi-triangle bounds |I|⁴ max Λ(E_i) and (Σ Λ(E_i)^{1/4})⁴."""

    union_energy: int
    max_bound: int
    root_sum: float

    @property
    def holds(self) -> bool:
        return self.union_energy <= self.max_bound and self.union_energy ** 0.25 <= self.root_sum + 1e-9


def quasi_triangle(pieces: Sequence[PointSet]) -> QuasiTriangle:
    if not pieces:
        raise ValueError("at least one piece is required")
    union = pieces[0]
    for piece in pieces[1:]:
        union = union.union(piece)
    energies = [energy(piece) for piece in pieces]
    return QuasiTriangle(energy(union), len(pieces) ** 4 * max(energies), sum(e**0.25 for e in energies))
