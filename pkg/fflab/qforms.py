"""
Quadratic and bilinear forms over F_p.

Linear algebra here is exact modulo p: galois GF(p) arrays do the elimination and results come back as int64
arrays. A :class:`QuadraticSpace` wraps a symmetric matrix A with x∘y = xᵀAy and Q(x) = x∘x; a :class:`Subspace` is
a linear or affine subspace stored in canonical reduced row echelon form so that equal subspaces compare and hash
equal.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import galois
import numpy as np
import numpy.typing as npt

from .errors import DegenerateForm, FullyDegenerate, NotCongruent, NotMaximalIsotropic, NotOnSurface
from .field import IntArray, PrimeField, check_size, coordinates

if TYPE_CHECKING:
    from .surfaces import Surface

logger = logging.getLogger(__name__)


def _reduce(field: PrimeField, matrix: npt.ArrayLike) -> IntArray:
    return np.array(matrix, dtype=np.int64) % field.p


def _ints(array: galois.FieldArray) -> IntArray:
    return array.view(np.ndarray).astype(np.int64)


def mat_mul(field: PrimeField, *matrices: npt.ArrayLike) -> IntArray:
    result = _reduce(field, matrices[0])
    for matrix in matrices[1:]:
        result = result @ _reduce(field, matrix) % field.p
    return result


def row_reduce(field: PrimeField, matrix: npt.ArrayLike) -> Tuple[IntArray, Tuple[int, ...]]:
    """Reduced row echelon form modulo p.

    Args:
        field (PrimeField): the field
        matrix (npt.ArrayLike): any integer matrix

    Returns (Tuple[IntArray, Tuple[int, ...]]): the reduced matrix and its pivot columns
    """
    reduced = np.atleast_2d(_reduce(field, matrix))
    if reduced.size == 0:
        return reduced, ()
    reduced = _ints(field.gf(reduced).row_reduce())
    pivots = tuple(int(np.argmax(row != 0)) for row in reduced if row.any())
    return reduced, pivots


def matrix_rank(field: PrimeField, matrix: npt.ArrayLike) -> int:
    if np.asarray(matrix).size == 0:
        return 0
    return int(np.linalg.matrix_rank(field.gf(np.atleast_2d(_reduce(field, matrix)))))


def determinant(field: PrimeField, matrix: npt.ArrayLike) -> int:
    square = _reduce(field, matrix)
    if square.size == 0:
        return 1
    return int(np.linalg.det(field.gf(square)))


def matrix_inverse(field: PrimeField, matrix: npt.ArrayLike) -> IntArray:
    try:
        return _ints(np.linalg.inv(field.gf(_reduce(field, matrix))))
    except np.linalg.LinAlgError as error:
        raise ValueError("matrix is singular modulo p") from error


def nullspace(field: PrimeField, matrix: npt.ArrayLike) -> IntArray:
    """Basis (as rows) of {x : Mx = 0}."""
    matrix = np.atleast_2d(_reduce(field, matrix))
    cols = matrix.shape[1]
    reduced, pivots = row_reduce(field, matrix)
    free = [col for col in range(cols) if col not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, col in enumerate(free):
        basis[k, col] = 1
        for row, pivot in enumerate(pivots):
            basis[k, pivot] = -reduced[row, col] % field.p
    return basis


def solve(field: PrimeField, matrix: npt.ArrayLike, rhs: npt.ArrayLike) -> Optional[IntArray]:
    """One solution of Mx = b with free variables set to zero, or None when inconsistent."""
    matrix = np.atleast_2d(_reduce(field, matrix))
    rhs = _reduce(field, rhs).reshape(-1, 1)
    reduced, pivots = row_reduce(field, np.hstack([matrix, rhs]))
    cols = matrix.shape[1]
    if cols in pivots:
        return None
    solution = np.zeros(cols, dtype=np.int64)
    for row, pivot in enumerate(pivots):
        solution[pivot] = reduced[row, cols]
    return solution


def gaussian_binomial(p: int, m: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_p^m."""
    if not 0 <= k <= m:
        return 0
    numerator = 1
    denominator = 1
    for i in range(k):
        numerator *= p ** (m - i) - 1
        denominator *= p ** (i + 1) - 1
    return numerator // denominator


@dataclass(frozen=True)
class Subspace:
    """A linear (``translate is None``) or affine subspace of F_p^m in canonical form.

    The basis is the non-zero part of the reduced row echelon form of any spanning set, and the translate is reduced
    against it so it vanishes in every pivot column.
    """

    field: PrimeField
    ambient: int
    basis: Tuple[Tuple[int, ...], ...] = ()
    translate: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        rows = np.array(self.basis, dtype=np.int64).reshape(-1, self.ambient)
        if rows.size:
            reduced, pivots = row_reduce(self.field, rows)
            rows = reduced[: len(pivots)]
        object.__setattr__(self, "basis", tuple(tuple(int(c) for c in row) for row in rows))
        if self.translate is not None:
            offset = self.reduce(self.translate)
            object.__setattr__(self, "translate", tuple(int(c) for c in offset) if offset.any() else None)

    @classmethod
    def span(
        cls,
        field: PrimeField,
        vectors: npt.ArrayLike,
        ambient: Optional[int] = None,
        translate: Optional[Sequence[int]] = None,
    ) -> Subspace:
        rows = np.asarray(vectors, dtype=np.int64)
        if ambient is None:
            ambient = rows.shape[-1]
        rows = rows.reshape(-1, ambient)
        offset = None if translate is None else tuple(int(c) % field.p for c in translate)
        return cls(field, ambient, tuple(tuple(int(c) for c in row) for row in rows), offset)

    @classmethod
    def zero(cls, field: PrimeField, ambient: int) -> Subspace:
        return cls(field, ambient)

    @classmethod
    def full(cls, field: PrimeField, ambient: int) -> Subspace:
        return cls.span(field, np.eye(ambient, dtype=np.int64))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.field.p**self.dim

    @property
    def is_linear(self) -> bool:
        return self.translate is None

    @property
    def matrix(self) -> IntArray:
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.ambient)

    @property
    def offset(self) -> IntArray:
        if self.translate is None:
            return np.zeros(self.ambient, dtype=np.int64)
        return np.array(self.translate, dtype=np.int64)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(col for col, value in enumerate(row) if value) for row in self.basis)

    def linear_part(self) -> Subspace:
        return Subspace(self.field, self.ambient, self.basis)

    def reduce(self, vector: npt.ArrayLike) -> IntArray:
        """Reduces ``vector`` against the basis; the result is zero iff the vector lies in the linear part."""
        reduced = _reduce(self.field, vector).reshape(self.ambient)
        for row, pivot in zip(self.matrix, self.pivots):
            reduced = (reduced - reduced[pivot] * row) % self.field.p
        return reduced

    def contains(self, point: npt.ArrayLike) -> bool:
        return not self.reduce(np.asarray(point, dtype=np.int64) - self.offset).any()

    def shifted(self, vector: npt.ArrayLike) -> Subspace:
        return Subspace(self.field, self.ambient, self.basis, tuple(int(c) for c in self.offset + vector))

    def points(self) -> IntArray:
        """All p^k points as rows, ordered by their coefficient index."""
        check_size(self.size, "p^k")
        coefficients = coordinates(self.field, self.dim) if self.dim else np.zeros((1, 0), dtype=np.int64)
        return (coefficients @ self.matrix + self.offset) % self.field.p

    def intersection(self, other: Subspace) -> Optional[Subspace]:
        """Intersection of two (possibly affine) subspaces, None when they are disjoint."""
        stacked = np.vstack([self.matrix, -other.matrix]).reshape(-1, self.ambient)
        coefficients = nullspace(self.field, stacked.T) if stacked.size else np.zeros((0, 0), dtype=np.int64)
        common = coefficients[:, : self.dim] @ self.matrix % self.field.p if coefficients.size else ()
        linear = Subspace.span(self.field, common, self.ambient)
        if self.is_linear and other.is_linear:
            return linear
        if not stacked.size:
            return linear.shifted(self.offset) if np.array_equal(self.offset, other.offset) else None
        particular = solve(self.field, stacked.T, other.offset - self.offset)
        if particular is None:
            return None
        return linear.shifted(self.offset + particular[: self.dim] @ self.matrix)

    def is_totally_isotropic(self, form: QuadraticSpace) -> bool:
        return not restrict_form(form, self).any()

    def sort_key(self) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...]]:
        return self.basis, self.translate or ()

    def __lt__(self, other: Subspace) -> bool:
        return self.sort_key() < other.sort_key()


def enumerate_subspaces(field: PrimeField, ambient: int, dim: int) -> Iterator[Subspace]:
    """Yields every ``dim``-dimensional linear subspace of F_p^ambient once, grouped by pivot pattern."""
    check_size(gaussian_binomial(field.p, ambient, dim), "subspace count")
    for pivots in itertools.combinations(range(ambient), dim):
        slots = [
            (row, col) for row, pivot in enumerate(pivots) for col in range(pivot + 1, ambient) if col not in pivots
        ]
        for values in itertools.product(range(field.p), repeat=len(slots)):
            basis = np.zeros((dim, ambient), dtype=np.int64)
            for row, pivot in enumerate(pivots):
                basis[row, pivot] = 1
            for (row, col), value in zip(slots, values):
                basis[row, col] = value
            yield Subspace.span(field, basis, ambient)


def coset_representatives(subspace: Subspace) -> IntArray:
    """Vectors vanishing on the pivot columns; one per coset of the linear part."""
    free = [col for col in range(subspace.ambient) if col not in subspace.pivots]
    reps = np.zeros((subspace.field.p ** len(free), subspace.ambient), dtype=np.int64)
    if free:
        reps[:, free] = coordinates(subspace.field, len(free))
    return reps


def enumerate_affine_subspaces(field: PrimeField, ambient: int, dim: int) -> Iterator[Subspace]:
    check_size(gaussian_binomial(field.p, ambient, dim) * field.p ** (ambient - dim), "affine subspace count")
    for linear in enumerate_subspaces(field, ambient, dim):
        for rep in coset_representatives(linear):
            yield linear.shifted(rep)


class SubsurfaceType(NamedTuple):
    rank: int
    degenerate_dim: int
    witt_index: int


class QuadraticSpace:
    """A symmetric matrix A over F_p with x∘y = xᵀAy and Q(x) = x∘x."""

    __slots__ = "_field", "_matrix", "_rank", "_witt", "_isotropic", "_lock"

    def __init__(self, field: PrimeField, matrix: npt.ArrayLike):
        matrix = np.atleast_2d(_reduce(field, matrix))
        if matrix.shape[0] != matrix.shape[1] or not np.array_equal(matrix, matrix.T):
            raise ValueError("quadratic form matrix must be square and symmetric")
        matrix.setflags(write=False)
        self._field = field
        self._matrix = matrix
        self._rank = matrix_rank(field, matrix)
        self._witt: Optional[int] = None
        self._isotropic: Optional[Tuple[Subspace, ...]] = None
        self._lock = threading.Lock()

    @classmethod
    def dot(cls, field: PrimeField, dim: int) -> QuadraticSpace:
        """Q(x) = x·x, the form of the paraboloid."""
        return cls(field, np.eye(dim, dtype=np.int64))

    @classmethod
    def hyperbolic(cls, field: PrimeField, n: int) -> QuadraticSpace:
        """Q(x1, x2) = x1·x2 on F_p^n × F_p^n, the form of the hyperbolic paraboloid."""
        half = (field.p + 1) // 2
        identity = np.eye(n, dtype=np.int64) * half
        zeros = np.zeros((n, n), dtype=np.int64)
        return cls(field, np.block([[zeros, identity], [identity, zeros]]))

    @classmethod
    def diagonal(cls, field: PrimeField, entries: Sequence[int]) -> QuadraticSpace:
        return cls(field, np.diag(np.asarray(entries, dtype=np.int64)))

    @property
    def field(self) -> PrimeField:
        return self._field

    @property
    def matrix(self) -> IntArray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def degenerate_dim(self) -> int:
        return self.dim - self._rank

    @property
    def is_degenerate(self) -> bool:
        return self._rank < self.dim

    @property
    def witt_index(self) -> int:
        with self._lock:
            if self._witt is None:
                self._witt = witt_index(self)
            return self._witt

    def determinant(self) -> int:
        return determinant(self._field, self._matrix)

    def value(self, x: npt.ArrayLike) -> IntArray:
        """Q evaluated on the last axis of ``x``."""
        x = np.asarray(x, dtype=np.int64)
        return np.einsum("...i,ij,...j->...", x, self._matrix, x) % self._field.p

    def bilinear(self, x: npt.ArrayLike, y: npt.ArrayLike) -> IntArray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.einsum("...i,ij,...j->...", x, self._matrix, y) % self._field.p

    def transformed(self, change: npt.ArrayLike) -> QuadraticSpace:
        """The congruent form MᵀAM."""
        change = _reduce(self._field, change)
        return QuadraticSpace(self._field, mat_mul(self._field, change.T, self._matrix, change))

    def max_isotropic(self) -> Tuple[Subspace, ...]:
        with self._lock:
            if self._isotropic is None:
                self._isotropic = tuple(_max_isotropic(self))
            return self._isotropic

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuadraticSpace)
            and other.field == self._field
            and np.array_equal(other.matrix, self._matrix)
        )

    def __hash__(self) -> int:
        return hash((self._field, self._matrix.tobytes()))

    def __repr__(self) -> str:
        return f"QuadraticSpace(F_{self._field.p}, {self._matrix.tolist()})"


def restrict_form(form: QuadraticSpace, subspace: Subspace) -> IntArray:
    """Gram matrix of the bilinear form on the canonical basis of ``subspace``."""
    basis = subspace.matrix
    return mat_mul(form.field, basis, form.matrix, basis.T)


def diagonalize(form: QuadraticSpace) -> Tuple[IntArray, QuadraticSpace]:
    """Finds an invertible M with MᵀAM diagonal.

    Pivots are chosen by lowest index. A zero diagonal entry is repaired by swapping in a later non-zero diagonal
    entry, or failing that by replacing e_i with e_i + e_k, which has Q(e_i + e_k) = 2A_ik ≠ 0.

    Args:
        form (QuadraticSpace): any form, degenerate allowed

    Returns (Tuple[IntArray, QuadraticSpace]): the change of basis M and the diagonal form D = MᵀAM
    """
    field = form.field
    size = form.dim
    change = np.eye(size, dtype=np.int64)
    work = form.matrix.copy()

    def apply(step: IntArray) -> None:
        nonlocal change, work
        change = change @ step % field.p
        work = step.T @ work @ step % field.p

    for i in range(size):
        if not work[i, i + 1 :].any():
            continue
        if work[i, i] == 0:
            later = [k for k in range(i + 1, size) if work[k, k]]
            step = np.eye(size, dtype=np.int64)
            if later:
                k = later[0]
                step[[i, k]] = step[[k, i]]
            else:
                k = i + 1 + int(np.flatnonzero(work[i, i + 1 :])[0])
                step[k, i] = 1
            apply(step)
        pivot_inverse = field.inverse(int(work[i, i]))
        step = np.eye(size, dtype=np.int64)
        for j in range(i + 1, size):
            step[i, j] = -work[i, j] * pivot_inverse % field.p
        apply(step)
    return change, QuadraticSpace(field, work)


def witt_index(form: QuadraticSpace) -> int:
    """Dimension of a maximal totally isotropic subspace of a non-degenerate form.

    For odd m the index is (m−1)/2. For m = 2n it is n when (−1)^n det A is a square and n−1 otherwise, which is
    the determinant/parity classification of binary and higher even-dimensional forms.

    Raises:
        DegenerateForm: when rank A < m
    """
    if form.is_degenerate:
        raise DegenerateForm(form.rank, form.dim)
    size = form.dim
    if size % 2:
        return (size - 1) // 2
    n = size // 2
    discriminant = (-1) ** n * form.determinant()
    return n if form.field.is_square(discriminant) else n - 1


def witt_index_exhaustive(form: QuadraticSpace) -> int:
    """Largest k admitting a totally isotropic k-dimensional subspace, by brute force."""
    check_size(form.field.p**form.dim)
    for dim in range(form.dim, 0, -1):
        if any(space.is_totally_isotropic(form) for space in enumerate_subspaces(form.field, form.dim, dim)):
            return dim
    return 0


def isotropic_vectors_exhaustive(form: QuadraticSpace) -> IntArray:
    points = coordinates(form.field, form.dim)
    return points[form.value(points) == 0]


def _max_isotropic(form: QuadraticSpace) -> List[Subspace]:
    dim = witt_index(form)
    check_size(form.field.p**form.dim)
    if dim == 0:
        return []
    return sorted(space for space in enumerate_subspaces(form.field, form.dim, dim) if space.is_totally_isotropic(form))


def enumerate_max_isotropic(form: QuadraticSpace) -> Tuple[Subspace, ...]:
    """All maximal totally isotropic subspaces, canonical and deduplicated, in canonical order."""
    return form.max_isotropic()


def complementary_isotropic(form: QuadraticSpace, isotropic: Subspace) -> Subspace:
    """Builds a totally isotropic V complementary to a maximal totally isotropic W of a 2n-dimensional form.

    Starting from u_j with w_i∘u_j = δ_ij, the vectors v_j = u_j − Σ_k c_jk w_k with c_jl = u_j∘u_l for j < l
    and c_jj = Q(u_j)/2 are mutually orthogonal and isotropic while keeping the pairing w_i∘v_j = δ_ij.

    Args:
        form (QuadraticSpace): non-degenerate form of even dimension 2n and Witt index n
        isotropic (Subspace): linear totally isotropic W with dim W = n

    Returns (Subspace): the complement V
    """
    field = form.field
    if form.is_degenerate or form.dim % 2 or witt_index(form) != form.dim // 2:
        raise NotMaximalIsotropic("the form must be non-degenerate of dimension 2n with Witt index n")
    if not isotropic.is_linear or isotropic.dim != form.dim // 2 or not isotropic.is_totally_isotropic(form):
        raise NotMaximalIsotropic(f"{isotropic} is not a maximal totally isotropic linear subspace")
    pairing = mat_mul(field, isotropic.matrix, form.matrix)
    n = isotropic.dim
    duals = np.array([solve(field, pairing, np.eye(n, dtype=np.int64)[j]) for j in range(n)], dtype=np.int64)
    gram = mat_mul(field, duals, form.matrix, duals.T)
    half = (field.p + 1) // 2
    correction = np.triu(gram, 1) + np.diag(np.diag(gram) * half)
    complement = (duals - correction % field.p @ isotropic.matrix) % field.p
    return Subspace.span(field, complement, form.dim)


def dual_basis(form: QuadraticSpace, isotropic: Subspace, complement: Subspace) -> IntArray:
    """Basis v_j of ``complement`` with w_i∘v_j = δ_ij against the canonical basis w_i of ``isotropic``."""
    gram = mat_mul(form.field, isotropic.matrix, form.matrix, complement.matrix.T)
    return mat_mul(form.field, matrix_inverse(form.field, gram).T, complement.matrix)


def orthogonal_complement(form: QuadraticSpace, subspace: Subspace) -> Subspace:
    """W⊥ = {v : v∘w = 0 for all w ∈ W}, of dimension m − dim W."""
    if form.is_degenerate:
        raise DegenerateForm(form.rank, form.dim)
    if subspace.dim == 0:
        return Subspace.full(form.field, form.dim)
    return Subspace.span(form.field, nullspace(form.field, mat_mul(form.field, subspace.matrix, form.matrix)), form.dim)


def orthogonal_indicator(form: QuadraticSpace, subspace: Subspace) -> npt.NDArray[np.complex128]:
    """|W|^{-1} Σ_{w∈W} e(x∘w) for every x in index order; equals the indicator of W⊥."""
    points = coordinates(form.field, form.dim)
    pairing = points @ form.matrix @ subspace.linear_part().points().T % form.field.p
    return form.field.characters()(pairing).mean(axis=1)


def galilean(surface: Surface, shift: Sequence[int], points: npt.ArrayLike) -> IntArray:
    """τ_t : (x, Q(x)) ↦ (x + t, Q(x + t)) applied to the rows of ``points``.

    Args:
        surface (Surface): the quadratic surface
        shift (Sequence[int]): the point t of the surface, in F_p^d
        points (npt.ArrayLike): points of the surface, one per row

    Returns (IntArray): the image points, in the same order
    """
    shift = np.asarray(shift, dtype=np.int64)
    points = np.asarray(points, dtype=np.int64).reshape(-1, surface.dim)
    for point in (shift, *points):
        if not surface.contains(point):
            raise NotOnSurface(point)
    base = (points[:, :-1] + shift[:-1]) % surface.field.p
    return np.hstack([base, surface.form.value(base)[:, None]])


def classify_subsurface(form: QuadraticSpace, subspace: Subspace) -> SubsurfaceType:
    """Rank, radical dimension and Witt index of the non-degenerate part of Q restricted to V.

    Raises:
        FullyDegenerate: when Q vanishes identically on V
    """
    gram = restrict_form(form, subspace)
    rank = matrix_rank(form.field, gram) if gram.size else 0
    if rank == 0:
        raise FullyDegenerate(f"the form vanishes on {subspace}")
    _, diagonal = diagonalize(QuadraticSpace(form.field, gram))
    entries = [int(value) for value in np.diag(diagonal.matrix) if value]
    core = QuadraticSpace.diagonal(form.field, entries)
    return SubsurfaceType(rank, subspace.dim - rank, witt_index(core))


def subsurface_table(dim: int, ambient_witt: int) -> Tuple[SubsurfaceType, ...]:
    """Admissible (r, s, w) for (d−3)-dimensional sections of a d-dimensional surface.

    A row is admissible when r ≥ 1, r + s = d − 3, s ≤ 2 (the radical sits inside V⊥, which has dimension 2), w
    is a possible Witt index for rank r, and ambient_witt − 2 ≤ s + w ≤ ambient_witt (the isotropic part of V
    meets every maximal isotropic subspace of the ambient form in codimension at most 2).
    """
    rows = []
    size = dim - 3
    for degenerate in range(0, min(2, size) + 1):
        rank = size - degenerate
        if rank < 1:
            continue
        witts = {(rank - 1) // 2} if rank % 2 else {rank // 2, rank // 2 - 1}
        for witt in sorted(witts):
            if ambient_witt - 2 <= degenerate + witt <= ambient_witt:
                rows.append(SubsurfaceType(rank, degenerate, witt))
    return tuple(rows)


def _binary_step(field: PrimeField, first: int, second: int) -> IntArray:
    """N with Nᵀ diag(a, b) N = diag(1, ab) and det N = 1."""
    for x in range(field.p):
        rest = (1 - first * x * x) * field.inverse(second) % field.p
        y = field.sqrt(rest)
        if y is not None:
            return np.array([[x, -second * y], [y, first * x]], dtype=np.int64) % field.p
    raise ArithmeticError("a·x² + b·y² = 1 always has a solution over an odd prime field")


def canonical_diagonal(form: QuadraticSpace) -> Tuple[IntArray, int]:
    """Finds P with PᵀAP = diag(1, ..., 1, c) and returns (P, c)."""
    if form.is_degenerate:
        raise DegenerateForm(form.rank, form.dim)
    field = form.field
    change, diagonal = diagonalize(form)
    entries = [int(value) for value in np.diag(diagonal.matrix)]
    for i in range(form.dim - 1):
        step = np.eye(form.dim, dtype=np.int64)
        step[np.ix_([i, i + 1], [i, i + 1])] = _binary_step(field, entries[i], entries[i + 1])
        change = change @ step % field.p
        entries[i], entries[i + 1] = 1, entries[i] * entries[i + 1] % field.p
    return change, entries[-1]


def congruence_transform(source: QuadraticSpace, target: QuadraticSpace) -> IntArray:
    """Invertible M with MᵀBM = A, where A is ``source`` and B is ``target``.

    Raises:
        NotCongruent: when the forms have different dimension or discriminant class
    """
    field = source.field
    if source.dim != target.dim:
        raise NotCongruent(f"dimensions differ: {source.dim} and {target.dim}")
    change_a, class_a = canonical_diagonal(source)
    change_b, class_b = canonical_diagonal(target)
    ratio = class_a * field.inverse(class_b) % field.p
    root = field.sqrt(ratio)
    if root is None:
        raise NotCongruent("the discriminants differ by a non-square")
    scale = np.eye(source.dim, dtype=np.int64)
    scale[-1, -1] = root
    return mat_mul(field, change_b, scale, matrix_inverse(field, change_a))


def surface_graph(form: QuadraticSpace, subspace: Subspace) -> IntArray:
    """Points (x, Q(x)) for x in ``subspace``."""
    base = subspace.points()
    return np.hstack([base, form.value(base)[:, None]])


def is_affine_set(field: PrimeField, points: npt.ArrayLike) -> bool:
    """True when the rows of ``points`` form an affine subspace."""
    points = np.asarray(points, dtype=np.int64)
    if len(points) <= 1:
        return len(points) == 1
    differences = (points[1:] - points[0]) % field.p
    spanned = Subspace.span(field, differences, points.shape[1], translate=points[0])
    unique = np.unique(points % field.p, axis=0)
    return len(unique) == spanned.size and all(spanned.contains(point) for point in unique)
