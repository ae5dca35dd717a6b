import itertools
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from fflab.errors import DegenerateForm, FullyDegenerate, NotCongruent, NotMaximalIsotropic
from fflab.field import coordinates, get_field
from fflab.qforms import (
    QuadraticSpace,
    Subspace,
    SubsurfaceType,
    classify_subsurface,
    complementary_isotropic,
    congruence_transform,
    determinant,
    diagonalize,
    dual_basis,
    enumerate_affine_subspaces,
    enumerate_max_isotropic,
    enumerate_subspaces,
    gaussian_binomial,
    is_affine_set,
    mat_mul,
    matrix_inverse,
    matrix_rank,
    nullspace,
    orthogonal_complement,
    orthogonal_indicator,
    row_reduce,
    subsurface_table,
    surface_graph,
    witt_index,
    witt_index_exhaustive,
)


class TestLinearAlgebra(unittest.TestCase):
    """Tests mod-p linear algebra"""

    def setUp(self):
        self.field = get_field(5)

    def test_rank_and_determinant(self):
        matrix = [[1, 2], [2, 4]]
        self.assertEqual(matrix_rank(self.field, matrix), 1)
        self.assertEqual(determinant(self.field, matrix), 0)
        self.assertEqual(determinant(self.field, [[1, 2], [3, 4]]), (4 - 6) % 5)

    def test_inverse(self):
        matrix = np.array([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
        product = mat_mul(self.field, matrix, matrix_inverse(self.field, matrix))
        self.assertTrue(np.array_equal(product, np.eye(3, dtype=np.int64)))

    def test_row_reduce(self):
        reduced, pivots = row_reduce(self.field, [[0, 2, 4], [1, 1, 1], [1, 3, 1]])
        self.assertEqual(pivots, (0, 1, 2))
        self.assertTrue(np.array_equal(reduced, np.eye(3, dtype=np.int64)))
        reduced, pivots = row_reduce(self.field, [[2, 4, 1], [1, 2, 4]])
        self.assertEqual(pivots, (0, 2))
        self.assertTrue(np.array_equal(reduced, [[1, 2, 0], [0, 0, 1]]))
        self.assertEqual(reduced.dtype, np.int64)

    def test_singular_and_empty(self):
        self.assertRaises(ValueError, matrix_inverse, self.field, [[1, 2], [2, 4]])
        self.assertEqual(determinant(self.field, np.zeros((0, 0), dtype=np.int64)), 1)
        self.assertEqual(matrix_rank(self.field, np.zeros((0, 3), dtype=np.int64)), 0)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.integers(min_value=-10, max_value=10), min_size=9, max_size=9))
    def test_rank_counts_image(self, entries):
        field = get_field(3)
        matrix = np.array(entries).reshape(3, 3)
        image = {tuple(row) for row in coordinates(field, 3) @ matrix.T % 3}
        rank = matrix_rank(field, matrix)
        self.assertEqual(len(image), 3**rank)
        self.assertEqual(determinant(field, matrix) != 0, rank == 3)
        self.assertEqual(len(nullspace(field, matrix)), 3 - rank)

    def test_nullspace(self):
        matrix = np.array([[1, 1, 1]])
        kernel = nullspace(self.field, matrix)
        self.assertEqual(len(kernel), 2)
        self.assertFalse((matrix @ kernel.T % 5).any())

    def test_subspace_counts(self):
        for ambient, dim in ((2, 1), (3, 1), (3, 2), (4, 2)):
            spaces = list(enumerate_subspaces(get_field(3), ambient, dim))
            self.assertEqual(len(spaces), gaussian_binomial(3, ambient, dim))
            self.assertEqual(len(set(space.basis for space in spaces)), len(spaces))

    def test_affine_count(self):
        spaces = list(enumerate_affine_subspaces(get_field(3), 2, 1))
        self.assertEqual(len(spaces), 12)

    def test_canonical_basis(self):
        first = Subspace.span(self.field, [[2, 4, 0], [0, 0, 3]])
        second = Subspace.span(self.field, [[1, 2, 1], [0, 0, 1]])
        self.assertEqual(first.basis, second.basis)

    def test_intersection(self):
        field = get_field(3)
        plane = Subspace.span(field, [[1, 0, 0], [0, 1, 0]])
        other = Subspace.span(field, [[0, 1, 0], [0, 0, 1]])
        self.assertEqual(plane.intersection(other).basis, ((0, 1, 0),))
        shifted = plane.shifted([0, 0, 1])
        self.assertIsNone(plane.intersection(shifted))

    def test_points_in_subspace(self):
        line = Subspace.span(self.field, [[1, 2]]).shifted([0, 1])
        self.assertEqual(len(line.points()), 5)
        self.assertTrue(all(line.contains(point) for point in line.points()))
        self.assertFalse(line.contains([0, 0]))


class TestWittIndex(unittest.TestCase):
    """Tests the determinant classification of the Witt index"""

    def test_binary_dot(self):
        self.assertEqual(witt_index(QuadraticSpace.dot(get_field(3), 2)), 0)
        self.assertEqual(witt_index(QuadraticSpace.dot(get_field(5), 2)), 1)

    def test_hyperbolic(self):
        for n in (1, 2):
            self.assertEqual(witt_index(QuadraticSpace.hyperbolic(get_field(3), n)), n)

    def test_odd(self):
        self.assertEqual(witt_index(QuadraticSpace.dot(get_field(7), 3)), 1)
        self.assertEqual(witt_index(QuadraticSpace.dot(get_field(3), 5)), 2)

    def test_degenerate(self):
        self.assertRaises(DegenerateForm, witt_index, QuadraticSpace.diagonal(get_field(3), [1, 0]))

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([3, 5]), st.lists(st.integers(min_value=1, max_value=4), min_size=2, max_size=3))
    def test_against_exhaustive(self, p, entries):
        form = QuadraticSpace.diagonal(get_field(p), [e % p or 1 for e in entries])
        self.assertEqual(witt_index(form), witt_index_exhaustive(form))

    def test_max_isotropic_are_maximal(self):
        form = QuadraticSpace.hyperbolic(get_field(3), 2)
        spaces = enumerate_max_isotropic(form)
        self.assertTrue(spaces)
        for space in spaces:
            self.assertEqual(space.dim, 2)
            self.assertTrue(space.is_totally_isotropic(form))

    def test_diagonalize(self):
        form = QuadraticSpace.hyperbolic(get_field(5), 2)
        change, diagonal = diagonalize(form)
        self.assertTrue(np.array_equal(mat_mul(form.field, change.T, form.matrix, change), diagonal.matrix))
        self.assertFalse((diagonal.matrix - np.diag(np.diag(diagonal.matrix))).any())


class TestComplements(unittest.TestCase):
    """Tests isotropic complements, dual bases and orthogonality"""

    def test_complementary_isotropic(self):
        for p, n in ((3, 1), (3, 2), (5, 2)):
            form = QuadraticSpace.hyperbolic(get_field(p), n)
            for isotropic in enumerate_max_isotropic(form)[:5]:
                complement = complementary_isotropic(form, isotropic)
                self.assertTrue(complement.is_totally_isotropic(form))
                basis = dual_basis(form, isotropic, complement)
                pairing = mat_mul(form.field, isotropic.matrix, form.matrix, basis.T)
                self.assertTrue(np.array_equal(pairing, np.eye(n, dtype=np.int64)))

    def test_complement_rejects_anisotropic(self):
        form = QuadraticSpace.dot(get_field(3), 2)
        self.assertRaises(NotMaximalIsotropic, complementary_isotropic, form, Subspace.span(form.field, [[1, 0]]))

    def test_orthogonal_complement(self):
        field = get_field(5)
        form = QuadraticSpace.dot(field, 3)
        subspace = Subspace.span(field, [[1, 2, 0]])
        complement = orthogonal_complement(form, subspace)
        self.assertEqual(complement.dim, 2)
        self.assertFalse(mat_mul(field, subspace.matrix, form.matrix, complement.matrix.T).any())

    def test_orthogonal_indicator(self):
        field = get_field(3)
        form = QuadraticSpace.hyperbolic(field, 1)
        subspace = Subspace.span(field, [[1, 1]])
        complement = orthogonal_complement(form, subspace)
        expected = [float(complement.contains(point)) for point in coordinates(field, 2)]
        self.assertLess(np.max(np.abs(orthogonal_indicator(form, subspace) - expected)), 1e-12)


class TestCongruence(unittest.TestCase):
    """Tests changes of variables between congruent forms"""

    def test_transform(self):
        field = get_field(5)
        source = QuadraticSpace.dot(field, 3)
        target = source.transformed([[1, 2, 0], [0, 1, 1], [0, 0, 1]])
        change = congruence_transform(source, target)
        self.assertTrue(np.array_equal(mat_mul(field, change.T, target.matrix, change), source.matrix))

    def test_different_discriminants(self):
        field = get_field(3)
        source = QuadraticSpace.dot(field, 2)
        target = QuadraticSpace.diagonal(field, [1, field.non_residue()])
        self.assertRaises(NotCongruent, congruence_transform, source, target)

    def test_different_dimensions(self):
        field = get_field(3)
        first, second = QuadraticSpace.dot(field, 2), QuadraticSpace.dot(field, 3)
        self.assertRaises(NotCongruent, congruence_transform, first, second)


class TestSubsurfaces(unittest.TestCase):
    """Tests the classification of sections and the affine characterization"""

    def test_table(self):
        self.assertEqual(subsurface_table(4, 1), (SubsurfaceType(1, 0, 0),))
        for row in subsurface_table(6, 2):
            self.assertEqual(row.rank + row.degenerate_dim, 3)
            self.assertLessEqual(row.degenerate_dim, 2)

    def test_classify(self):
        field = get_field(5)
        form = QuadraticSpace.dot(field, 4)
        row = classify_subsurface(form, Subspace.span(field, [[1, 0, 0, 0], [0, 1, 0, 0]]))
        self.assertEqual(row, SubsurfaceType(2, 0, 1))

    def test_fully_degenerate(self):
        field = get_field(3)
        form = QuadraticSpace.hyperbolic(field, 1)
        self.assertRaises(FullyDegenerate, classify_subsurface, form, Subspace.span(field, [[1, 0]]))

    def test_affine_characterization(self):
        field = get_field(3)
        form = QuadraticSpace.hyperbolic(field, 2)
        for space in itertools.islice(enumerate_subspaces(field, 4, 2), 40):
            self.assertEqual(is_affine_set(field, surface_graph(form, space)), space.is_totally_isotropic(form))

    def test_affine_set(self):
        field = get_field(3)
        self.assertTrue(is_affine_set(field, [[0, 1], [1, 1], [2, 1]]))
        self.assertFalse(is_affine_set(field, [[0, 0], [1, 1], [2, 0]]))
        self.assertFalse(is_affine_set(field, np.zeros((0, 2))))
