import unittest
from fractions import Fraction

import mock
import numpy as np

from fflab.combinatorics import (
    EnergyExponent,
    EnergyKind,
    EnergyMethod,
    HyperplaneFamily,
    PointSet,
    additive_energy,
    cs_incidence_bound,
    degenerate_lift,
    empirical_alpha_energy,
    energy,
    energy_exponent_closed,
    energy_exponent_recurse,
    energy_to_incidence,
    energy_vh_bound,
    greedy_decompose,
    hstar,
    incidence_count,
    isotropic_cover,
    l4_identity,
    max_isotropic_slice,
    off_diagonal_energy,
    planar_entropy,
    quasi_triangle,
    same_hyperplane,
    vh_profile,
)
from fflab.config import get_settings
from fflab.errors import EnergyExcess, NotOnSurface, OutOfValidityRange
from fflab.field import coordinates, get_field
from fflab.qforms import QuadraticSpace
from fflab.surfaces import Surface
from tests.unit.utils import closed_form_surfaces, random_subset, random_surface_subset, rng


class TestEnergy(unittest.TestCase):
    """Tests additive energy and its variants"""

    def test_methods_agree(self):
        field = get_field(5)
        for offset in range(3):
            points = random_subset(field, 2, 9, offset)
            other = random_subset(field, 2, 6, offset + 10)
            self.assertEqual(energy(points, EnergyMethod.FOURIER), energy(points))
            self.assertEqual(
                additive_energy(points, other, EnergyMethod.FOURIER), additive_energy(points, other)
            )

    def test_subgroup(self):
        field = get_field(5)
        line = PointSet(field, 2, [[x, 2 * x] for x in range(5)])
        self.assertEqual(energy(line), 125)

    def test_trivial_bounds(self):
        points = random_subset(get_field(7), 2, 12, 4)
        size = len(points)
        self.assertGreaterEqual(energy(points), 2 * size**2 - size)
        self.assertLessEqual(energy(points), size**3)

    def test_quadruple_loop(self):
        surface = Surface.hyperbolic_paraboloid(get_field(3), 3)
        whole = PointSet(surface.field, 3, surface.points)
        for method in EnergyMethod:
            with self.subTest(method=method):
                self.assertEqual(energy(whole, method), 297)
        points = random_subset(get_field(5), 2, 7, 3)
        other = random_subset(get_field(5), 2, 5, 4)
        self.assertEqual(
            additive_energy(points, other, EnergyMethod.QUADRUPLE_LOOP), additive_energy(points, other)
        )

    def test_empty(self):
        self.assertEqual(energy(PointSet.empty(get_field(3), 2)), 0)

    def test_rejects_mixed_spaces(self):
        field = get_field(3)
        self.assertRaises(ValueError, additive_energy, PointSet.empty(field, 2), PointSet.empty(field, 3))

    def test_method_from_str(self):
        self.assertIs(EnergyMethod.from_str("Quadruple-Loop"), EnergyMethod.QUADRUPLE_LOOP)
        self.assertIs(EnergyMethod.from_str("pair_sums"), EnergyMethod.PAIR_SUMS)
        self.assertIsNone(EnergyMethod.from_str("sampling"))

    def test_l4_identity(self):
        for surface in (Surface.paraboloid(get_field(5), 3), Surface.hyperbolic_paraboloid(get_field(3), 5)):
            lhs, rhs = l4_identity(random_surface_subset(surface, 7), surface)
            self.assertAlmostEqual(lhs, rhs, places=9)


class TestHyperbolicStructure(unittest.TestCase):
    """Tests the VH structure of subsets of the hyperbolic paraboloid"""

    def test_hstar(self):
        for p in (3, 5, 7):
            points = hstar(get_field(p))
            self.assertEqual(len(points), (p - 1) ** 2)
            self.assertFalse(((points.points[:, 0] * points.points[:, 1] - points.points[:, 2]) % p).any())

    def test_profile(self):
        profile = vh_profile(hstar(get_field(5)))
        self.assertEqual(profile.vertical, (0, 4, 4, 4, 4))
        self.assertEqual(profile.horizontal, (0, 4, 4, 4, 4))
        self.assertAlmostEqual(profile.alpha(get_field(5)), np.log(4) / np.log(5))

    def test_profile_rejects_off_surface(self):
        self.assertRaises(NotOnSurface, vh_profile, PointSet(get_field(5), 3, [[1, 1, 2]]))

    def test_vh_bound(self):
        field = get_field(5)
        single = energy_vh_bound(PointSet(field, 3, [[1, 2, 2]]))
        self.assertEqual((single.energy, single.bound), (1, 3.0))
        self.assertAlmostEqual(single.ratio, 1 / 3)
        line = energy_vh_bound(PointSet(field, 3, [[x, 0, 0] for x in range(5)]))
        self.assertEqual(line.energy, 125)
        self.assertLessEqual(line.ratio, 1.0)
        self.assertRaises(NotOnSurface, energy_vh_bound, PointSet(field, 3, [[1, 1, 2]]))

    def test_off_diagonal(self):
        points = hstar(get_field(5))
        self.assertLessEqual(off_diagonal_energy(points), energy(points))
        self.assertGreater(off_diagonal_energy(points), 0)

    def test_planar_entropy_of_one_plane(self):
        field = get_field(5)
        plane = PointSet(field, 3, [[x, 0, t] for x in range(5) for t in range(5)])
        self.assertEqual(planar_entropy(plane), 0.0)
        self.assertEqual(planar_entropy(PointSet(field, 3, plane.points[:3]), exact=True), 0.0)


class TestIncidences(unittest.TestCase):
    """Tests point-hyperplane incidences"""

    def test_all_lines(self):
        for p in (3, 5):
            field = get_field(p)
            points = PointSet(field, 2, coordinates(field, 2))
            count = incidence_count(points, HyperplaneFamily.all_lines(field))
            self.assertEqual(count.count, p * p * (p + 1))
            self.assertEqual((count.c1, count.c2), (1, 1))
            self.assertTrue(count.holds)

    def test_multiplicity(self):
        field = get_field(5)
        family = HyperplaneFamily(field, np.array([[1, 2], [2, 4]]), np.array([1, 2]))
        distinct, counts = family.multiplicities()
        self.assertEqual(len(distinct), 1)
        self.assertEqual(counts.tolist(), [2])

    def test_cs_bound(self):
        self.assertEqual(cs_incidence_bound(4), 16.0)

    def test_same_hyperplane(self):
        form = QuadraticSpace.dot(get_field(5), 2)
        self.assertTrue(same_hyperplane(form, [1, 2], [2, 4]))
        self.assertFalse(same_hyperplane(form, [1, 0], [2, 0]))

    def test_energy_to_incidence(self):
        surface = Surface.hyperbolic_paraboloid(get_field(5), 3)
        first = random_surface_subset(surface, 10, 1)
        second = random_surface_subset(surface, 8, 2)
        reduction = energy_to_incidence(first, second, surface)
        self.assertEqual(reduction.energy, additive_energy(first, second))
        self.assertLessEqual(reduction.energy, len(second) * reduction.incidences.count)


class TestDecompositions(unittest.TestCase):
    """Tests the structured/unstructured splitting"""

    def test_greedy(self):
        field = get_field(5)
        line = PointSet(field, 2, [[x, 0] for x in range(5)])
        points = line.union(PointSet(field, 2, [[1, 1], [2, 3]]))
        decomposition = greedy_decompose(points, 1, 0.5)
        self.assertEqual(len(decomposition.pieces), 1)
        self.assertEqual(decomposition.pieces[0], line)
        self.assertEqual(len(decomposition.residual), 2)
        self.assertEqual(decomposition.structured, line)

    def test_greedy_rejects(self):
        points = random_subset(get_field(3), 2, 4)
        self.assertRaises(ValueError, greedy_decompose, points, 1, 1.0)
        self.assertRaises(ValueError, greedy_decompose, points, 2, 0.5)
        self.assertRaises(ValueError, greedy_decompose, points, 1, 0.5, True)

    def test_isotropic_slice(self):
        field = get_field(3)
        everything = PointSet(field, 2, coordinates(field, 2))
        self.assertEqual(max_isotropic_slice(everything, QuadraticSpace.hyperbolic(field, 1)), 3)
        self.assertEqual(max_isotropic_slice(everything, QuadraticSpace.dot(field, 2)), 1)

    def test_isotropic_cover(self):
        field = get_field(3)
        form = QuadraticSpace.hyperbolic(field, 1)
        cover = isotropic_cover(PointSet(field, 2, coordinates(field, 2)), form)
        self.assertEqual(len(cover.pieces), 3)
        self.assertEqual(len(cover.residual), 0)
        self.assertTrue(all(subspace.is_totally_isotropic(form) for subspace in cover.subspaces))

    def test_quasi_triangle(self):
        field = get_field(5)
        first = random_subset(field, 2, 8, 3)
        second = PointSet(field, 2, coordinates(field, 2)).difference(first)
        self.assertTrue(quasi_triangle([first, second.subset(np.arange(len(second)) < 6)]).holds)
        self.assertRaises(ValueError, quasi_triangle, [])


class TestEnergyExponents(unittest.TestCase):
    """Tests the closed forms and the dimension induction"""

    def test_closed_forms_reach_three(self):
        for kind in (EnergyKind.DIM3_WITT1, EnergyKind.RANK2_DEG, EnergyKind.DIM4, EnergyKind.DIM5_WITT2):
            self.assertEqual(energy_exponent_closed(kind, Fraction(1)), 3)
        self.assertEqual(energy_exponent_closed(EnergyKind.DIM4, Fraction(3, 5)), Fraction(14, 5))

    def test_validity_range(self):
        self.assertRaises(OutOfValidityRange, energy_exponent_closed, EnergyKind.DIM3_WITT1, Fraction(1, 2))
        self.assertRaises(OutOfValidityRange, energy_exponent_closed, EnergyKind.DIM5_WITT2, Fraction(1, 2))

    def test_kind_from_str(self):
        self.assertIs(EnergyKind.from_str("dim4"), EnergyKind.DIM4)
        self.assertIsNone(EnergyKind.from_str("dim6"))

    def test_violations(self):
        good = EnergyExponent.from_closed_form(EnergyKind.DIM3_WITT1, [0.0, 0.5, 0.75, 1.0])
        self.assertEqual(good.violations(), [])
        self.assertAlmostEqual(good(0.875), 2.75)
        flat = EnergyExponent.from_closed_form(EnergyKind.DIM2, [0.0, 1.0])
        self.assertTrue(flat.violations())

    def test_rejects_bad_grid(self):
        self.assertRaises(ValueError, EnergyExponent.from_closed_form, EnergyKind.DIM2, [0.5])
        self.assertRaises(ValueError, EnergyExponent.from_closed_form, EnergyKind.DIM2, [0.5, 0.2])

    def test_degenerate_lift(self):
        inner = EnergyExponent.from_closed_form(EnergyKind.DIM3_WITT1, [0.0, 0.75, 1.0])
        self.assertAlmostEqual(degenerate_lift(inner, 1.0), 3.0)
        self.assertAlmostEqual(degenerate_lift(inner, 0.0), inner(0.0))

    def test_recursion(self):
        inner = EnergyExponent.from_closed_form(EnergyKind.DIM3_WITT1, [0.0, 0.75, 1.0])
        self.assertEqual(energy_exponent_recurse(inner, 1.0), 3.0)
        value = energy_exponent_recurse(inner, 0.6)
        self.assertGreaterEqual(value, 2.5)
        self.assertLessEqual(value, 3.0)
        self.assertRaises(ValueError, energy_exponent_recurse, inner, 1.5)

    def test_empirical_scatter(self):
        surface = Surface.hyperbolic_paraboloid(get_field(3), 3)
        samples = empirical_alpha_energy(surface, 2, rng(9))
        self.assertTrue(samples)
        for sample in samples:
            self.assertGreaterEqual(sample.alpha, 0.0)
            self.assertLessEqual(sample.alpha, 1.0 + 1e-12)
            self.assertGreaterEqual(sample.exponent, 2.0 - 1e-12)
            self.assertLessEqual(sample.exponent, 3.0 + 1e-12)

    def test_empirical_within_log_slack(self):
        slack = get_settings().log_slack
        for p in (3, 5):
            for surface in closed_form_surfaces(p):
                for sample in empirical_alpha_energy(surface, 20, rng(p)):
                    with self.subTest(p=p, surface=surface.kind, sample=sample.label):
                        self.assertLessEqual(sample.excess, slack)

    def test_empirical_excess_raises(self):
        surface = Surface.hyperbolic_paraboloid(get_field(3), 3)
        with mock.patch("fflab.combinatorics.surface_energy_curve", return_value=lambda alpha: 2.0):
            with self.assertRaises(EnergyExcess) as context:
                empirical_alpha_energy(surface, 2, rng(9))
        self.assertIn("full surface", [sample.label for sample in context.exception.breaches])
        self.assertGreaterEqual(len(context.exception.samples), len(context.exception.breaches))
        self.assertRaises(EnergyExcess, empirical_alpha_energy, surface, 0, rng(9), -1.0)
