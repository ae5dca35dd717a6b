import unittest
from fractions import Fraction

import numpy as np

from fflab.combinatorics import PointSet
from fflab.errors import NotIsotropicPair
from fflab.field import FFunction, get_field
from fflab.kakeya import (
    AffineLine,
    KakeyaInstance,
    coset_extension,
    dual_consistency,
    dual_pairing_bound,
    kakeya_density_exponent,
    kakeya_exponent_from_restriction,
    kakeya_maximal,
    kakeya_maximal_ratio,
    kakeya_reg_set_check,
    kakeya_reg_set_exponent,
    kakeya_set_audit,
    line_sums,
    maximizing_bases,
    mixed_extension_ratio,
    restriction_to_kakeya_embed,
    single_cap_functions,
    union_of_lines,
)
from fflab.qforms import Subspace
from fflab.surfaces import Surface, SurfaceFunction, extension
from tests.unit.utils import random_ffunction, rng


def random_bases(p: int, dim: int, offset: int) -> np.ndarray:
    return rng(offset).integers(0, p, size=(p**dim, dim))


class TestMaximalFunction(unittest.TestCase):
    """Tests the Kakeya maximal operator"""

    def test_line(self):
        field = get_field(5)
        line = AffineLine(field, (1, 2), (3, 4))
        points = line.points()
        self.assertEqual(points.shape, (5, 3))
        self.assertEqual(points[1].tolist(), [4, 1, 1])
        self.assertRaises(ValueError, AffineLine, field, (1,), (1, 2))

    def test_single_line(self):
        field = get_field(5)
        maximal = kakeya_maximal(AffineLine(field, (0,), (1,)).indicator())
        expected = [1.0, 5.0, 1.0, 1.0, 1.0]
        self.assertTrue(np.allclose(maximal.data.real, expected))
        self.assertEqual(maximizing_bases(AffineLine(field, (2,), (1,)).indicator())[1].tolist(), [2])

    def test_line_sums(self):
        field = get_field(3)
        sums = line_sums(FFunction.constant(field, 2), [1])
        self.assertTrue(np.allclose(sums, 3.0))

    def test_constant_ratio(self):
        for p, m in ((3, 2), (5, 2), (3, 3)):
            self.assertAlmostEqual(kakeya_maximal_ratio(FFunction.constant(get_field(p), m)), 1.0)

    def test_zero_ratio(self):
        self.assertEqual(kakeya_maximal_ratio(FFunction.zeros(get_field(3), 2)), 0.0)

    def test_rejects_one_dimension(self):
        self.assertRaises(ValueError, kakeya_maximal, FFunction.constant(get_field(3), 1))


class TestDuality(unittest.TestCase):
    """Tests the dual Kakeya operator and the alternating ascent"""

    def test_pairing_bound(self):
        for p, m in ((3, 2), (5, 2), (3, 3)):
            h = random_ffunction(p, m - 1, 1, real=True).abs()
            target = random_ffunction(p, m, 2)
            self.assertTrue(dual_pairing_bound(h, random_bases(p, m - 1, 3), target).holds)

    def test_dual_dominates_primal(self):
        F = random_ffunction(3, 2, 4).abs()  # pylint: disable=invalid-name
        for q_exp, p_exp in ((2.0, 2.0), (3.0, 1.5)):
            result = dual_consistency(F, q_exp, p_exp, steps=10)
            self.assertEqual(len(result.primal), len(result.dual))
            for primal, dual in zip(result.primal, result.dual):
                self.assertGreaterEqual(dual, primal - 1e-9)


class TestKakeyaSets(unittest.TestCase):
    """Tests line unions and the audit"""

    def test_union_of_lines(self):
        for p in (3, 5, 7):
            instance = union_of_lines(get_field(p), 2)
            self.assertGreaterEqual(len(instance.points), p * (p + 1) // 2)
            audit = kakeya_set_audit(instance)
            self.assertTrue(audit.is_kakeya)
            self.assertEqual(audit.missing, ())

    def test_squares_density(self):
        for p in (3, 5, 7, 11):
            half = Fraction(p + 1, 2 * p)
            self.assertAlmostEqual(kakeya_set_audit(union_of_lines(get_field(p), 2)).density, float(half))
            self.assertEqual(len(union_of_lines(get_field(p), 2).points), p * (p + 1) // 2)
            if p <= 7:
                self.assertAlmostEqual(kakeya_set_audit(union_of_lines(get_field(p), 3)).density, float(half**2))

    def test_audit_without_witness(self):
        instance = union_of_lines(get_field(3), 3)
        audit = kakeya_set_audit(KakeyaInstance(instance.points))
        self.assertTrue(audit.is_kakeya)
        self.assertAlmostEqual(audit.density, len(instance.points) / 27)

    def test_horizontal_directions(self):
        audit = kakeya_set_audit(union_of_lines(get_field(5), 2), include_horizontal=True)
        self.assertFalse(audit.is_kakeya)
        self.assertEqual(audit.missing, ((1, 0),))

    def test_incomplete_set(self):
        field = get_field(3)
        audit = kakeya_set_audit(KakeyaInstance(PointSet(field, 2, AffineLine(field, (0,), (1,)).points())))
        self.assertFalse(audit.is_kakeya)
        self.assertEqual(len(audit.missing), 2)

    def test_bad_witness(self):
        field = get_field(3)
        points = PointSet(field, 2, AffineLine(field, (0,), (1,)).points())
        self.assertRaises(ValueError, KakeyaInstance, points, {(1,): (1,)})


class TestRestrictionBridges(unittest.TestCase):
    """Tests the embeddings between restriction and Kakeya problems"""

    def test_embedding(self):
        for p in (3, 5):
            surface = Surface.hyperbolic_paraboloid(get_field(p), 3)
            h = FFunction(surface.field, 1, rng(p).random(p))
            embedding = restriction_to_kakeya_embed(surface, h, random_bases(p, 1, p))
            self.assertLess(embedding.deviation, 1e-9)
            self.assertLess(embedding.collapse_deviation, 1e-9)

    def test_embedding_in_five_dimensions(self):
        surface = Surface.hyperbolic_paraboloid(get_field(3), 5)
        h = FFunction(surface.field, 2, rng(6).random(9))
        embedding = restriction_to_kakeya_embed(surface, h, random_bases(3, 2, 6))
        self.assertLess(embedding.deviation, 1e-9)
        self.assertLess(embedding.collapse_deviation, 1e-9)

    def test_embedding_rejects(self):
        field = get_field(3)
        h = FFunction.constant(field, 1)
        bases = np.zeros((3, 1), dtype=np.int64)
        self.assertRaises(ValueError, restriction_to_kakeya_embed, Surface.paraboloid(field, 3), h, bases)
        negative = FFunction(field, 1, np.array([1.0, -1.0, 0.0]))
        surface = Surface.hyperbolic_paraboloid(field, 3)
        self.assertRaises(ValueError, restriction_to_kakeya_embed, surface, negative, bases)

    def test_exponents(self):
        self.assertAlmostEqual(kakeya_exponent_from_restriction(2, 2.0, 0.0), 0.5)
        self.assertAlmostEqual(kakeya_exponent_from_restriction(3, 4.0, 0.25), 2.0)
        self.assertEqual(kakeya_density_exponent(2), Fraction(1, 3))
        self.assertAlmostEqual(kakeya_reg_set_exponent(3, 0.0, 0.0), 0.25)


class TestCosetCoordinates(unittest.TestCase):
    """Tests extensions written over complementary isotropic subspaces"""

    def setUp(self):
        self.field = get_field(3)
        self.surface = Surface.hyperbolic_paraboloid(self.field, 5)
        self.inner = Subspace.span(self.field, [[1, 0, 0, 0], [0, 1, 0, 0]])
        self.outer = Subspace.span(self.field, [[0, 0, 1, 0], [0, 0, 0, 1]])

    def test_matches_extension(self):
        f = SurfaceFunction.random(self.surface, rng(11))
        self.assertLess(coset_extension(f, self.inner, self.outer).max_deviation(extension(f)), 1e-9)

    def test_paraboloid(self):
        field = get_field(5)
        surface = Surface.paraboloid(field, 3)
        inner, outer = Subspace.span(field, [[1, 2]]), Subspace.span(field, [[1, 3]])
        f = SurfaceFunction.random(surface, rng(12))
        self.assertLess(coset_extension(f, inner, outer).max_deviation(extension(f)), 1e-9)

    def test_rejects_non_isotropic(self):
        f = SurfaceFunction.constant(self.surface)
        inner = Subspace.span(self.field, [[1, 0, 0, 0], [0, 0, 1, 0]])
        self.assertRaises(NotIsotropicPair, coset_extension, f, inner, self.outer)
        self.assertRaises(NotIsotropicPair, coset_extension, f, self.inner, self.inner)

    def test_caps(self):
        caps = single_cap_functions(self.surface, self.inner, self.outer)
        self.assertEqual(len(caps), 9)
        self.assertTrue(all(np.count_nonzero(cap.values) == 9 for cap in caps))
        self.assertGreater(mixed_extension_ratio(caps[0], self.inner, self.outer), 0)

    def test_regular_set_check(self):
        surface = Surface.hyperbolic_paraboloid(self.field, 3)
        check = kakeya_reg_set_check(FFunction.delta(self.field, 3), surface)
        self.assertEqual((check.gamma, check.e), (0.0, 0.0))
        self.assertAlmostEqual(check.exponent, 0.25)
        self.assertRaises(ValueError, kakeya_reg_set_check, FFunction.zeros(self.field, 3), surface)
