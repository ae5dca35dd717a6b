import unittest

import numpy as np

from fflab.errors import DegenerateForm, NotCongruent
from fflab.field import FFunction, Measure, coordinates, get_field, lp_norm
from fflab.fourier import exact_r22, inverse_transform
from fflab.qforms import QuadraticSpace, matrix_inverse
from fflab.surfaces import (
    BochnerRieszVariant,
    ConvolutionMethod,
    Surface,
    SurfaceFunction,
    SurfaceKind,
    bochner_riesz,
    bochner_riesz_kernel,
    equivalence_transfer,
    extension,
    extension_norm_lower_bound,
    extension_operator_norm,
    extension_ratio,
    fourier_decay,
    gauss_sum,
    line_intersection_exponent,
    plane_embed_ft,
    pseudo_conformal_check,
    restriction,
    surface_measure_direct,
    surface_measure_inverse_ft,
    tube_kernel,
)
from tests.unit.utils import closed_form_surfaces, random_ffunction, rng


def direct_extension(f: SurfaceFunction) -> np.ndarray:
    surface = f.surface
    field = surface.field
    points = coordinates(field, surface.dim)
    pairing = points @ surface.points.T % field.p
    return field.characters()(pairing) @ f.values / surface.size


class TestSurface(unittest.TestCase):
    """Tests surface construction"""

    def test_sizes(self):
        field = get_field(5)
        self.assertEqual(Surface.paraboloid(field, 4).size, 125)
        self.assertEqual(Surface.hyperbolic_paraboloid(field, 3).size, 25)

    def test_contains(self):
        surface = Surface.hyperbolic_paraboloid(get_field(5), 3)
        self.assertTrue(surface.contains([2, 3, 1]))
        self.assertFalse(surface.contains([2, 3, 2]))
        self.assertTrue(all(surface.contains(point) for point in surface.points))

    def test_hyperbolic_needs_odd_dimension(self):
        self.assertRaises(ValueError, Surface.hyperbolic_paraboloid, get_field(3), 4)

    def test_degenerate(self):
        self.assertRaises(DegenerateForm, Surface, QuadraticSpace.diagonal(get_field(3), [1, 0]))

    def test_kind_from_str(self):
        self.assertIs(SurfaceKind.from_str("hyperbolic-paraboloid"), SurfaceKind.HYPERBOLIC_PARABOLOID)
        self.assertIsNone(SurfaceKind.from_str("sphere"))


class TestExtension(unittest.TestCase):
    """Tests the extension and restriction operators"""

    def test_against_definition(self):
        for p in (3, 5):
            for surface in closed_form_surfaces(p):
                f = SurfaceFunction.random(surface, rng(p))
                self.assertLess(np.max(np.abs(extension(f).data - direct_extension(f))), 1e-9)

    def test_adjoint(self):
        surface = Surface.paraboloid(get_field(5), 3)
        f = SurfaceFunction.random(surface, rng(1))
        F = random_ffunction(5, 3, 2)  # pylint: disable=invalid-name
        left = np.vdot(F.data, extension(f).data)
        right = f.inner(restriction(F, surface), Measure.NORMALIZED)
        self.assertAlmostEqual(left, right)

    def test_r22(self):
        for surface in closed_form_surfaces(5):
            self.assertAlmostEqual(exact_r22(surface), 5**0.5)
            self.assertAlmostEqual(extension_operator_norm(surface, rng(3)), exact_r22(surface), places=6)
            f = SurfaceFunction.random(surface, rng(4))
            self.assertAlmostEqual(extension_ratio(f, 2.0, 2.0), exact_r22(surface))

    def test_lower_bound_below_trivial_upper(self):
        surface = Surface.hyperbolic_paraboloid(get_field(3), 3)
        bound = extension_norm_lower_bound(surface, 4.0, 2.0, 2, rng(5))
        self.assertGreater(bound.value, 0)
        self.assertAlmostEqual(extension_ratio(bound.witness, 4.0, 2.0), bound.value)
        self.assertLessEqual(bound.value, 3**1.5 + 1e-9)


class TestSurfaceMeasure(unittest.TestCase):
    """Tests the closed forms of (dσ)∨"""

    def test_closed_forms(self):
        surfaces = [surface for p in (3, 5, 7) for surface in closed_form_surfaces(p)]
        surfaces += [Surface.paraboloid(get_field(3), 4), Surface.hyperbolic_paraboloid(get_field(3), 5)]
        for surface in surfaces:
            closed = surface_measure_inverse_ft(surface)
            self.assertLess(closed.max_deviation(surface_measure_direct(surface)), 1e-9)

    def test_gauss_sum(self):
        field = get_field(7)
        self.assertAlmostEqual(gauss_sum(field, 0), 7)
        for t in range(1, 7):
            self.assertAlmostEqual(abs(gauss_sum(field, t)) ** 2, 7)

    def test_decay(self):
        for p in (3, 5):
            for surface in closed_form_surfaces(p):
                self.assertAlmostEqual(fourier_decay(surface), p ** (-(surface.dim - 1) / 2))


class TestBochnerRiesz(unittest.TestCase):
    """Tests kernels and convolutions"""

    def test_variants(self):
        surface = Surface.paraboloid(get_field(3), 3)
        delta = FFunction.delta(surface.field, 3)
        difference = bochner_riesz_kernel(surface, BochnerRieszVariant.KERNEL_ONLY) - bochner_riesz_kernel(
            surface, BochnerRieszVariant.WITH_DELTA
        )
        self.assertLess(difference.max_deviation(delta), 1e-12)

    def test_methods_agree(self):
        surface = Surface.hyperbolic_paraboloid(get_field(3), 3)
        F = random_ffunction(3, 3, 6)  # pylint: disable=invalid-name
        fast = bochner_riesz(F, surface, BochnerRieszVariant.WITH_DELTA)
        slow = bochner_riesz(F, surface, BochnerRieszVariant.WITH_DELTA, ConvolutionMethod.DIRECT)
        self.assertLess(fast.max_deviation(slow), 1e-9)

    def test_kernel_only_is_projection(self):
        surface = Surface.paraboloid(get_field(3), 3)
        f = SurfaceFunction.random(surface, rng(7))
        image = bochner_riesz(extension(f), surface, BochnerRieszVariant.KERNEL_ONLY)
        self.assertLess(image.max_deviation(extension(f) * (27 / 9)), 1e-9)

    def test_tube_kernel(self):
        field = get_field(5)
        kernel = tube_kernel(field, 2)
        points = coordinates(field, 3)
        expected = (points[:, 1] + 2 * points[:, 2]) % 5 == 0
        self.assertTrue(np.array_equal(kernel.data.real.astype(bool), expected))

    def test_line_intersection_exponent(self):
        field = get_field(5)
        self.assertAlmostEqual(line_intersection_exponent(field, [(0, t) for t in range(5)]), 1.0)
        self.assertAlmostEqual(line_intersection_exponent(field, [(1, 1)]), 0.0)


class TestIdentities(unittest.TestCase):
    """Tests the pseudo-conformal, plane-embedding and equivalence identities"""

    def test_pseudo_conformal(self):
        for p in (3, 5):
            for surface in closed_form_surfaces(p):
                grid = np.zeros((p,) * 3, dtype=np.complex128)
                grid[..., 0] = random_ffunction(p, 2, p).grid()
                self.assertLess(pseudo_conformal_check(FFunction.from_grid(surface.field, grid), surface), 1e-9)

    def test_pseudo_conformal_rejects_spread(self):
        surface = Surface.paraboloid(get_field(3), 3)
        self.assertRaises(ValueError, pseudo_conformal_check, random_ffunction(3, 3), surface)

    def test_plane_embedding(self):
        for a, b in ((0, 0), (1, 2), (4, 3)):
            self.assertLess(plane_embed_ft(random_ffunction(5, 2, a + b), a, b).deviation, 1e-9)

    def test_equivalence_transfer(self):
        field = get_field(5)
        source = Surface.paraboloid(field, 3)
        change = np.array([[1, 2], [0, 1]])
        target = Surface(source.form.transformed(change))
        f = SurfaceFunction.random(source, rng(8))
        g = equivalence_transfer(f, matrix_inverse(field, change), target)
        self.assertAlmostEqual(g.norm(3, Measure.NORMALIZED), f.norm(3, Measure.NORMALIZED))
        self.assertAlmostEqual(
            lp_norm(extension(g), 4, Measure.COUNTING), lp_norm(extension(f), 4, Measure.COUNTING)
        )

    def test_equivalence_rejects(self):
        field = get_field(5)
        source = Surface.paraboloid(field, 3)
        target = Surface.hyperbolic_paraboloid(field, 3)
        f = SurfaceFunction.constant(source)
        self.assertRaises(NotCongruent, equivalence_transfer, f, np.eye(2, dtype=np.int64), target)

    def test_extension_of_constant(self):
        surface = Surface.paraboloid(get_field(3), 3)
        constant = extension(SurfaceFunction.constant(surface))
        self.assertLess(constant.max_deviation(inverse_transform(surface.lift(np.ones(9))) * 3), 1e-12)
