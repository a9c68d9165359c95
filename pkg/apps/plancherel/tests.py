import itertools
import math

import numpy as np
from django.test import SimpleTestCase

from apps.common.exceptions import PoleError, QuadratureResolutionWarning
from apps.partitions.partition import Partition, enumerate_partitions
from apps.qcore.context import QContext
from apps.radial.measure import norm_constant
from apps.radial.radial_function import RadialFunction
from apps.spherical.eigen import principal_eigen_tuple
from .cfunction import (
    big_sigma_weight, c_function, kappa, kappa_printed_constant, kappa_ratio, kappa_vandermonde_constant,
    sigma_weight,
)
from .quadrature import composite_simpson
from .serializers import SpectralFunctionSerializer
from .spectral import SpectralFunction
from .transform import (
    disk_transform, forward, intertwine_defect, inverse, inverse_printed, kappa_on_nodes,
    parseval_defect, parseval_ratio, roundtrip_defect, spectral_coordinates, spectral_inner_product,
)


def P(*parts):
    return Partition(parts)


def chi(*parts):
    return RadialFunction.characteristic(Partition(parts))


class CFunctionTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_c_at_zero(self):
        self.assertAlmostEqual(abs(c_function(0.0, self.ctx) - 1), 0.0, places=13)
        with self.assertRaises(PoleError):
            c_function(-0.5, self.ctx)

    def test_sigma_weight_matches_c_function(self):
        constant = self.ctx.h / (2 * math.pi * (1 - self.ctx.q2))
        for rho in (0.3, 0.9, 1.7):
            l = complex(-0.5, rho)
            expected = constant / (c_function(l, self.ctx) * c_function(l.conjugate(), self.ctx))
            self.assertAlmostEqual(expected.imag, 0.0, places=12)
            self.assertAlmostEqual(sigma_weight(rho, self.ctx) / expected.real, 1.0, places=10)

    def test_sigma_weight_vanishes_at_endpoints(self):
        self.assertEqual(sigma_weight(0.0, self.ctx), 0.0)
        self.assertAlmostEqual(sigma_weight(self.ctx.rho_max, self.ctx), 0.0, places=12)
        rule = composite_simpson(64, self.ctx)
        self.assertTrue(np.all(sigma_weight(rule.nodes[1:-1], self.ctx) > 0))

    def test_sigma_total_mass(self):
        rule = composite_simpson(2048, self.ctx)
        total = np.sum(rule.weights * sigma_weight(rule.nodes, self.ctx))
        self.assertAlmostEqual(total, 1 / (1 - self.ctx.q2), delta=1e-7)

    def test_kappa_one_variable(self):
        np.testing.assert_allclose(kappa(np.array([[0.2], [1.4]]), self.ctx), 1 - self.ctx.q2, rtol=1e-13)

    def test_kappa_factorisation(self):
        # kappa = (1-q^2)^2 q^3 (x_1 - x_2) for n = 2
        rng = np.random.default_rng(0)
        rho = np.sort(rng.uniform(0, self.ctx.rho_max, size=(50, 2)), axis=-1)[:, ::-1]
        ratios = kappa_ratio(rho, self.ctx)
        self.assertLess(np.std(ratios) / abs(np.mean(ratios)), 1e-8)
        self.assertAlmostEqual(np.mean(ratios), -(1 - 0.25) ** 2 * 0.125, places=12)
        self.assertEqual(kappa_printed_constant(2, self.ctx), norm_constant(2, self.ctx))

    def test_kappa_constant_closed_form(self):
        self.assertAlmostEqual(kappa_vandermonde_constant(2, self.ctx), -(1 - 0.25) ** 2 * 0.125, places=15)
        self.assertAlmostEqual(kappa_vandermonde_constant(1, self.ctx), 1 - 0.25, places=15)
        rng = np.random.default_rng(1)
        ratios = kappa_ratio(rng.uniform(0, self.ctx.rho_max, size=(20, 3)), self.ctx)
        expected = kappa_vandermonde_constant(3, self.ctx)
        self.assertLess(np.max(np.abs(ratios / expected - 1)), 1e-8)

    def test_kappa_vanishes_on_diagonal(self):
        self.assertAlmostEqual(kappa([0.8, 0.8], self.ctx), 0.0, places=14)
        self.assertAlmostEqual(kappa([1.1, 0.5, 1.1], self.ctx), 0.0, places=14)

    def test_big_sigma_weight(self):
        rho = np.array([0.4])
        self.assertAlmostEqual(
            big_sigma_weight(rho, self.ctx), (1 - self.ctx.q2) ** 2 * sigma_weight(0.4, self.ctx), places=14
        )
        self.assertAlmostEqual(big_sigma_weight([0.6, 0.6], self.ctx), 0.0, places=14)
        with self.assertRaises(ValueError):
            big_sigma_weight(rho, self.ctx, normalization='symmetric')


class QuadratureTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_rule_shape(self):
        rule = composite_simpson(16, self.ctx)
        self.assertEqual(rule.size, 17)
        self.assertAlmostEqual(rule.weights.sum(), self.ctx.rho_max, places=12)
        self.assertEqual(rule.nodes[-1], self.ctx.rho_max)
        with self.assertRaises(ValueError):
            composite_simpson(15, self.ctx)

    def test_cubics_are_exact(self):
        rule = composite_simpson(4, self.ctx)
        upper = self.ctx.rho_max
        self.assertAlmostEqual(rule.integrate(rule.nodes ** 3 - rule.nodes).real,
                               upper ** 4 / 4 - upper ** 2 / 2, places=12)

    def test_tensor_grid(self):
        rule = composite_simpson(4, self.ctx)
        self.assertEqual(rule.tensor_nodes(2).shape, (5, 5, 2))
        mask = rule.regular_mask(2)
        self.assertEqual(int(np.sum(~mask)), 5)
        self.assertTrue(np.all(rule.regular_mask(1)))
        self.assertAlmostEqual(np.sum(rule.tensor_weights(2)), self.ctx.rho_max ** 2, places=12)

    def test_kappa_on_nodes_matches_pointwise_kappa(self):
        rule = composite_simpson(8, self.ctx)
        np.testing.assert_allclose(kappa_on_nodes(2, rule, self.ctx), kappa(rule.tensor_nodes(2), self.ctx),
                                   atol=1e-14)


class DiskTransformTests(SimpleTestCase):
    """n = 1 with M = 2048 Simpson subintervals"""

    def setUp(self):
        self.ctx = QContext(q=0.5)
        self.rule = composite_simpson(2048, self.ctx)

    def test_f0_maps_to_one(self):
        fhat = forward(RadialFunction.f0(1), self.rule, self.ctx)
        self.assertLess(np.max(np.abs(fhat.values - 1)), 1e-12)

    def test_agrees_with_disk_transform(self):
        f = RadialFunction(1, {(0,): 1.0, (2,): -0.5, (3,): 2.0})
        expected = disk_transform(f, self.rule.nodes, self.ctx) / (1 - self.ctx.q2)
        self.assertLess(np.max(np.abs(forward(f, self.rule, self.ctx).values - expected)), 1e-12)

    def test_parseval(self):
        basis = [chi(k) for k in range(5)]
        for f, g in itertools.combinations_with_replacement(basis, 2):
            self.assertLess(parseval_defect(f, g, self.rule, self.ctx), 1e-6, msg=f"{f.support} {g.support}")

    def test_total_mass(self):
        ones = SpectralFunction.constant(1, self.rule)
        self.assertAlmostEqual(spectral_inner_product(ones, ones, self.rule, self.ctx).real,
                               1 - self.ctx.q2, delta=1e-7)

    def test_roundtrip(self):
        self.assertLess(roundtrip_defect(RadialFunction.f0(1), self.rule, self.ctx, max_weight=3), 1e-6)
        self.assertLess(roundtrip_defect(chi(1), self.rule, self.ctx, max_weight=3), 1e-6)
        recovered = inverse(SpectralFunction.constant(1, self.rule), self.rule, self.ctx, 3)
        self.assertLess(recovered.max_abs_difference(RadialFunction.f0(1)), 1e-6)

    def test_printed_inverse_does_not_invert(self):
        fhat = forward(RadialFunction.f0(1), self.rule, self.ctx)
        recovered = inverse_printed(fhat, self.rule, self.ctx, 0)
        # off by one power of kappa = 1 - q^2
        self.assertAlmostEqual(recovered(P(0)).real, 1 - self.ctx.q2, places=6)

    def test_intertwining(self):
        f = RadialFunction.from_vector(1, enumerate_partitions(1, 4), [1.0, -2.0, 0.5, 3.0, 1.5])
        for g in (RadialFunction.f0(1), f):
            self.assertLess(intertwine_defect(1, g, self.rule, self.ctx), 1e-8)

    def test_coarse_rule_warns(self):
        coarse = composite_simpson(2, self.ctx)
        with self.assertWarns(QuadratureResolutionWarning):
            inverse(SpectralFunction.constant(1, coarse), coarse, self.ctx, 1)


class MatrixBallTransformTests(SimpleTestCase):
    """n = 2 with M = 256 Simpson subintervals per axis"""

    def setUp(self):
        self.ctx = QContext(q=0.5)
        self.rule = composite_simpson(256, self.ctx)

    def test_f0_maps_to_one(self):
        fhat = forward(RadialFunction.f0(2), self.rule, self.ctx)
        self.assertLess(np.max(np.abs(fhat.values - 1)[fhat.regular]), 1e-12)
        self.assertTrue(np.all(fhat.values[fhat.singular] == 0))

    def test_transform_is_symmetric(self):
        fhat = forward(chi(2, 1) + chi(1, 0) * 0.5, self.rule, self.ctx)
        self.assertLess(fhat.symmetry_defect(), 1e-10)

    def test_parseval(self):
        basis = [RadialFunction.characteristic(lam) for lam in enumerate_partitions(2, 2)]
        for f, g in itertools.combinations_with_replacement(basis, 2):
            self.assertLess(parseval_defect(f, g, self.rule, self.ctx), 1e-5, msg=f"{f.support} {g.support}")

    def test_total_mass(self):
        ones = SpectralFunction.constant(2, self.rule)
        self.assertAlmostEqual(spectral_inner_product(ones, ones, self.rule, self.ctx).real,
                               (1 - self.ctx.q2) ** 4, delta=1e-5)

    def test_printed_normalization_ratio(self):
        # n! N^2 = 2 q^12
        expected = 2 * self.ctx.q ** 12
        for f in (RadialFunction.f0(2), chi(1, 0)):
            self.assertAlmostEqual(parseval_ratio(f, self.rule, self.ctx, 'printed') / expected, 1.0, places=4)
            self.assertAlmostEqual(parseval_ratio(f, self.rule, self.ctx), 1.0, places=4)

    def test_intertwining(self):
        for f in (RadialFunction.f0(2), chi(1, 0)):
            for k in (1, 2):
                self.assertLess(intertwine_defect(k, f, self.rule, self.ctx), 1e-8, msg=f"k={k}")

    def test_spectral_coordinates(self):
        rho = np.array([1.2, 0.3])
        z = spectral_coordinates(rho, self.ctx)
        self.assertAlmostEqual(z[0], principal_eigen_tuple(rho, 1, self.ctx), places=14)
        self.assertAlmostEqual(z[1], principal_eigen_tuple(rho, 2, self.ctx), places=14)
        np.testing.assert_allclose(spectral_coordinates(rho, self.ctx, divide_by_kappa=True),
                                   z / kappa(rho, self.ctx))


class TransformAcrossQTests(SimpleTestCase):
    """Coarse rules suffice: intertwining and symmetry hold node by node"""

    def random_radial(self, n, max_weight, seed=7):
        partitions = enumerate_partitions(n, max_weight)
        values = np.random.default_rng(seed).normal(size=len(partitions))
        return RadialFunction.from_vector(n, partitions, values)

    def test_intertwining_near_q_one(self):
        ctx = QContext(q=0.9)
        rule = composite_simpson(32, ctx)
        f = self.random_radial(2, 3)
        for k in (1, 2):
            self.assertLess(intertwine_defect(k, f, rule, ctx), 1e-8, msg=f"k={k}")

    def test_intertwining_three_variables(self):
        ctx = QContext(q=0.5)
        rule = composite_simpson(16, ctx)
        f = self.random_radial(3, 2)
        for k in (1, 2, 3):
            self.assertLess(intertwine_defect(k, f, rule, ctx), 1e-8, msg=f"k={k}")

    def test_weighted_symmetry_near_q_one(self):
        ctx = QContext(q=0.9)
        rule = composite_simpson(32, ctx)
        fhat = forward(self.random_radial(2, 3), rule, ctx)
        weights = np.abs(kappa_on_nodes(2, rule, ctx))
        self.assertLess(fhat.symmetry_defect(weights), 1e-10)

    def test_weighted_symmetry_detects_asymmetry(self):
        ctx = QContext(q=0.9)
        rule = composite_simpson(8, ctx)
        values = np.outer(np.arange(rule.size), np.ones(rule.size)).astype(complex)
        fhat = SpectralFunction(2, rule, values)
        weights = np.ones((rule.size, rule.size))
        self.assertAlmostEqual(fhat.symmetry_defect(weights), 1.0, places=12)
        self.assertEqual(SpectralFunction(2, rule, np.zeros_like(values)).symmetry_defect(weights), 0.0)


class SpectralSerializerTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)
        self.rule = composite_simpson(4, self.ctx)

    def test_round_trip(self):
        fhat = forward(chi(1, 0), self.rule, self.ctx)
        payload = SpectralFunctionSerializer(SpectralFunctionSerializer.payload(fhat, self.ctx)).data
        serializer = SpectralFunctionSerializer(data=payload)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        rebuilt = serializer.build()
        np.testing.assert_allclose(rebuilt.values, fhat.values)

    def test_rejects_odd_M_and_wrong_sizes(self):
        payload = SpectralFunctionSerializer.payload(SpectralFunction.constant(1, self.rule), self.ctx)
        self.assertFalse(SpectralFunctionSerializer(data={**payload, 'M': 3}).is_valid())
        self.assertFalse(SpectralFunctionSerializer(data={**payload, 'values': payload['values'][:-1]}).is_valid())
