import io

import numpy as np
from django.test import SimpleTestCase

from apps.common.exceptions import DimensionMismatchError
from apps.partitions.partition import Partition, enumerate_partitions
from apps.qcore.context import QContext
from .measure import (
    MeasureWeights, inner_product, jackson_q2_converged, jackson_q2_integral, jackson_qinv2_integral, jackson_window,
    moment, moment_integral, norm_constant, point_mass, radial_integral, trace_side_integral, trace_weight,
)
from .radial_function import RadialFunction
from .serializers import RadialFunctionSerializer, write_radial_csv


def P(*parts):
    return Partition(parts)


class RadialFunctionTests(SimpleTestCase):

    def test_absent_keys_are_zero(self):
        f = RadialFunction(2, {(1, 0): 2.0})
        self.assertEqual(f(P(1, 0)), 2.0)
        self.assertEqual(f(P(0, 0)), 0)

    def test_zeros_are_not_stored(self):
        f = RadialFunction(1, {(0,): 1.0, (1,): 0.0})
        self.assertEqual(f.support, [P(0)])

    def test_arithmetic(self):
        f = RadialFunction(2, {(0, 0): 1.0, (1, 0): 2.0})
        g = RadialFunction(2, {(1, 0): -2.0, (1, 1): 1j})
        h = f + g
        self.assertEqual(h.support, [P(0, 0), P(1, 1)])
        self.assertEqual((3 * f)(P(1, 0)), 6.0)
        self.assertEqual((f - f).support, [])
        self.assertEqual((f / 2)(P(0, 0)), 0.5)

    def test_dimension_checks(self):
        with self.assertRaises(DimensionMismatchError):
            RadialFunction(2, {(1,): 1.0})
        with self.assertRaises(DimensionMismatchError):
            RadialFunction(1) + RadialFunction(2)

    def test_support_follows_window_order(self):
        f = RadialFunction.from_evaluator(lambda lam: 1 + lam.weight, 2, 3)
        self.assertEqual(f.support, enumerate_partitions(2, 3))
        self.assertEqual(f.max_weight, 3)
        self.assertEqual(f.restrict(1).support, [P(0, 0), P(1, 0)])

    def test_f0(self):
        self.assertEqual(RadialFunction.f0(3).support, [P(0, 0, 0)])


class MeasureTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)
        self.q = self.ctx.q

    def test_norm_constant(self):
        self.assertEqual(norm_constant(1, self.ctx), 1.0)
        self.assertAlmostEqual(norm_constant(2, self.ctx), 0.015625, places=16)
        ctx = QContext(q=0.8)
        self.assertAlmostEqual(norm_constant(2, ctx), 0.8 ** 6, places=15)

    def test_point_masses(self):
        q2 = self.ctx.q2
        self.assertAlmostEqual(point_mass(P(0), self.ctx), 1 - q2, places=15)
        self.assertAlmostEqual(point_mass(P(0, 0), self.ctx), (1 - q2) ** 4, places=15)
        for k in range(6):
            self.assertAlmostEqual(point_mass(P(k), self.ctx) / ((1 - q2) * self.q ** (-2 * k)), 1, places=14)

    def test_point_masses_positive_and_cached(self):
        weights = MeasureWeights(3, self.ctx)
        for lam in enumerate_partitions(3, 5):
            self.assertGreater(weights(lam), 0)
            self.assertAlmostEqual(weights(lam) / point_mass(lam, self.ctx), 1, places=14)

    def test_jackson_qinv2_examples(self):
        q2 = self.ctx.q2
        chi = RadialFunction.characteristic
        self.assertAlmostEqual(jackson_qinv2_integral(chi(P(0)), 1, self.ctx), 1 - q2, places=15)
        self.assertAlmostEqual(jackson_qinv2_integral(chi(P(1)), 1, self.ctx), (1 - q2) / q2, places=14)
        self.assertAlmostEqual(jackson_qinv2_integral(chi(P(0, 0)), 2, self.ctx), (1 - q2) ** 2 / q2, places=14)

    def test_jackson_qinv2_evaluator_matches_radial_function(self):
        f = RadialFunction.from_evaluator(lambda lam: 1.0 / (1 + lam.weight), 2, 4)
        direct = jackson_qinv2_integral(f, 2, self.ctx)

        def evaluator(u):
            weights = np.rint(np.log(u[:, 1]) / self.ctx.h) + np.rint(np.log(u[:, 0]) / self.ctx.h) - 1
            return 1.0 / (1 + weights)

        via_nodes = jackson_qinv2_integral(evaluator, 2, self.ctx, max_weight=4)
        self.assertAlmostEqual(direct, via_nodes, places=9)
        with self.assertRaises(ValueError):
            jackson_qinv2_integral(evaluator, 2, self.ctx)

    def test_jackson_q2_examples(self):
        q2 = self.ctx.q2
        estimate = jackson_q2_integral(lambda z: np.ones(len(z)), 1, self.ctx, 60)
        self.assertAlmostEqual(estimate.value, q2, places=14)
        self.assertLess(estimate.tail_bound, 1e-30)
        for k in range(5):
            estimate = jackson_q2_integral(lambda z: z[:, 0] ** k, 1, self.ctx, 60)
            self.assertAlmostEqual(estimate.value / moment(k, self.ctx), 1, places=13)
        estimate = jackson_q2_integral(lambda z: np.zeros(len(z)), 2, self.ctx, 10)
        self.assertEqual(estimate.value, 0)

    def test_jackson_window_tracks_the_tolerance(self):
        def ones(z):
            return np.ones(len(z))

        windows = {}
        for q in (0.5, 0.9):
            ctx = QContext(q=q)
            window = jackson_window(1, ctx, 1e-12)
            self.assertLessEqual(jackson_q2_integral(ones, 1, ctx, window).tail_bound, 1e-12 * ctx.q2)
            self.assertGreater(jackson_q2_integral(ones, 1, ctx, window - 1).tail_bound, 1e-12 * ctx.q2)
            windows[q] = window
        self.assertGreater(windows[0.9], 4 * windows[0.5])

    def test_converged_integral_meets_its_tail_bound(self):
        ctx = QContext(q=0.9)
        estimate = jackson_q2_converged(lambda z: z[:, 0] ** 3, 1, ctx, 1e-12)
        self.assertLessEqual(estimate.tail_bound, 1e-12 * abs(estimate.value))
        self.assertAlmostEqual(estimate.value / moment(3, ctx), 1, places=11)

        def vandermonde_squared(z):
            return (z[:, 0] - z[:, 1]) ** 2

        estimate = jackson_q2_converged(vandermonde_squared, 2, ctx, 1e-12, scale=1e-3)
        self.assertLessEqual(estimate.tail_bound, 1e-15)
        self.assertGreaterEqual(estimate.max_weight, jackson_window(2, ctx, 1e-12))

    def test_moment_expansion_is_exact(self):
        # Delta(z)^2 (1 + z_1 z_2) in two variables, as a dense coefficient array
        coefficients = np.zeros((4, 4))
        coefficients[2, 0] = coefficients[0, 2] = 1
        coefficients[1, 1] = -2
        coefficients[3, 1] = coefficients[1, 3] = 1
        coefficients[2, 2] = -2
        expected = moment_integral(coefficients, self.ctx)

        def integrand(z):
            return (z[:, 0] - z[:, 1]) ** 2 * (1 + z[:, 0] * z[:, 1])

        estimate = jackson_q2_integral(integrand, 2, self.ctx, 40)
        self.assertLess(abs(estimate.value - expected), 1e-12 * abs(expected))
        self.assertLess(estimate.tail_bound, 1e-12 * abs(expected))


class IntegralTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_f0_integral(self):
        for n in (1, 2, 3):
            expected = (1 - self.ctx.q2) ** (n * n)
            f0 = RadialFunction.f0(n)
            self.assertLess(abs(radial_integral(f0, self.ctx) - expected), 1e-14 * expected)
            self.assertLess(abs(inner_product(f0, f0, self.ctx) - expected), 1e-14 * expected)
            self.assertLess(abs(trace_side_integral(f0, self.ctx) - expected), 1e-14 * expected)

    def test_disjoint_characteristic_functions_are_orthogonal(self):
        chi = RadialFunction.characteristic
        self.assertEqual(inner_product(chi(P(1, 0)), chi(P(1, 1)), self.ctx), 0)

    def test_trace_weights_for_disk(self):
        for k in range(5):
            self.assertAlmostEqual(trace_weight(P(k), self.ctx), self.ctx.q ** (-2 * k), places=10)

    def test_trace_side_equals_jackson_side(self):
        rng = np.random.default_rng(11)
        for n in (1, 2, 3):
            window = enumerate_partitions(n, 6)
            values = rng.normal(size=len(window)) + 1j * rng.normal(size=len(window))
            f = RadialFunction.from_vector(n, window, values)
            for lam in window:
                chi = RadialFunction.characteristic(lam)
                jackson = radial_integral(chi, self.ctx).real
                self.assertLess(abs(trace_side_integral(chi, self.ctx).real - jackson), 1e-12 * jackson)
            lhs = trace_side_integral(f, self.ctx)
            rhs = radial_integral(f, self.ctx)
            scale = sum(abs(v) * point_mass(lam, self.ctx) for lam, v in f.items())
            self.assertLess(abs(lhs - rhs), 1e-12 * scale)

    def test_inner_product_is_hermitian_positive(self):
        f = RadialFunction(2, {(0, 0): 1 + 2j, (2, 1): -0.5j})
        g = RadialFunction(2, {(0, 0): 0.3, (2, 1): 4.0})
        self.assertAlmostEqual(inner_product(f, g, self.ctx), inner_product(g, f, self.ctx).conjugate(), places=12)
        self.assertGreater(inner_product(f, f, self.ctx).real, 0)


class RadialSerializerTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_payload_and_back(self):
        f = RadialFunction(2, {(0, 0): 1.0, (2, 1): 0.5 - 0.25j})
        data = RadialFunctionSerializer(RadialFunctionSerializer.payload(f, self.ctx)).data
        self.assertEqual(data['n'], 2)
        self.assertEqual(data['support'][1]['lambda'], [2, 1])
        serializer = RadialFunctionSerializer(data=data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.build().items(), f.items())

    def test_rejects_bad_input(self):
        bad_payloads = [
            {'n': 2, 'q': 1.5, 'support': []},
            {'n': 2, 'q': 0.5, 'support': [{'lambda': [1], 're': 1.0}]},
            {'n': 1, 'q': 0.5, 'support': [{'lambda': [1], 're': 1.0}, {'lambda': [1], 're': 2.0}]},
            {'n': 2, 'q': 0.5, 'support': [{'lambda': [0, 2], 're': 1.0}]},
        ]
        for payload in bad_payloads:
            self.assertFalse(RadialFunctionSerializer(data=payload).is_valid())

    def test_csv_export(self):
        stream = io.StringIO()
        write_radial_csv(RadialFunction(1, {(0,): 1.0, (2,): 2.0}), self.ctx, stream)
        rows = stream.getvalue().splitlines()
        self.assertEqual(rows[0], 'lambda,grid_point,weight,re,im')
        self.assertEqual(len(rows), 3)
        self.assertTrue(rows[2].startswith('2,16.0,12.0,2.0'))
