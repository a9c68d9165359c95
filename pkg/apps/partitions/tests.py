import itertools

import numpy as np
from django.test import SimpleTestCase

from apps.common.exceptions import CoincidentCoordinatesError, DimensionMismatchError
from apps.qcore.context import QContext
from .coordinates import corner_point, grid_point, partition_from_sigma_point, sigma_point
from .partition import (
    Partition, count_partitions, delta_staircase, dominance_leq, enumerate_partitions,
    eta_shift, fundamental_weight, hat_weight,
)
from .serializers import PartitionField
from .symmetric import (
    complete_homogeneous, elementary, monomial, schur, schur_jacobi_trudi, sym_eval, vandermonde,
)


def P(*parts):
    return Partition(parts)


class PartitionTests(SimpleTestCase):

    def test_validation(self):
        for bad in ((), (1, 2), (-1, 0), (1.5, 0)):
            with self.assertRaises(ValueError):
                Partition(bad)

    def test_weight_and_exponents(self):
        lam = P(3, 1, 0)
        self.assertEqual(lam.weight, 4)
        self.assertEqual(lam.n, 3)
        self.assertEqual(lam.exponents(), (5, 2, 0))
        self.assertEqual(Partition.from_exponents((5, 2, 0)), lam)

    def test_immutable_and_hashable(self):
        lam = P(2, 1)
        with self.assertRaises(AttributeError):
            lam.parts = (3, 0)
        self.assertEqual(len({P(2, 1), P(2, 1), P(2, 0)}), 2)

    def test_staircase(self):
        self.assertEqual(delta_staircase(3), P(2, 1, 0))
        self.assertEqual(delta_staircase(1), P(0))


class EnumerationTests(SimpleTestCase):

    def test_small_windows(self):
        self.assertEqual(enumerate_partitions(1, 3), [P(0), P(1), P(2), P(3)])
        self.assertEqual(enumerate_partitions(2, 2), [P(0, 0), P(1, 0), P(2, 0), P(1, 1)])
        self.assertEqual(enumerate_partitions(3, 1), [P(0, 0, 0), P(1, 0, 0)])

    def test_counts_match_recurrence(self):
        for n in (1, 2, 3, 4):
            for w in range(9):
                window = enumerate_partitions(n, w)
                expected = sum(count_partitions(k, n) for k in range(w + 1))
                self.assertEqual(len(window), expected)
                self.assertEqual(len(set(window)), expected)

    def test_window_of_size_three_in_two_parts(self):
        self.assertEqual(len(enumerate_partitions(2, 3)), 6)

    def test_ordering(self):
        window = enumerate_partitions(3, 6)
        weights = [lam.weight for lam in window]
        self.assertEqual(weights, sorted(weights))
        for a, b in zip(window, window[1:]):
            if a.weight == b.weight:
                self.assertGreater(a.parts, b.parts)


class DominanceTests(SimpleTestCase):

    def test_examples(self):
        self.assertTrue(dominance_leq(P(1, 1), P(2, 0)))
        self.assertFalse(dominance_leq(P(2, 0), P(1, 1)))
        self.assertFalse(dominance_leq(P(3, 0, 0), P(2, 2, 1)))
        self.assertFalse(dominance_leq(P(2, 2, 1), P(3, 0, 0)))

    def test_unequal_weights_compare_literally(self):
        self.assertTrue(dominance_leq(P(1, 0), P(2, 1)))

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            dominance_leq(P(1, 0), P(1, 0, 0))

    def test_partial_order_axioms(self):
        window = enumerate_partitions(3, 4)
        for a in window:
            self.assertTrue(dominance_leq(a, a))
        for a, b in itertools.product(window, repeat=2):
            if a != b and dominance_leq(a, b):
                self.assertFalse(dominance_leq(b, a))
        for a, b, c in itertools.product(window, repeat=3):
            if dominance_leq(a, b) and dominance_leq(b, c):
                self.assertTrue(dominance_leq(a, c))


class WeightMapTests(SimpleTestCase):

    def test_hat_weight(self):
        self.assertEqual(hat_weight(P(2, 1)), (1, 2, 1))
        self.assertEqual(hat_weight(P(3)), (6,))
        self.assertEqual(hat_weight(P(1, 1, 1)), (0, 0, 2, 0, 0))

    def test_fundamental_weights(self):
        self.assertEqual(fundamental_weight(1, 3), (1, 0, 0, 0, 1))
        self.assertEqual(fundamental_weight(3, 3), (0, 0, 2, 0, 0))
        with self.assertRaises(ValueError):
            fundamental_weight(4, 3)

    def test_eta_shift(self):
        self.assertEqual(eta_shift((2, 1, 0)), (-0.5, -0.5, -0.5))
        self.assertEqual(eta_shift((4,)), (3.5,))


class CoordinateTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)
        self.q = self.ctx.q

    def test_grid_points(self):
        q = self.q
        np.testing.assert_allclose(grid_point(P(0, 0), self.ctx), [q ** -2, 1.0])
        np.testing.assert_allclose(grid_point(P(4), self.ctx), [q ** -8])
        np.testing.assert_allclose(grid_point(P(1, 1, 0), self.ctx), [q ** -6, q ** -4, 1.0])
        np.testing.assert_allclose(corner_point(3, self.ctx), [q ** -4, q ** -2, 1.0])

    def test_grid_points_strictly_decreasing(self):
        for lam in enumerate_partitions(4, 5):
            u = grid_point(lam, self.ctx)
            self.assertTrue(np.all(np.diff(u) < 0))
            self.assertGreaterEqual(u[-1], 1.0)

    def test_sigma_points(self):
        q = self.q
        np.testing.assert_allclose(sigma_point(P(0), self.ctx), [1.0])
        np.testing.assert_allclose(sigma_point(P(0, 0), self.ctx), [1 + q ** -2, 1.0], rtol=1e-15)

    def test_sigma_point_injective_on_window(self):
        for n in (2, 3):
            points = {tuple(np.round(sigma_point(lam, self.ctx), 6)) for lam in enumerate_partitions(n, 4)}
            self.assertEqual(len(points), len(enumerate_partitions(n, 4)))

    def test_sigma_point_inverse(self):
        for lam in enumerate_partitions(3, 5):
            self.assertEqual(partition_from_sigma_point(sigma_point(lam, self.ctx), 3, self.ctx), lam)

    def test_sigma_point_inverse_rejects_off_grid(self):
        with self.assertRaises(ValueError):
            partition_from_sigma_point([3.0, 1.7], 2, self.ctx)


class SymmetricPolynomialTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)
        self.z = np.array([1.3, 0.4])

    def test_examples(self):
        z1, z2 = self.z
        self.assertAlmostEqual(sym_eval('schur', self.z, lam=P(1, 0)), z1 + z2, places=14)
        self.assertAlmostEqual(sym_eval('vandermonde', [4.0, 1.0]), 3.0, places=15)
        self.assertAlmostEqual(sym_eval('monomial', self.z, lam=P(2, 1)), z1 ** 2 * z2 + z2 ** 2 * z1, places=14)
        self.assertAlmostEqual(sym_eval('elementary', self.z, k=2), z1 * z2, places=15)

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            sym_eval('zonal', self.z, lam=P(1, 0))

    def test_length_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            monomial(P(1, 0, 0), self.z)

    def test_coincident_coordinates(self):
        with self.assertRaises(CoincidentCoordinatesError):
            schur(P(1, 0), [0.7, 0.7])

    def test_jacobi_trudi_agrees_with_bialternant(self):
        rng = np.random.default_rng(3)
        z = rng.uniform(0.1, 2.0, size=(20, 3))
        for lam in enumerate_partitions(3, 4):
            np.testing.assert_allclose(schur_jacobi_trudi(lam, z), schur(lam, z), rtol=1e-10)

    def test_jacobi_trudi_at_repeated_coordinates(self):
        # s_(1,0)(t, t) = 2t, s_(2,0)(t, t) = 3t^2
        self.assertAlmostEqual(schur_jacobi_trudi(P(1, 0), [0.6, 0.6]), 1.2, places=14)
        self.assertAlmostEqual(schur_jacobi_trudi(P(2, 0), [0.6, 0.6]), 3 * 0.36, places=14)

    def test_complete_homogeneous(self):
        z1, z2 = self.z
        self.assertAlmostEqual(complete_homogeneous(2, self.z), z1 ** 2 + z1 * z2 + z2 ** 2, places=14)
        self.assertEqual(complete_homogeneous(-1, self.z), 0)

    def test_elementary_rejects_bad_k(self):
        with self.assertRaises(ValueError):
            elementary(3, self.z)

    def test_schur_specialization(self):
        for n in (2, 3):
            base = grid_point(Partition.zero(n), self.ctx)
            for lam in enumerate_partitions(n, 6):
                expected = vandermonde(grid_point(lam, self.ctx)) / vandermonde(base)
                self.assertLess(abs(schur(lam, base) - expected), 1e-10 * abs(expected))

    def test_vectorised_shapes(self):
        z = np.ones((4, 5, 2)) * np.array([2.0, 1.0])
        self.assertEqual(schur(P(2, 1), z).shape, (4, 5))
        self.assertEqual(monomial(P(2, 1), z).shape, (4, 5))


class PartitionFieldTests(SimpleTestCase):

    def test_round_trip(self):
        field = PartitionField()
        self.assertEqual(field.to_internal_value([2, 1, 0]), P(2, 1, 0))
        self.assertEqual(field.to_representation(P(2, 1, 0)), [2, 1, 0])

    def test_rejects_increasing_parts(self):
        from rest_framework import serializers
        with self.assertRaises(serializers.ValidationError):
            PartitionField().to_internal_value([0, 1])
