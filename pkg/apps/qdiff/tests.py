import io

import numpy as np
from django.test import SimpleTestCase

from apps.common.exceptions import WindowOverflowError
from apps.partitions.partition import Partition, enumerate_partitions
from apps.qcore.context import QContext
from apps.qcore.series import phi_grid
from apps.radial.radial_function import RadialFunction
from apps.spherical.eigen import a_eigen, eigen_tuple, principal_eigen_bound
from apps.spherical.multivariate import spherical_radial
from .operators import (
    band_violations, commutator_defect, eigen_defect, isometry, isometry_inverse, krylov_rank, l_radial,
    norm_profile, operator_matrix, self_adjointness_defect,
)
from .serializers import GridOperatorSerializer, write_triplets_csv
from .stencil import apply_box, box_stencil, f0_stencil_coefficients, stencil_at


def P(*parts):
    return Partition(parts)


def random_radial(n, max_weight, seed):
    rng = np.random.default_rng(seed)
    partitions = enumerate_partitions(n, max_weight)
    return RadialFunction.from_vector(n, partitions, rng.normal(size=len(partitions)))


class StencilTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_boundary_coefficient_vanishes(self):
        self.assertEqual(box_stencil(1.0, self.ctx)[2], 0.0)
        self.assertEqual(stencil_at(0, self.ctx)[2], 0.0)
        with self.assertRaises(ValueError):
            box_stencil(0.0, self.ctx)

    def test_box_of_f0(self):
        # 1/(1-q^2) at u = 1 and -q^2/(1-q^2) at u = q^{-2}
        image = apply_box({(0,): 1.0}, 1, self.ctx)
        self.assertEqual(set(image), {(0,), (1,)})
        self.assertAlmostEqual(image[(0,)], 4 / 3, places=13)
        self.assertAlmostEqual(image[(1,)], -1 / 3, places=13)

    def test_f0_stencil_coefficients(self):
        lower, diagonal, upper = f0_stencil_coefficients(0, self.ctx)
        self.assertEqual(lower, 0.0)
        self.assertAlmostEqual(diagonal, 4 / 3, places=13)
        self.assertAlmostEqual(upper, -1 / 3, places=13)
        for k in range(1, 8):
            self.assertTrue(all(c != 0 for c in f0_stencil_coefficients(k, self.ctx)))

    def test_box_eigenfunctions_on_grid(self):
        parameters = [0.0, 1.0, 2.0, 3.0, 0.37, complex(-0.5, 1.1)]
        for q in (0.3, 0.5, 0.7, 0.9):
            ctx = QContext(q=q)
            for l in parameters:
                values = phi_grid(l, 20, ctx)
                image = apply_box({(k,): v for k, v in enumerate(values)}, 1, ctx)
                eigenvalue = a_eigen(l, ctx)
                for k in range(20):
                    c_minus, c_zero, c_plus = stencil_at(k, ctx)
                    scale = abs(c_minus * values[k + 1]) + abs(c_zero * values[k]) + abs(eigenvalue * values[k])
                    if k > 0:
                        scale += abs(c_plus * values[k - 1])
                    residual = abs(image.get((k,), 0) - eigenvalue * values[k])
                    self.assertLessEqual(residual, 1e-10 * scale, msg=f"q={q} l={l} k={k}")

    def test_axes_commute(self):
        rng = np.random.default_rng(3)
        F = {(a, b): rng.normal() for a in range(4) for b in range(4)}
        one_two = apply_box(apply_box(F, 1, self.ctx), 2, self.ctx)
        two_one = apply_box(apply_box(F, 2, self.ctx), 1, self.ctx)
        self.assertEqual(set(one_two), set(two_one))
        for key, value in one_two.items():
            self.assertAlmostEqual(value, two_one[key], delta=1e-12 * max(1.0, abs(value)))

    def test_axis_range(self):
        with self.assertRaises(ValueError):
            apply_box({(0, 0): 1.0}, 3, self.ctx)


class RadialOperatorTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_isometry_round_trip(self):
        f = random_radial(3, 3, seed=1)
        F = isometry(f, self.ctx)
        self.assertEqual(len(F), 6 * len(f))
        self.assertLess(isometry_inverse(F, 3, self.ctx).max_abs_difference(f), 1e-12 * f.max_abs())

    def test_one_variable_is_box(self):
        f = random_radial(1, 6, seed=2)
        image = l_radial(1, f, self.ctx)
        direct = apply_box({lam.parts: value for lam, value in f.items()}, 1, self.ctx)
        for lam, value in image.items():
            self.assertAlmostEqual(value, direct[lam.parts], delta=1e-12 * abs(value))

    def test_f0_image_support(self):
        image = l_radial(1, RadialFunction.f0(2), self.ctx)
        self.assertEqual(image.support, [P(0, 0), P(1, 0)])

    def test_eigenfunctions(self):
        window = 4
        cases = [
            (P(0, 0), (1, 2)), (P(1, 0), (1, 2)), (P(2, 1), (1, 2)), (P(3, 0), (1, 2)),
            (P(0, 0, 0), (1, 2, 3)), (P(1, 0, 0), (1, 2, 3)), (P(1, 1, 0), (1, 3)),
        ]
        for lam, ks in cases:
            phi = spherical_radial(lam, self.ctx, window + lam.n)
            reference = phi.restrict(window)
            for k in ks:
                image = l_radial(k, phi, self.ctx).restrict(window)
                expected = reference * eigen_tuple(lam, k, self.ctx)
                defect = image.max_abs_difference(expected) / (abs(eigen_tuple(lam, k, self.ctx)) + 1) / reference.max_abs()
                self.assertLess(defect, 1e-9, msg=f"{lam} k={k}")
                self.assertLess(eigen_defect(k, phi, eigen_tuple(lam, k, self.ctx), window, self.ctx), 1e-9)

    def test_eigenfunctions_at_small_q(self):
        ctx = QContext(q=0.3)
        window = 4
        for lam in enumerate_partitions(2, 4) + enumerate_partitions(3, 4):
            phi = spherical_radial(lam, ctx, window + lam.n)
            for k in range(1, lam.n + 1):
                defect = eigen_defect(k, phi, eigen_tuple(lam, k, ctx), window, ctx)
                self.assertLess(defect, 1e-9, msg=f"{lam} k={k}")

    def test_eigen_defect_sees_a_wrong_eigenvalue(self):
        lam = P(1, 0)
        phi = spherical_radial(lam, self.ctx, 6)
        eigenvalue = eigen_tuple(lam, 1, self.ctx)
        self.assertGreater(eigen_defect(1, phi, eigenvalue * (1 + 1e-6), 4, self.ctx), 1e-8)

    def test_window_overflow(self):
        with self.assertRaises(WindowOverflowError) as caught:
            l_radial(1, RadialFunction.characteristic(P(2, 0)), self.ctx, max_weight=2)
        self.assertIn(P(3, 0), caught.exception.overflow)
        with self.assertRaises(ValueError):
            l_radial(3, RadialFunction.f0(2), self.ctx)

    def test_commutation(self):
        for n in (2, 3):
            f = random_radial(n, 3, seed=n)
            for j in range(1, n + 1):
                for k in range(j + 1, n + 1):
                    self.assertLess(commutator_defect(j, k, f, self.ctx), 1e-10)


class GridOperatorTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_one_variable_matrix_is_tridiagonal(self):
        dense = operator_matrix(1, 1, 5, self.ctx).matrix.toarray()
        rows, cols = np.nonzero(dense)
        self.assertTrue(np.all(np.abs(rows - cols) <= 1))
        self.assertTrue(np.all(np.diag(dense, 1) != 0))
        self.assertTrue(np.all(np.diag(dense, -1) != 0))

    def test_band_rule(self):
        for n, window in ((2, 4), (3, 3)):
            for k in range(1, n + 1):
                op = operator_matrix(k, n, window, self.ctx)
                self.assertEqual(band_violations(op), [])
                self.assertTrue(op.truncated)

    def test_compressed_action_matches_operator(self):
        op = operator_matrix(1, 2, 4, self.ctx)
        chi = RadialFunction.characteristic(P(1, 0))
        self.assertLess(op.apply(chi).max_abs_difference(l_radial(1, chi, self.ctx)), 1e-12)

    def test_weighted_self_adjointness(self):
        for n, window in ((2, 5), (3, 3)):
            for k in range(1, n + 1):
                op = operator_matrix(k, n, window, self.ctx)
                self.assertLess(self_adjointness_defect(op, self.ctx), 1e-11, msg=f"n={n} k={k}")

    def test_cyclicity_of_f0(self):
        self.assertEqual(krylov_rank(3, 2, 3, self.ctx), 6)
        self.assertEqual(krylov_rank(3, 1, 3, self.ctx), 4)

    def test_norm_profile_is_monotone_and_bounded(self):
        for n, k, windows in ((1, 1, (4, 8, 16)), (2, 1, (2, 4, 6)), (2, 2, (2, 4, 6))):
            profile = norm_profile(k, n, windows, self.ctx)
            norms = [entry.norm for entry in profile]
            self.assertEqual([entry.max_weight for entry in profile], list(windows))
            self.assertTrue(all(b >= a * (1 - 1e-12) for a, b in zip(norms, norms[1:])))
            self.assertLessEqual(norms[-1], principal_eigen_bound(k, n, self.ctx) * (1 + 1e-9))

    def test_triplet_export(self):
        op = operator_matrix(1, 2, 2, self.ctx)
        data = GridOperatorSerializer(GridOperatorSerializer.payload(op, self.ctx)).data
        self.assertEqual(len(data['entries']), op.matrix.nnz)
        self.assertEqual(data['entries'][0]['row'], list(op.triplets()[0][0]))
        stream = io.StringIO()
        write_triplets_csv(op, stream)
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[0], 'row,col,re,im')
        self.assertEqual(len(lines), op.matrix.nnz + 1)
