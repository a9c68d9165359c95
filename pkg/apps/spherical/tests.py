import math
from functools import partial

import numpy as np
from numpy.polynomial import polynomial as npoly
from django.test import SimpleTestCase

from apps.common.exceptions import CoincidentCoordinatesError
from apps.partitions.partition import Partition, dominance_leq
from apps.partitions.symmetric import monomial, vandermonde
from apps.qcore.context import QContext
from apps.qcore.series import phi_one
from apps.radial.measure import jackson_q2_converged, jackson_q2_integral
from .eigen import (
    a_eigen, a_principal, eigen_tuple, principal_eigen_bound, principal_eigen_tuple, psi, wres_check,
)
from .gram_schmidt import gram_schmidt_P, lower_basis, monomial_expansion, poly_eval
from .jacobi import (
    evaluate_jacobi, lanczos_coefficients, little_q_jacobi, phi_leading_coefficient, recurrence_coefficients,
)
from .multivariate import (
    SphericalParameter, _schur_expansion, grid_values, multivar_P, phi_multi,
    proportionality_constant, proportionality_ratios, spherical_radial,
)


def P(*parts):
    return Partition(parts)


class EigenvalueTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_a_is_symmetric_under_reflection(self):
        for l in (0.3, 2.0, 4.5):
            self.assertAlmostEqual(a_eigen(l, self.ctx), a_eigen(-1 - l, self.ctx), places=10)
        self.assertEqual(a_eigen(0.0, self.ctx), 0.0)

    def test_principal_closed_form(self):
        for rho in (0.0, 0.7, self.ctx.rho_max):
            value = a_eigen(complex(-0.5, rho), self.ctx)
            self.assertAlmostEqual(value.real, float(a_principal(rho, self.ctx)), places=12)
            self.assertAlmostEqual(value.imag, 0.0, places=12)

    def test_eigen_tuple_of_zero_partition(self):
        # exponents (1, 0): a(1) = (1 - 4)(1 - 1/16) / (3/4)^2 = -5, a(0) = 0
        self.assertAlmostEqual(eigen_tuple(P(0, 0), 1, self.ctx), -5.0, places=12)
        self.assertAlmostEqual(eigen_tuple(P(0, 0), 2, self.ctx), 0.0, places=12)
        with self.assertRaises(ValueError):
            eigen_tuple(P(0, 0), 3, self.ctx)

    def test_principal_eigen_tuple_is_bounded(self):
        rng = np.random.default_rng(7)
        rho = rng.uniform(0, self.ctx.rho_max, size=(200, 3))
        for k in (1, 2, 3):
            values = principal_eigen_tuple(rho, k, self.ctx)
            self.assertTrue(np.all(values > 0))
            self.assertLessEqual(values.max(), principal_eigen_bound(k, 3, self.ctx) + 1e-12)

    def test_psi_on_zero_weight(self):
        # every shifted coordinate is -1/2, a(-1/2) = 1/(1+q)^2
        a = 1 / 1.5 ** 2
        self.assertAlmostEqual(psi((0, 0, 0), 1, self.ctx), 3 * a, places=12)
        self.assertAlmostEqual(psi((0, 0, 0), 3, self.ctx), a ** 3, places=12)

    def test_psi_is_invariant_under_permutations_and_sign_changes(self):
        for parts in ((2, 1), (3, 0), (2, 1, 0), (1, -2, 4)):
            for k in range(1, len(parts) + 1):
                self.assertTrue(wres_check(parts, k, self.ctx))


class LittleQJacobiTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_low_degrees(self):
        np.testing.assert_allclose(little_q_jacobi(0, self.ctx), [1.0])
        q2 = self.ctx.q2
        np.testing.assert_allclose(little_q_jacobi(1, self.ctx), [-q2 / (1 + q2), 1.0], atol=1e-15)
        self.assertAlmostEqual(phi_leading_coefficient(1, self.ctx), 1 + q2, places=13)
        self.assertAlmostEqual(
            phi_leading_coefficient(2, self.ctx),
            (1 - q2 ** 3) * (1 - q2 ** 4) / ((1 - q2) * (1 - q2 ** 2)), places=13,
        )

    def test_hankel_cross_check(self):
        for m in range(1, 4):
            closed_form = little_q_jacobi(m, self.ctx)
            hankel = little_q_jacobi(m, self.ctx, method='hankel')
            self.assertLess(np.max(np.abs(closed_form - hankel)), 1e-9, msg=f"degree {m}")

    def test_recurrence_matches_lanczos_on_jackson_nodes(self):
        for q in (0.3, 0.5, 0.9):
            ctx = QContext(q=q)
            alpha, beta = recurrence_coefficients(6, ctx)
            alpha_l, beta_l = lanczos_coefficients(6, ctx)
            np.testing.assert_allclose(alpha, alpha_l, rtol=0, atol=1e-12 * ctx.q2)
            np.testing.assert_allclose(np.sqrt(beta[1:]), np.sqrt(beta_l[1:]), rtol=0, atol=1e-12 * ctx.q2)
            self.assertAlmostEqual(beta[0] / beta_l[0], 1.0, places=12)

    def test_recurrence_values_match_coefficients(self):
        z = np.array([1e-4, 0.03, 0.2, 0.25, 0.9])
        for m in range(7):
            np.testing.assert_allclose(
                evaluate_jacobi(m, z, self.ctx), npoly.polyval(z, little_q_jacobi(m, self.ctx)),
                rtol=1e-12, atol=1e-15,
            )

    def test_constant_term_at_degree_five(self):
        # -6.4167e-10 at q = 1/2, from an extended-precision moment solve
        self.assertAlmostEqual(little_q_jacobi(5, self.ctx)[0] / -6.4167e-10, 1.0, places=3)

    def test_roots_lie_in_orthogonality_interval(self):
        for m in range(1, 6):
            roots = npoly.polyroots(little_q_jacobi(m, self.ctx))
            self.assertTrue(np.all(np.abs(roots.imag) < 1e-9))
            self.assertTrue(np.all(roots.real > 0))
            self.assertTrue(np.all(roots.real <= self.ctx.q2 * (1 + 1e-9)))

    def test_orthogonality(self):
        for q in (0.3, 0.5, 0.9):
            ctx = QContext(q=q)

            def pairing(m, k, scale=None):
                return jackson_q2_converged(
                    lambda z: evaluate_jacobi(m, z[:, 0], ctx) * evaluate_jacobi(k, z[:, 0], ctx),
                    1, ctx, 1e-13, scale,
                ).value

            norms = [pairing(m, m) for m in range(6)]
            for m in range(1, 6):
                self.assertGreater(norms[m], 0)
                for k in range(m):
                    scale = math.sqrt(norms[m] * norms[k])
                    self.assertLess(abs(pairing(m, k, scale)), 1e-10 * scale, msg=f"q={q} m={m} k={k}")

    def test_phi_is_proportional_to_P(self):
        # P from the Lanczos recurrence, independent of the 3phi2 and of the closed forms;
        # degree 5 stays on the grid, where Phi_m comes from the box recurrence
        q = self.ctx.q
        for m, points in ((3, (0.3, 2.5, q ** -4)), (5, (1.0, q ** -2, q ** -4, q ** -6))):
            c = phi_leading_coefficient(m, self.ctx)
            for u in points:
                self.assertAlmostEqual(
                    phi_one(m, u, self.ctx).real / (c * evaluate_jacobi(m, u, self.ctx, method='lanczos')),
                    1.0, places=9, msg=f"m={m} u={u}",
                )

    def test_rejects_bad_arguments(self):
        with self.assertRaises(ValueError):
            little_q_jacobi(-1, self.ctx)
        with self.assertRaises(ValueError):
            little_q_jacobi(2, self.ctx, method='stieltjes')
        with self.assertRaises(ValueError):
            evaluate_jacobi(2, 0.5, self.ctx, method='hankel')


class MultivariateTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_parameter_validation(self):
        with self.assertRaises(CoincidentCoordinatesError):
            SphericalParameter([1.0, 1.0])
        with self.assertRaises(ValueError):
            SphericalParameter.principal([0.5, 0.9], self.ctx)
        with self.assertRaises(ValueError):
            SphericalParameter.principal([self.ctx.rho_max + 0.1, 0.0], self.ctx)
        l = SphericalParameter.principal([1.0, 0.2], self.ctx)
        self.assertEqual(l.values, (complex(-0.5, 1.0), complex(-0.5, 0.2)))

    def test_zero_partition_gives_constant(self):
        # det[Phi_1(u_i), 1] / Delta = (1 + q^2)
        l = SphericalParameter.from_partition(P(0, 0))
        self.assertAlmostEqual(phi_multi(l, [3.0, 0.5], self.ctx).real, 1.25, places=12)
        self.assertAlmostEqual(phi_multi(l, [16.0, 1.0], self.ctx).real, 1.25, places=12)
        with self.assertRaises(CoincidentCoordinatesError):
            phi_multi(l, [2.0, 2.0], self.ctx)

    def test_principal_series_values_are_real(self):
        l = SphericalParameter.principal([2.1, 0.4], self.ctx)
        for u in ([3.0, 0.5], [16.0, 4.0], [7.5, 1.2]):
            self.assertLess(abs(phi_multi(l, u, self.ctx).imag), 1e-12)

    def test_zero_partition_polynomial_is_one(self):
        z = np.array([[0.2, 0.05, 0.01], [1.4, 0.9, 0.3]])
        np.testing.assert_allclose(multivar_P(P(0, 0, 0), z, self.ctx), 1.0, rtol=1e-10)

    def test_series_path_matches_polynomial_path(self):
        lam = P(1, 0)
        u = np.array([2.5, 0.7])
        series = phi_multi(SphericalParameter.from_partition(lam), u, self.ctx)
        polynomial = proportionality_constant(lam, self.ctx) * multivar_P(lam, u, self.ctx)
        self.assertAlmostEqual(series.real / polynomial, 1.0, places=10)

    def test_grid_values_match_pointwise_evaluation(self):
        l = SphericalParameter.principal([0.9, 0.3], self.ctx)
        mu = [P(0, 0), P(2, 1), P(3, 0)]
        table = grid_values(l, mu, self.ctx)
        for lam, value in zip(mu, table):
            u = self.ctx.q ** (-2.0 * np.array(lam.exponents()))
            self.assertAlmostEqual(abs(value - phi_multi(l, u, self.ctx)), 0.0, places=10)

    def test_spherical_radial_window(self):
        f = spherical_radial(P(1, 0), self.ctx, 4)
        self.assertEqual(f.max_weight, 4)
        self.assertEqual(len(f), 9)

    def test_proportionality(self):
        for lam in (P(0, 0), P(1, 0), P(2, 1), P(1, 0, 0)):
            ratios, spread = proportionality_ratios(lam, self.ctx, 4)
            self.assertLess(spread, 1e-9, msg=str(lam))
            self.assertAlmostEqual(np.mean(ratios) / proportionality_constant(lam, self.ctx), 1.0, places=9)

    def test_one_variable_reduces_to_jacobi(self):
        z = np.array([[0.1], [0.7], [1.9]])
        np.testing.assert_allclose(multivar_P(P(3), z, self.ctx), evaluate_jacobi(3, z[:, 0], self.ctx))

    def test_schur_expansion_agrees_with_determinant(self):
        lam = P(2, 1, 0)
        z = np.array([1.3, 0.4, 0.1])
        direct = multivar_P(lam, z, self.ctx)
        expanded = _schur_expansion(lam, z[np.newaxis], self.ctx)[0]
        self.assertAlmostEqual(direct / expanded, 1.0, places=10)

    def test_coincident_points_are_continuous(self):
        lam = P(2, 0)
        at = multivar_P(lam, [0.9, 0.9], self.ctx)
        near = multivar_P(lam, [0.9, 0.9 + 1e-5], self.ctx)
        self.assertTrue(math.isfinite(at))
        self.assertAlmostEqual(at, near, places=3)

    def assert_orthogonal_to_lower_monomials(self, lam, ctx):
        def pairing(f, g, scale=None):
            return jackson_q2_converged(
                lambda z: f(z) * g(z) * vandermonde(z) ** 2, lam.n, ctx, 1e-12, scale,
            ).value

        p = partial(multivar_P, lam, ctx=ctx)
        p_norm = pairing(p, p)
        self.assertGreater(p_norm, 0)
        for eta in lower_basis(lam):
            m = partial(monomial, eta)
            scale = math.sqrt(p_norm * pairing(m, m))
            self.assertLess(abs(pairing(p, m, scale)), 1e-10 * scale, msg=f"q={ctx.q} {lam} {eta}")

    def test_orthogonality_against_vandermonde_squared(self):
        lams = [P(0, 0), P(1, 0), P(1, 1), P(2, 0)]

        def pairing(a, b):
            return jackson_q2_integral(
                lambda z: multivar_P(a, z, self.ctx) * multivar_P(b, z, self.ctx) * vandermonde(z) ** 2,
                2, self.ctx, max_weight=35,
            ).value

        norms = {lam: pairing(lam, lam) for lam in lams}
        for i, a in enumerate(lams):
            self.assertGreater(norms[a], 0)
            for b in lams[i + 1:]:
                self.assertLess(abs(pairing(a, b)), 1e-10 * math.sqrt(norms[a] * norms[b]), msg=f"{a} {b}")

    def test_orthogonal_to_lower_monomials(self):
        for lam in (P(2, 1), P(3, 0), P(1, 1, 1), P(2, 1, 0), P(3, 0, 0)):
            self.assert_orthogonal_to_lower_monomials(lam, self.ctx)

    def test_orthogonal_to_lower_monomials_across_q(self):
        for q in (0.3, 0.9):
            ctx = QContext(q=q)
            for lam in (P(1, 0), P(2, 1), P(3, 0)):
                self.assert_orthogonal_to_lower_monomials(lam, ctx)
            self.assert_orthogonal_to_lower_monomials(P(3, 0, 0), ctx)


class GramSchmidtOracleTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_lower_basis(self):
        self.assertEqual(set(lower_basis(P(2, 0))), {P(0, 0), P(1, 0), P(1, 1)})
        self.assertEqual(lower_basis(P(0, 0)), [])

    def test_one_variable(self):
        result = gram_schmidt_P(P(1), self.ctx)
        np.testing.assert_allclose(result.array, little_q_jacobi(1, self.ctx), atol=1e-14)

    def test_agrees_with_determinant_construction(self):
        for lam in (P(1, 0), P(2, 0), P(1, 1), P(2, 1), P(1, 0, 0), P(1, 1, 0), P(2, 0, 0)):
            oracle = gram_schmidt_P(lam, self.ctx)
            rng = np.random.default_rng(lam.weight)
            z = rng.uniform(0.05, 1.5, size=(20, lam.n))
            expected = poly_eval(oracle.array, z)
            actual = multivar_P(lam, z, self.ctx)
            self.assertLess(np.max(np.abs(actual - expected)), 1e-9 * np.max(np.abs(expected)), msg=str(lam))

    def test_monomial_expansion_is_monic_and_triangular(self):
        for lam in (P(2, 0), P(2, 1), P(1, 1, 0), P(2, 0, 0)):
            coefficients = monomial_expansion(
                lambda z: multivar_P(lam, z, self.ctx), lam.n, lam[0], lam.weight,
            )
            oracle = gram_schmidt_P(lam, self.ctx)
            self.assertAlmostEqual(coefficients[lam.parts], 1.0, places=9)
            for eta, d in oracle.coefficients.items():
                self.assertAlmostEqual(coefficients[eta.parts], d, places=9, msg=f"{lam} {eta}")
            for alpha, c in coefficients.items():
                if abs(c) > 1e-9:
                    self.assertTrue(dominance_leq(Partition(sorted(alpha, reverse=True)), lam))
