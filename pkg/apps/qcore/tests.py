import math

from django.test import SimpleTestCase

from apps.common.exceptions import ConvergenceError, PoleError
from .context import QContext
from .series import grid_index, phi_grid, phi_one, phi_series
from .special import compensated_sum, qgamma, qpochhammer


class QContextTests(SimpleTestCase):

    def test_rejects_q_outside_unit_interval(self):
        for bad in (0.0, 1.0, -0.3, 1.7):
            with self.assertRaises(ValueError):
                QContext(q=bad)

    def test_rejects_nonpositive_tolerances(self):
        with self.assertRaises(ValueError):
            QContext(q=0.5, series_tol=0.0)
        with self.assertRaises(ValueError):
            QContext(q=0.5, max_terms=0)

    def test_h_is_minus_two_log_q(self):
        ctx = QContext(q=0.5)
        self.assertAlmostEqual(ctx.h, 2 * math.log(2), places=15)
        self.assertAlmostEqual(ctx.rho_max, math.pi / ctx.h, places=15)

    def test_from_settings_applies_overrides(self):
        ctx = QContext.from_settings(q=0.3, max_terms=None)
        self.assertEqual(ctx.q, 0.3)
        self.assertEqual(ctx.max_terms, 500)


class QPochhammerTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_empty_product_is_one(self):
        self.assertEqual(qpochhammer(3.7 - 2j, 0.25, 0), 1)

    def test_zero_argument_gives_one(self):
        for k in (0, 1, 5, 12):
            self.assertEqual(qpochhammer(0, 0.25, k), 1)

    def test_two_factor_unrolling(self):
        q2 = self.ctx.q2
        self.assertAlmostEqual(qpochhammer(q2, q2, 2), (1 - q2) * (1 - q2 ** 2), places=15)

    def test_splitting_rule(self):
        base = 0.7
        for a in (0.3, -1.2 + 0.4j, 2.5j):
            for j, k in ((0, 3), (2, 5), (4, 4)):
                whole = qpochhammer(a, base, j + k)
                split = qpochhammer(a, base, j) * qpochhammer(a * base ** j, base, k)
                self.assertLess(abs(whole - split), 1e-13 * max(1.0, abs(whole)))

    def test_infinite_product_matches_long_finite_product(self):
        value = qpochhammer(0.4 + 0.1j, 0.25, math.inf, self.ctx)
        finite = qpochhammer(0.4 + 0.1j, 0.25, 60)
        self.assertLess(abs(value - finite), 1e-15)

    def test_array_argument(self):
        values = qpochhammer([0.0, 0.5], 0.5, 3)
        self.assertEqual(values.shape, (2,))
        self.assertAlmostEqual(values[1].real, 0.5 * 0.75 * 0.875, places=15)

    def test_bad_base_and_length(self):
        with self.assertRaises(ValueError):
            qpochhammer(0.5, 1.0, 3)
        with self.assertRaises(ValueError):
            qpochhammer(0.5, 0.5, -1)
        with self.assertRaises(ValueError):
            qpochhammer(0.5, 0.5, 2.5)

    def test_infinite_product_signals_truncation(self):
        ctx = QContext(q=0.99, max_terms=10)
        with self.assertRaises(ConvergenceError):
            qpochhammer(0.5, 0.98, math.inf, ctx)


class QGammaTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_values_at_one_and_two(self):
        self.assertAlmostEqual(qgamma(1, self.ctx), 1, places=14)
        self.assertAlmostEqual(qgamma(2, self.ctx), 1, places=14)

    def test_poles(self):
        for x in (0, -1, -3):
            with self.assertRaises(PoleError):
                qgamma(x, self.ctx)

    def test_functional_equation(self):
        q2 = self.ctx.q2
        for x in (0.3 + 0.2j, 1.7, -0.5 + 1.1j):
            bracket = (1 - q2 ** x) / (1 - q2)
            lhs = qgamma(x + 1, self.ctx)
            rhs = bracket * qgamma(x, self.ctx)
            self.assertLess(abs(lhs - rhs), 1e-13 * abs(lhs))


class PhiTests(SimpleTestCase):

    def setUp(self):
        self.ctx = QContext(q=0.5)

    def test_value_at_one(self):
        for l in (0, 1, 2.5, -0.5 + 0.8j, 0.3 - 0.2j):
            self.assertAlmostEqual(phi_one(l, 1.0, self.ctx), 1, places=14)

    def test_phi_zero_is_constant(self):
        for u in (1.0, 2.3, 16.0, 0.1):
            self.assertAlmostEqual(phi_one(0, u, self.ctx), 1, places=14)

    def test_phi_one_closed_form(self):
        q2 = self.ctx.q2
        for u in (1.0, 2.7, 4.0, 64.0, 0.35):
            expected = (1 + q2) * u - q2
            self.assertLess(abs(phi_one(1, u, self.ctx) - expected), 1e-13 * abs(expected))

    def test_closed_form_on_long_grid(self):
        ctx = QContext(q=0.9)
        values = phi_grid(1, 20, ctx)
        for k in range(21):
            u = ctx.q ** (-2 * k)
            expected = (1 + ctx.q2) * u - ctx.q2
            self.assertLess(abs(values[k] - expected), 1e-12 * abs(expected))

    def test_principal_series_values_are_real(self):
        rho = 0.37 * self.ctx.rho_max
        for u in (1.7, 5.0, 16.0, 256.0):
            value = phi_one(-0.5 + 1j * rho, u, self.ctx)
            self.assertLess(abs(value.imag), 1e-12 * max(1.0, abs(value)))

    def test_symmetry_under_reflection(self):
        for l in (0.35, 1.6, -0.5 + 0.9j):
            for u in (1.9, 4.0, 30.0):
                a = phi_one(l, u, self.ctx)
                b = phi_one(-1 - l, u, self.ctx)
                self.assertLess(abs(a - b), 1e-12 * max(1.0, abs(a)))

    def test_series_agrees_with_grid_recurrence(self):
        for l in (2.5, -0.5 + 0.6j, 3):
            table = phi_grid(l, 3, self.ctx)
            for k in range(4):
                direct = phi_series(l, 0.5 ** (-2 * k), self.ctx)
                self.assertLess(abs(direct - table[k]), 1e-10 * max(1.0, abs(direct)))

    def test_grid_index(self):
        self.assertEqual(grid_index(1.0, self.ctx), 0)
        self.assertEqual(grid_index(16.0, self.ctx), 2)
        self.assertIsNone(grid_index(3.0, self.ctx))
        self.assertIsNone(grid_index(0.25, self.ctx))

    def test_non_terminating_series_signals_truncation(self):
        ctx = QContext(q=0.5, max_terms=2)
        with self.assertRaises(ConvergenceError):
            phi_series(0.3, 2.2, ctx)


class CompensatedSumTests(SimpleTestCase):

    def test_cancellation_is_exact(self):
        self.assertEqual(compensated_sum([1e16, 1.0, -1e16]), 1.0)
        self.assertEqual(compensated_sum([1e16j, 1j, -1e16j, 2.0]), 2 + 1j)
