import csv
import io
import json
import os
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from apps.partitions.partition import Partition
from apps.plancherel.quadrature import composite_simpson
from apps.plancherel.serializers import SpectralFunctionSerializer
from apps.plancherel.spectral import SpectralFunction
from apps.qcore.context import QContext
from .config import RunConfig
from .serializers import RunConfigSerializer
from .verification import CheckResult, SuiteRun, run_suite


def run(*args, **options):
    out = io.StringIO()
    call_command(*args, stdout=out, **options)
    return out.getvalue()


class RunConfigTests(SimpleTestCase):

    def test_defaults_follow_settings(self):
        serializer = RunConfigSerializer(data={})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.build()
        self.assertEqual((config.q, config.n, config.max_weight, config.quad_nodes), (0.5, 2, 8, 256))
        self.assertEqual(config.output_format, 'json')

    @override_settings(QBALL_QUAD_NODES_DISK=512)
    def test_disk_gets_its_own_node_count(self):
        serializer = RunConfigSerializer(data={'n': 1})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.build().quad_nodes, 512)

    def test_rejects_bad_values(self):
        for data in ({'q': 1.0}, {'q': 0.0}, {'n': 0}, {'quad_nodes': 63}, {'tol': 0.0}, {'format': 'xml'}):
            self.assertFalse(RunConfigSerializer(data=data).is_valid(), data)

    def test_tolerance_override_keeps_exact_checks(self):
        config = RunConfig(q=0.5, n=1, max_weight=2, quad_nodes=64, tol=1e-3)
        self.assertEqual(config.tolerance(1e-10), 1e-3)
        self.assertEqual(config.tolerance(0), 0)
        self.assertEqual(RunConfig(q=0.5, n=1, max_weight=2, quad_nodes=64).tolerance(1e-10), 1e-10)

    def test_check_result_pass(self):
        self.assertTrue(CheckResult('x', 1, 0.5, defect=0.0, tolerance=0.0).passed)
        self.assertFalse(CheckResult('x', 1, 0.5, defect=float('nan'), tolerance=1.0).passed)
        self.assertFalse(CheckResult('x', 1, 0.5, defect=2.0, tolerance=1.0).passed)


class EvalCommandTests(SimpleTestCase):

    def test_a_at_zero(self):
        data = json.loads(run('eval', 'a', l=[0]))
        self.assertEqual(data['what'], 'a')
        self.assertEqual(data['rows'][0]['re'], 0)
        self.assertEqual(data['rows'][0]['im'], 0)

    def test_phi_at_one(self):
        data = json.loads(run('eval', 'phi', l=[1], u=[1]))
        row = data['rows'][0]
        self.assertEqual(row['re'], 1.0)
        self.assertEqual(row['method'], 'grid recurrence')
        self.assertEqual(row['arguments'], {'l': 1.0, 'u': 1.0})

    def test_phi_off_grid_uses_series(self):
        data = json.loads(run('eval', 'phi', l=[1], u=[1.5]))
        self.assertEqual(data['rows'][0]['method'], 'basic hypergeometric series')

    def test_c_at_zero(self):
        data = json.loads(run('eval', 'c', l=[0]))
        self.assertAlmostEqual(data['rows'][0]['re'], 1.0, places=12)

    def test_jacobi_is_monic(self):
        data = json.loads(run('eval', 'jacobi', m=2, z=[0.5]))
        coefficients = [row for row in data['rows'] if 'power' in row['arguments']]
        self.assertEqual(len(coefficients), 3)
        self.assertEqual(coefficients[-1]['re'], 1.0)
        self.assertEqual(data['rows'][-1]['arguments'], {'m': 2, 'z': 0.5})

    def test_schur_at_coincident_points(self):
        data = json.loads(run('eval', 'schur', lam=[1, 0], z=[2.0, 2.0]))
        self.assertEqual(data['rows'][0]['method'], 'Jacobi-Trudi')
        self.assertAlmostEqual(data['rows'][0]['re'], 4.0, places=12)

    def test_csv_output(self):
        rows = list(csv.reader(io.StringIO(run('eval', 'a', l=[0, 1], format='csv'))))
        self.assertEqual(rows[0], ['arguments', 're', 'im', 'method'])
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[1][0], 'l=0.0')

    def test_missing_parameter_is_bad_input(self):
        with self.assertRaises(CommandError) as raised:
            run('eval', 'phi', l=[1])
        self.assertEqual(raised.exception.returncode, 2)

    def test_bad_q_is_bad_input(self):
        with self.assertRaises(CommandError) as raised:
            run('eval', 'a', l=[0], q=1.5)
        self.assertEqual(raised.exception.returncode, 2)


class TransformCommandTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.ctx = QContext(q=0.5)

    def write(self, name, data):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as stream:
            json.dump(data, stream)
        return path

    def test_forward_of_f0_is_one(self):
        path = self.write('f0.json', {'n': 1, 'q': 0.5, 'support': [{'lambda': [0], 're': 1.0}]})
        data = json.loads(run('transform', 'forward', input=path, quad_nodes=128, check=True))
        self.assertEqual(data['M'], 128)
        self.assertEqual(len(data['values']), 129)
        for re, im in data['values']:
            self.assertAlmostEqual(re, 1.0, places=10)
            self.assertAlmostEqual(im, 0.0, places=10)
        self.assertTrue(data['check']['pass'])

    def test_forward_then_inverse(self):
        path = self.write('chi.json', {'n': 1, 'q': 0.5, 'support': [{'lambda': [1], 're': 1.0}]})
        spectral = os.path.join(self.tmp.name, 'chi_hat.json')
        run('transform', 'forward', input=path, quad_nodes=128, out=spectral)
        data = json.loads(run('transform', 'inverse', input=spectral, max_weight=3))
        values = {tuple(entry['lambda']): entry['re'] for entry in data['support']}
        self.assertAlmostEqual(values[(1,)], 1.0, places=8)
        for lam, value in values.items():
            if lam != (1,):
                self.assertAlmostEqual(value, 0.0, places=8)

    def test_inverse_of_one_is_f0(self):
        rule = composite_simpson(128, self.ctx)
        payload = SpectralFunctionSerializer.payload(SpectralFunction.constant(1, rule), self.ctx)
        path = self.write('one.json', dict(SpectralFunctionSerializer(payload).data))
        data = json.loads(run('transform', 'inverse', input=path, max_weight=2, check=True))
        values = {tuple(entry['lambda']): entry['re'] for entry in data['support']}
        self.assertAlmostEqual(values[(0,)], 1.0, places=8)
        self.assertTrue(data['check']['pass'])

    def test_schema_violation_is_bad_input(self):
        path = self.write('bad.json', {'n': 1, 'q': 0.5, 'support': [{'lambda': [1, 0], 're': 1.0}]})
        with self.assertRaises(CommandError) as raised:
            run('transform', 'forward', input=path, quad_nodes=16)
        self.assertEqual(raised.exception.returncode, 2)

    def test_contradicting_flags_are_bad_input(self):
        path = self.write('f0.json', {'n': 1, 'q': 0.5, 'support': [{'lambda': [0], 're': 1.0}]})
        with self.assertRaises(CommandError) as raised:
            run('transform', 'forward', input=path, q=0.3)
        self.assertEqual(raised.exception.returncode, 2)

    def test_missing_file_is_bad_input(self):
        with self.assertRaises(CommandError) as raised:
            run('transform', 'forward', input=os.path.join(self.tmp.name, 'absent.json'))
        self.assertEqual(raised.exception.returncode, 2)


class VerifyCommandTests(SimpleTestCase):

    def test_kappa_suite_disk(self):
        data = json.loads(run('verify', 'kappa', n=1))
        self.assertTrue(data['passed'])
        self.assertEqual([check['check'] for check in data['checks']], ['kappa_disk'])

    def test_kappa_suite_matrix_ball(self):
        data = json.loads(run('verify', 'kappa', n=2))
        self.assertTrue(data['passed'], data)
        checks = {check['check']: check for check in data['checks']}
        self.assertAlmostEqual(checks['kappa_vandermonde_constant']['params']['expected'], -0.0703125, places=15)

    def test_cyclicity_suite(self):
        data = json.loads(run('verify', 'cyclicity', n=2, max_weight=4))
        self.assertTrue(data['passed'], data)
        krylov = data['checks'][0]
        self.assertEqual(krylov['params']['rank'], 6)

    def test_eigen_suite_disk(self):
        data = json.loads(run('verify', 'eigen', n=1))
        self.assertTrue(data['passed'], data)

    def test_eigen_suite_sweeps_q(self):
        data = json.loads(run('verify', 'eigen', n=2, max_weight=4))
        self.assertTrue(data['passed'], [c for c in data['checks'] if not c['pass']])
        radial = [check for check in data['checks'] if check['check'] == 'radial_eigenfunction']
        self.assertEqual({check['q'] for check in radial}, {0.3, 0.5, 0.7, 0.9})

    def test_sweep_restores_the_configured_q(self):
        suite_run = SuiteRun(RunConfig(q=0.6, n=1, max_weight=2, quad_nodes=64))
        swept = [ctx.q for ctx in suite_run.sweep()]
        self.assertEqual(swept, [0.6, 0.3, 0.5, 0.7, 0.9])
        self.assertEqual(suite_run.ctx.q, 0.6)

    def test_orthogonality_suite_disk_reaches_degree_five(self):
        data = json.loads(run('verify', 'orthogonality', n=1))
        self.assertTrue(data['passed'], [c for c in data['checks'] if not c['pass']])
        degree_five = [check for check in data['checks']
                       if check['check'] == 'little_q_jacobi_orthogonality' and check['params']['m'] == 5]
        self.assertEqual({check['q'] for check in degree_five}, {0.3, 0.5, 0.7, 0.9})
        self.assertTrue(all(check['params']['tail_bound'] <= 1e-12 for check in degree_five))

    def test_orthogonality_suite_matrix_ball(self):
        data = json.loads(run('verify', 'orthogonality', n=2))
        self.assertTrue(data['passed'], [c for c in data['checks'] if not c['pass']])
        names = {check['check'] for check in data['checks']}
        self.assertEqual(names, {'little_q_jacobi_orthogonality', 'multivariate_orthogonality',
                                 'gram_schmidt_agreement', 'phi_proportional_to_P'})

    def test_parseval_suite_disk_window(self):
        data = json.loads(run('verify', 'parseval', n=1))
        self.assertTrue(data['passed'], [c for c in data['checks'] if not c['pass']])
        diagonal = [check['params']['f'] for check in data['checks']
                    if check['check'] == 'parseval' and check['params']['f'] == check['params']['g']]
        self.assertIn([10], diagonal)
        self.assertNotIn([11], diagonal)

    def test_failure_exits_one_after_writing_report(self):
        out = io.StringIO()
        with self.assertRaises(CommandError) as raised:
            call_command('verify', 'eigen', n=1, tol=1e-300, stdout=out)
        self.assertEqual(raised.exception.returncode, 1)
        report = json.loads(out.getvalue())
        self.assertFalse(report['passed'])

    def test_reports_are_byte_identical(self):
        first = run('verify', 'kappa', n=2, seed=3)
        second = run('verify', 'kappa', n=2, seed=3)
        self.assertEqual(first, second)

    def test_unknown_suite(self):
        config = RunConfig(q=0.5, n=1, max_weight=2, quad_nodes=64)
        with self.assertRaises(ValueError):
            run_suite('nonsense', config)


class TabulateCommandTests(SimpleTestCase):

    def test_measure_disk(self):
        rows = list(csv.reader(io.StringIO(run('tabulate', 'measure', n=1, max_weight=2))))
        self.assertEqual(rows[0], ['lambda', 'grid_point', 'weight'])
        for row, expected in zip(rows[1:], (0.75, 3.0, 12.0)):
            self.assertAlmostEqual(float(row[2]) / expected, 1.0, places=14)

    def test_spectrum_disk(self):
        rows = list(csv.reader(io.StringIO(run('tabulate', 'spectrum', n=1, max_weight=1))))
        self.assertEqual([row[0] for row in rows[1:]], ['0', '1'])
        self.assertAlmostEqual(float(rows[1][1]), 1.0, places=14)
        self.assertAlmostEqual(float(rows[2][1]), 4.0, places=13)

    def test_spherical_eigen_tuple(self):
        data = json.loads(run('tabulate', 'spherical', n=2, max_weight=1, format='json'))
        first = data['rows'][0]
        self.assertEqual(first['lambda'], [0, 0])
        self.assertAlmostEqual(first['eigen'][0], -5.0, places=12)
        self.assertAlmostEqual(first['eigen'][1], 0.0, places=12)
        # Phi_delta is constant: the slope of Phi_1 in u, 5/4 at q = 1/2
        for value in first['values']:
            self.assertAlmostEqual(value, 1.25, places=12)
        self.assertEqual(data['samples'], [list(Partition.zero(2)), [1, 0]])

    def test_spherical_csv_has_sample_columns(self):
        rows = list(csv.reader(io.StringIO(run('tabulate', 'spherical', n=1, max_weight=1))))
        self.assertEqual(rows[0], ['lambda', 'e_1', 'phi(0)', 'phi(1)'])
