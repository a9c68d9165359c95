import numpy as np
from django.core.cache import cache
from django.test import SimpleTestCase, override_settings

from .exceptions import CoincidentCoordinatesError, DimensionMismatchError, QBallError
from .performance import PerformanceMonitor, cache_key, cached_result


class CacheKeyTests(SimpleTestCase):

    def test_keys_are_stable_and_distinguish_arguments(self):
        self.assertEqual(cache_key('p', 1, 0.5, k=2), cache_key('p', 1, 0.5, k=2))
        self.assertNotEqual(cache_key('p', 1, 0.5), cache_key('p', 1, 0.25))
        self.assertNotEqual(cache_key('p', k=1), cache_key('p', j=1))

    def test_arrays_hash_by_content(self):
        a = np.arange(4.0)
        self.assertEqual(cache_key('p', a), cache_key('p', a.copy()))
        self.assertNotEqual(cache_key('p', a), cache_key('p', a + 1))
        self.assertNotEqual(cache_key('p', a), cache_key('p', a.reshape(2, 2)))

    def test_long_keys_are_hashed(self):
        key = cache_key('p', 'x' * 300)
        self.assertTrue(key.startswith('p:'))
        self.assertLess(len(key), 250)


class CachedResultTests(SimpleTestCase):

    def setUp(self):
        cache.clear()
        self.calls = 0

    def test_second_call_hits_the_cache(self):
        @cached_result(key_prefix='test')
        def square(x):
            self.calls += 1
            return x * x

        self.assertEqual(square(3), 9)
        self.assertEqual(square(3), 9)
        self.assertEqual(self.calls, 1)
        self.assertEqual(square(4), 16)
        self.assertEqual(self.calls, 2)

    def test_uncached_bypasses_the_cache(self):
        @cached_result(key_prefix='test')
        def double(x):
            self.calls += 1
            return 2 * x

        double(1)
        self.assertEqual(double.uncached(1), 2)
        self.assertEqual(self.calls, 2)


class PerformanceMonitorTests(SimpleTestCase):

    @override_settings(QBALL_SLOW_THRESHOLD=-1.0)
    def test_slow_calls_warn(self):
        @PerformanceMonitor.log_timing
        def check():
            return 'done'

        with self.assertLogs('apps.common.performance', level='WARNING') as logs:
            self.assertEqual(check(), 'done')
        self.assertIn('Performance warning for check', logs.output[0])

    def test_fast_calls_stay_quiet(self):
        @PerformanceMonitor.log_timing
        def check():
            return 1

        with self.assertLogs('apps.common.performance', level='DEBUG') as logs:
            check()
        self.assertTrue(all(record.levelname == 'DEBUG' for record in logs.records))


class ExceptionTests(SimpleTestCase):

    def test_input_errors_are_value_errors(self):
        for error in (DimensionMismatchError, CoincidentCoordinatesError):
            self.assertTrue(issubclass(error, QBallError))
            self.assertTrue(issubclass(error, ValueError))
