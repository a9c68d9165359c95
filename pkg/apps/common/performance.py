"""
Result caching and timing utilities for the qball numerics
"""

from django.core.cache import cache
from django.conf import settings
from functools import wraps
import hashlib
import logging
import time

import numpy as np

logger = logging.getLogger(__name__)


def _key_part(value) -> str:
    """Stable text for one cache-key component"""
    if isinstance(value, np.ndarray):
        digest = hashlib.md5(np.ascontiguousarray(value).tobytes()).hexdigest()
        return f"ndarray{value.shape}:{digest}"
    return repr(value)


def cache_key(prefix: str, *args, **kwargs) -> str:
    """Generate a cache key from arguments"""
    key_parts = [str(prefix)]

    for arg in args:
        key_parts.append(_key_part(arg))

    for k, v in sorted(kwargs.items()):
        key_parts.append(f"{k}={_key_part(v)}")

    # Memcached-style backends reject keys over 250 chars
    key_string = ":".join(key_parts)
    if len(key_string) > 200 or any(ch.isspace() for ch in key_string):
        key_hash = hashlib.md5(key_string.encode()).hexdigest()
        return f"{prefix}:{key_hash}"

    return key_string


def cached_result(timeout=None, key_prefix: str = "qball"):
    """
    Decorator memoising a pure function through the Django cache.

    The wrapped function must be deterministic in its arguments; tables
    built this way are write-once per (arguments, QContext).
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            cache_key_str = cache_key(f"{key_prefix}:{func.__module__}.{func.__name__}", *args, **kwargs)

            result = cache.get(cache_key_str)
            if result is not None:
                logger.debug(f"Cache hit for {cache_key_str}")
                return result

            start_time = time.perf_counter()
            result = func(*args, **kwargs)
            execution_time = time.perf_counter() - start_time

            cache.set(cache_key_str, result, timeout)

            logger.debug(f"Cached result for {cache_key_str} (execution: {execution_time:.3f}s)")
            return result

        wrapper.uncached = func
        return wrapper
    return decorator


class PerformanceMonitor:
    """Monitor and log timing of numerical checks"""

    @staticmethod
    def log_timing(func):
        """Decorator logging wall time, warning above QBALL_SLOW_THRESHOLD"""
        @wraps(func)
        def wrapper(*args, **kwargs):
            threshold = getattr(settings, 'QBALL_SLOW_THRESHOLD', 5.0)
            start_time = time.perf_counter()

            result = func(*args, **kwargs)

            execution_time = time.perf_counter() - start_time
            if execution_time > threshold:
                logger.warning(f"Performance warning for {func.__name__}: {execution_time:.2f}s")
            else:
                logger.debug(f"Performance: {func.__name__}: {execution_time:.3f}s")

            return result
        return wrapper
