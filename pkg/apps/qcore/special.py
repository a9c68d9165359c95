"""
q-Pochhammer symbols, the q-Gamma function and compensated summation.

Every kernel accepts scalars or numpy arrays; scalar input gives a Python
complex back.
"""

import logging
import math
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from apps.common.exceptions import ConvergenceError, PoleError
from .context import QContext

logger = logging.getLogger(__name__)

ArrayOrScalar = Union[complex, np.ndarray]

# A factor this close to zero means the infinite product sits on a pole.
POLE_EPS = 1e-12


def _as_output(value: np.ndarray) -> ArrayOrScalar:
    if np.ndim(value) == 0:
        return complex(value)
    return value


def _context(ctx: Optional[QContext]) -> QContext:
    return ctx if ctx is not None else QContext.from_settings()


def qpow(base: float, exponent) -> ArrayOrScalar:
    """base^exponent on the principal branch, exp(exponent * ln base)"""
    exponent = np.asarray(exponent, dtype=complex)
    return _as_output(np.exp(exponent * math.log(base)))


def compensated_sum(values: Iterable) -> complex:
    """Error-free accumulation of complex terms (fsum on each part)"""
    re_parts = []
    im_parts = []
    for value in values:
        value = complex(value)
        re_parts.append(value.real)
        im_parts.append(value.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def infinite_product(a, base: float, ctx: Optional[QContext] = None) -> Tuple[np.ndarray, float, float]:
    """
    Truncated (a; base)_inf.

    Returns:
        (value, relative tail bound, smallest factor modulus)
    """
    ctx = _context(ctx)
    a = np.asarray(a, dtype=complex)
    modulus = np.abs(a)
    value = np.ones_like(a)
    smallest = math.inf
    power = 1.0

    for m in range(ctx.max_terms):
        term = modulus * power
        if np.all(term < ctx.product_tol):
            bound = float(np.max(term, initial=0.0)) / (1.0 - base)
            logger.debug(f"(a; {base})_inf truncated after {m} factors, tail bound {bound:.2e}")
            return value, bound, smallest
        factor = 1.0 - a * power
        smallest = min(smallest, float(np.min(np.abs(factor), initial=math.inf)))
        value = value * factor
        power *= base

    raise ConvergenceError(
        f"Infinite q-Pochhammer product needs more than {ctx.max_terms} factors (base {base})",
        terms=ctx.max_terms,
        last_term=float(np.max(modulus * power, initial=0.0)),
    )


def qpochhammer(a, base: float, k: Union[int, float], ctx: Optional[QContext] = None) -> ArrayOrScalar:
    """
    q-Pochhammer symbol (a; base)_k for finite k or k = math.inf.

    Args:
        a: complex scalar or array
        base: real in (0, 1)
        k: nonnegative integer or math.inf

    Returns:
        Product of (1 - a base^m) over m < k
    """
    if not (0.0 < base < 1.0):
        raise ValueError(f"q-Pochhammer base must lie in (0, 1), got {base}")

    if k == math.inf:
        value, _, _ = infinite_product(a, base, ctx)
        return _as_output(value)

    if int(k) != k or k < 0:
        raise ValueError(f"q-Pochhammer length must be a nonnegative integer or infinity, got {k}")

    a = np.asarray(a, dtype=complex)
    powers = base ** np.arange(int(k), dtype=float)
    factors = 1.0 - a[..., np.newaxis] * powers
    return _as_output(np.prod(factors, axis=-1))


def qgamma(x, ctx: QContext) -> ArrayOrScalar:
    """
    Gamma_{q^2}(x) = (q^2; q^2)_inf / (q^{2x}; q^2)_inf * (1 - q^2)^{1 - x}

    Raises:
        PoleError: when (q^{2x}; q^2)_inf vanishes
    """
    base2 = ctx.q2
    x = np.asarray(x, dtype=complex)

    denominator, _, smallest = infinite_product(qpow(base2, x), base2, ctx)
    if smallest < POLE_EPS:
        raise PoleError(f"q-Gamma pole at x = {x if x.ndim == 0 else 'array input'}")

    numerator, _, _ = infinite_product(base2, base2, ctx)
    value = numerator / denominator * np.exp((1.0 - x) * math.log(1.0 - base2))
    return _as_output(value)
