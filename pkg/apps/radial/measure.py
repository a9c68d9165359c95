"""
Jackson integrals and the radial measure d nu_q

The radial measure is supported on the grid Delta_D = {q^{-2(lambda+delta)}}
with point masses

    w(lambda) = N * Delta(u)^2 * (1 - q^2)^n * q^{-2|lambda + delta|},

N being the normalisation that makes the integral agree with the invariant
integral computed through traces.
"""

import logging
import math
from collections import namedtuple
from typing import Callable, Dict, Optional, Union

import numpy as np
from scipy.special import comb

from apps.common.exceptions import DimensionMismatchError
from apps.common.performance import cached_result
from apps.partitions.coordinates import corner_point, grid_point, grid_points
from apps.partitions.partition import Partition, enumerate_partitions
from apps.partitions.symmetric import schur, vandermonde
from apps.qcore.context import QContext
from apps.qcore.special import compensated_sum
from .radial_function import RadialFunction

logger = logging.getLogger(__name__)

JacksonEstimate = namedtuple('JacksonEstimate', ['value', 'tail_bound', 'max_weight'])


def norm_constant(n: int, ctx: QContext) -> float:
    """N = (1-q^2)^{n(n-1)} q^{n(n-1)} / Delta(q^{-2 delta})^2"""
    q, q2 = ctx.q, ctx.q2
    corner = float(vandermonde(corner_point(n, ctx)))
    return (1 - q2) ** (n * (n - 1)) * q ** (n * (n - 1)) / corner ** 2


def point_mass(lam: Partition, ctx: QContext) -> float:
    """w(lambda), the mass of d nu_q at q^{-2(lambda+delta)}"""
    n = lam.n
    u = grid_point(lam, ctx)
    exponent = sum(lam.exponents())
    return norm_constant(n, ctx) * float(vandermonde(u)) ** 2 * (1 - ctx.q2) ** n * ctx.q ** (-2 * exponent)


def trace_weight(lam: Partition, ctx: QContext) -> float:
    """d_lambda = q^{-2|lambda|} S_lambda(q^{-2 delta})^2"""
    corner = corner_point(lam.n, ctx)
    return ctx.q ** (-2 * lam.weight) * float(schur(lam, corner)) ** 2


@cached_result(key_prefix="radial")
def weight_table(n: int, max_weight: int, ctx: QContext) -> Dict[Partition, float]:
    """point_mass over the window |lambda| <= max_weight"""
    return {lam: point_mass(lam, ctx) for lam in enumerate_partitions(n, max_weight)}


class MeasureWeights:
    """Point masses of d nu_q for fixed (n, q), grown on demand"""

    def __init__(self, n: int, ctx: QContext):
        self.n = n
        self.ctx = ctx
        self._max_weight = -1
        self._table: Dict[Partition, float] = {}

    def covering(self, max_weight: int) -> Dict[Partition, float]:
        if max_weight > self._max_weight:
            self._table = weight_table(self.n, max_weight, self.ctx)
            self._max_weight = max_weight
        return self._table

    def __call__(self, lam: Partition) -> float:
        if lam.n != self.n:
            raise DimensionMismatchError(f"{lam} does not belong to Lambda_{self.n}")
        return self.covering(lam.weight)[lam]


def moment(k: int, ctx: QContext) -> float:
    """mu_k = int_0^{q^2} z^k d_{q^2} z = (1-q^2) q^{2(k+1)} / (1 - q^{2(k+1)})"""
    q2 = ctx.q2
    return (1 - q2) * q2 ** (k + 1) / (1 - q2 ** (k + 1))


def moment_integral(coefficients: np.ndarray, ctx: QContext) -> float:
    """
    Exact base-q^2 Jackson integral of a symmetric polynomial that vanishes
    on the diagonals, given as a dense array c[alpha] of z^alpha coefficients.

    Over the ordered simplex the sum is 1/n! of the unordered one, which
    factorises into moments.
    """
    coefficients = np.asarray(coefficients)
    n = coefficients.ndim
    degree = max(coefficients.shape)
    moments = np.array([moment(k, ctx) for k in range(degree)])

    value = coefficients
    for _ in range(n):
        value = np.tensordot(value, moments[:value.shape[-1]], axes=([-1], [0]))
    return complex(value) / math.factorial(n) if np.iscomplexobj(value) else float(value) / math.factorial(n)


def _tail_mass(n: int, max_weight: int, ctx: QContext) -> float:
    """(1-q^2)^n sum of prod z over the nodes with |lambda| > max_weight"""
    q2 = ctx.q2
    corner = q2 ** (sum(range(n)) + n)
    total = 0.0
    w = max_weight + 1
    while True:
        term = corner * q2 ** w * comb(w + n - 1, n - 1)
        total += term
        if term < 1e-30 * max(total, 1e-300):
            break
        w += 1
    return (1 - q2) ** n * total


def jackson_window(n: int, ctx: QContext, rtol: float) -> int:
    """Smallest window whose omitted Jackson nodes carry at most rtol of the total mass"""
    target = rtol * _tail_mass(n, -1, ctx)
    high = 1
    while _tail_mass(n, high, ctx) > target:
        high *= 2
    low = high // 2
    while low < high:
        middle = (low + high) // 2
        if _tail_mass(n, middle, ctx) > target:
            low = middle + 1
        else:
            high = middle
    return high


@cached_result(key_prefix="radial")
def jackson_nodes(n: int, max_weight: int, ctx: QContext) -> np.ndarray:
    """z = q^{2(lambda + delta + 1)} for |lambda| <= max_weight, shape (N, n)"""
    partitions = enumerate_partitions(n, max_weight)
    exponents = np.array([lam.exponents() for lam in partitions], dtype=float)
    return ctx.q2 ** (exponents + 1)


def jackson_q2_integral(phi: Callable[[np.ndarray], np.ndarray], n: int, ctx: QContext,
                        max_weight: int) -> JacksonEstimate:
    """
    Base-q^2 multiple Jackson integral over 0 < z_1 < q^2 z_2 < ... < q^2,

        (1 - q^2)^n sum_lambda phi(z) prod_i z_i,  z = q^{2(lambda + delta + 1)},

    truncated to |lambda| <= max_weight.

    Args:
        phi: vectorised evaluator taking nodes of shape (N, n)
        max_weight: truncation window

    Returns:
        JacksonEstimate(value, tail_bound, max_weight); the bound is the
        largest |phi| seen times the measure of the omitted nodes
    """
    nodes = jackson_nodes(n, max_weight, ctx)
    values = np.asarray(phi(nodes))
    if values.shape != (len(nodes),):
        raise DimensionMismatchError(f"Integrand returned shape {values.shape} for {len(nodes)} nodes")

    terms = (1 - ctx.q2) ** n * values * np.prod(nodes, axis=-1)
    value = compensated_sum(terms)
    tail = float(np.max(np.abs(values))) * _tail_mass(n, max_weight, ctx)
    logger.debug(f"Jackson q^2 integral over {len(nodes)} nodes (n={n}), tail bound {tail:.2e}")

    if not np.iscomplexobj(values):
        value = value.real
    return JacksonEstimate(value, tail, max_weight)


def jackson_q2_converged(phi: Callable[[np.ndarray], np.ndarray], n: int, ctx: QContext, rtol: float,
                         scale: Optional[float] = None) -> JacksonEstimate:
    """
    jackson_q2_integral on a window grown until the tail bound is at most
    rtol * scale (rtol * |value| without a scale). The window starts where the
    omitted mass drops below rtol and stops growing at twice that.
    """
    start = jackson_window(n, ctx, rtol)
    window = start
    while True:
        estimate = jackson_q2_integral(phi, n, ctx, window)
        reference = abs(estimate.value) if scale is None else scale
        if estimate.tail_bound <= rtol * reference:
            return estimate
        if window >= 2 * start:
            logger.warning(f"Jackson tail bound {estimate.tail_bound:.2e} above {rtol:.0e} x {reference:.2e} "
                           f"at window {window} (n={n}, q={ctx.q})")
            return estimate
        window = min(2 * start, window + max(4, window // 4))


def jackson_qinv2_integral(f: Union[RadialFunction, Callable], n: int, ctx: QContext,
                           max_weight: Optional[int] = None) -> complex:
    """
    Base-q^{-2} Jackson integral (1-q^2)^n sum_lambda phi(u) q^{-2|lambda+delta|}
    over u = q^{-2(lambda+delta)}.

    A RadialFunction is summed exactly over its support; a vectorised
    evaluator of u (shape (N, n)) needs a window.
    """
    scale = (1 - ctx.q2) ** n

    if isinstance(f, RadialFunction):
        if f.n != n:
            raise DimensionMismatchError(f"Radial function has n={f.n}, integral has n={n}")
        return compensated_sum(
            scale * value * ctx.q ** (-2 * sum(lam.exponents())) for lam, value in f.items()
        )

    if max_weight is None:
        raise ValueError("An evaluator needs a truncation window")
    partitions = enumerate_partitions(n, max_weight)
    u = grid_points(partitions, ctx)
    values = np.asarray(f(u))
    return compensated_sum(scale * values * np.prod(u, axis=-1))


def radial_integral(f: RadialFunction, ctx: QContext) -> complex:
    """int f d nu_q, exact over the support"""
    weights = MeasureWeights(f.n, ctx)
    return compensated_sum(weights(lam) * value for lam, value in f.items())


def inner_product(f: RadialFunction, g: RadialFunction, ctx: QContext) -> complex:
    """(f, g) = int f conj(g) d nu_q"""
    if f.n != g.n:
        raise DimensionMismatchError(f"Cannot pair radial functions with n={f.n} and n={g.n}")
    weights = MeasureWeights(f.n, ctx)
    return compensated_sum(
        weights(lam) * value * g(lam).conjugate() for lam, value in f.items() if g(lam) != 0
    )


def norm(f: RadialFunction, ctx: QContext) -> float:
    return math.sqrt(inner_product(f, f, ctx).real)


def trace_side_integral(f: RadialFunction, ctx: QContext) -> complex:
    """(1-q^2)^{n^2} sum_lambda d_lambda f(lambda), the trace form of the integral"""
    n = f.n
    return (1 - ctx.q2) ** (n * n) * compensated_sum(trace_weight(lam, ctx) * value for lam, value in f.items())
