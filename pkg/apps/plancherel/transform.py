"""
The spherical transform of radial functions

    (U f)(rho) = sum_lambda w(lambda) Phi_{-1/2 + i rho}(q^{-2(lambda+delta)}) f(lambda)
    F f = U f / kappa,   kappa = U f_0

F is unitary from L^2(d nu_q) onto L^2(d Sigma) with the unitary density of
big_sigma_weight, and conjugates L_k to multiplication by e_k(a(-1/2 + i rho)).
"""

import logging
import math
import warnings
from functools import reduce
from itertools import permutations
from typing import Optional

import numpy as np

from apps.common.exceptions import DimensionMismatchError, QuadratureResolutionWarning
from apps.partitions.partition import Partition, enumerate_partitions
from apps.partitions.coordinates import grid_point
from apps.partitions.symmetric import vandermonde
from apps.qcore.context import QContext
from apps.qcore.series import phi_grid
from apps.qdiff.operators import l_radial
from apps.radial.measure import MeasureWeights, inner_product, norm_constant
from apps.radial.radial_function import RadialFunction
from apps.spherical.eigen import principal_eigen_tuple
from .cfunction import NORMALIZATIONS, kappa, sigma_weight
from .quadrature import QuadratureRule, singular_fraction
from .spectral import SpectralFunction

logger = logging.getLogger(__name__)

RESOLUTION_TOL = 1e-5


def _permutation_sign(perm) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


class NodeTable:
    """Phi_{-1/2 + i rho_a}(q^{-2k}) for every axis node rho_a and k <= k_max"""

    def __init__(self, rule: QuadratureRule, k_max: int, ctx: QContext):
        self.rule = rule
        self.ctx = ctx
        self.table = phi_grid(-0.5 + 1j * rule.nodes, k_max, ctx).real

    def spherical(self, lam: Partition) -> np.ndarray:
        """Phi_{-1/2 + i rho}(u_lambda) on the tensor grid; antisymmetric in rho"""
        m = lam.exponents()
        n = lam.n
        total = np.zeros((self.rule.size,) * n)
        for perm in permutations(range(n)):
            columns = [self.table[:, m[perm[j]]] for j in range(n)]
            total = total + _permutation_sign(perm) * reduce(np.multiply.outer, columns)
        return total / float(vandermonde(grid_point(lam, self.ctx)))


def _table_for(f: RadialFunction, rule: QuadratureRule, ctx: QContext, max_weight: int = 0) -> NodeTable:
    k_max = max([max(lam.exponents()) for lam in f.support] + [max_weight + f.n - 1])
    return NodeTable(rule, k_max, ctx)


def unnormalized_transform(f: RadialFunction, rule: QuadratureRule, ctx: QContext) -> np.ndarray:
    """U f on the tensor grid, a finite sum per node"""
    table = _table_for(f, rule, ctx)
    weights = MeasureWeights(f.n, ctx)
    result = np.zeros((rule.size,) * f.n, dtype=complex)
    for lam, value in f.items():
        result += weights(lam) * value * table.spherical(lam)
    return result


def kappa_on_nodes(n: int, rule: QuadratureRule, ctx: QContext) -> np.ndarray:
    """kappa on the tensor grid, computed as U f_0"""
    return unnormalized_transform(RadialFunction.f0(n), rule, ctx).real


def sigma_tensor(n: int, rule: QuadratureRule, ctx: QContext) -> np.ndarray:
    """prod_j sigma(rho_j) times the tensor quadrature weights"""
    return reduce(np.multiply.outer, [sigma_weight(rule.nodes, ctx) * rule.weights] * n)


def forward(f: RadialFunction, rule: QuadratureRule, ctx: QContext) -> SpectralFunction:
    """F f = U f / kappa on regular nodes, 0 on singular ones"""
    kappa_values = kappa_on_nodes(f.n, rule, ctx)
    result = SpectralFunction(f.n, rule, np.zeros((rule.size,) * f.n))
    regular = result.regular
    result.values[regular] = unnormalized_transform(f, rule, ctx)[regular] / kappa_values[regular]
    logger.debug(f"Forward transform of {len(f)} points on {rule.size}^{f.n} nodes "
                 f"({singular_fraction(rule, f.n):.2%} singular)")
    return result


def _check_resolution(n: int, rule: QuadratureRule, ctx: QContext):
    """inverse(1) must reproduce f_0 at the origin"""
    ones = SpectralFunction.constant(n, rule)
    value = inverse(ones, rule, ctx, max_weight=0, check_resolution=False)(Partition.zero(n))
    defect = abs(value - 1)
    if defect > RESOLUTION_TOL:
        logger.warning(f"Quadrature with M={rule.M} does not resolve the transform (defect {defect:.2e})")
        warnings.warn(
            f"Roundtrip defect {defect:.2e} of f_0 with M={rule.M} exceeds {RESOLUTION_TOL:g}",
            QuadratureResolutionWarning,
        )
    return defect


def inverse(fhat: SpectralFunction, rule: QuadratureRule, ctx: QContext, max_weight: int,
            check_resolution: bool = True) -> RadialFunction:
    """
    f(lambda) = 1/(n! N) int_cube f_hat(rho) kappa(rho) Phi_{-1/2+i rho}(u_lambda) prod d sigma(rho_j)
    over the window |lambda| <= max_weight.
    """
    n = fhat.n
    if check_resolution:
        _check_resolution(n, rule, ctx)

    table = NodeTable(rule, max_weight + n - 1, ctx)
    integrand = fhat.values * kappa_on_nodes(n, rule, ctx) * sigma_tensor(n, rule, ctx)
    scale = 1 / (math.factorial(n) * norm_constant(n, ctx))

    partitions = enumerate_partitions(n, max_weight)
    values = [scale * np.sum(integrand * table.spherical(lam)) for lam in partitions]
    return RadialFunction.from_vector(n, partitions, values)


def inverse_printed(fhat: SpectralFunction, rule: QuadratureRule, ctx: QContext, max_weight: int) -> RadialFunction:
    """
    The inverse as printed: f_hat Phi integrated against kappa^2 n! N prod d sigma
    over the region. It does not invert F; kept to measure by how much.
    """
    n = fhat.n
    table = NodeTable(rule, max_weight + n - 1, ctx)
    kappa_values = kappa_on_nodes(n, rule, ctx)
    integrand = fhat.values * kappa_values ** 2 * sigma_tensor(n, rule, ctx) * norm_constant(n, ctx)

    partitions = enumerate_partitions(n, max_weight)
    values = [np.sum(integrand * table.spherical(lam)) for lam in partitions]
    return RadialFunction.from_vector(n, partitions, values)


def disk_transform(f: RadialFunction, rho, ctx: QContext):
    """int_1^inf Phi_{-1/2 + i rho}(u) f(u) d_{q^{-2}} u for n = 1"""
    if f.n != 1:
        raise DimensionMismatchError(f"The disk transform needs n = 1, got n={f.n}")
    rho = np.asarray(rho, dtype=float)
    k_max = max([lam[0] for lam in f.support] + [0])
    table = phi_grid(-0.5 + 1j * rho, k_max, ctx)
    result = np.zeros(rho.shape, dtype=complex)
    for lam, value in f.items():
        k = lam[0]
        result += (1 - ctx.q2) * ctx.q ** (-2 * k) * table[..., k] * value
    return complex(result) if result.ndim == 0 else result


def spectral_inner_product(fhat: SpectralFunction, ghat: SpectralFunction, rule: QuadratureRule,
                           ctx: QContext, normalization: str = 'unitary') -> complex:
    """<f_hat, g_hat> in L^2(d Sigma), the region integral taken as cube / n!"""
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"Unknown normalization: {normalization}")
    n = fhat.n
    if ghat.n != n:
        raise DimensionMismatchError("Spectral functions of different n")
    constant = norm_constant(n, ctx)
    density = kappa_on_nodes(n, rule, ctx) ** 2 * sigma_tensor(n, rule, ctx)
    density = density / constant if normalization == 'unitary' else density * math.factorial(n) * constant
    return complex(np.sum(fhat.values * np.conj(ghat.values) * density)) / math.factorial(n)


def parseval_defect(f: RadialFunction, g: RadialFunction, rule: QuadratureRule, ctx: QContext) -> float:
    """|<f, g>_nu - <F f, F g>_Sigma|"""
    spectral = spectral_inner_product(forward(f, rule, ctx), forward(g, rule, ctx), rule, ctx)
    return abs(inner_product(f, g, ctx) - spectral)


def parseval_ratio(f: RadialFunction, rule: QuadratureRule, ctx: QContext, normalization: str = 'unitary') -> float:
    """<F f, F f>_Sigma / <f, f>_nu; n! N^2 for the printed density"""
    fhat = forward(f, rule, ctx)
    return spectral_inner_product(fhat, fhat, rule, ctx, normalization).real / inner_product(f, f, ctx).real


def roundtrip_defect(f: RadialFunction, rule: QuadratureRule, ctx: QContext,
                     max_weight: Optional[int] = None) -> float:
    """max |F^{-1} F f - f| over the window, relative to max |f|"""
    window = f.max_weight if max_weight is None else max_weight
    recovered = inverse(forward(f, rule, ctx), rule, ctx, window)
    return recovered.max_abs_difference(f, max_weight=window) / f.max_abs()


def intertwine_defect(k: int, f: RadialFunction, rule: QuadratureRule, ctx: QContext) -> float:
    """
    F(L_k f) = e_k(a(-1/2 + i rho)) F f on regular nodes, as a relative defect.

    Both sides carry the same 1/kappa, so the identity is compared on U:
    max |U(L_k f) - e_k U f| / max(|U(L_k f)| + |e_k U f|). Nodes next to
    the diagonal, where kappa is small, then weigh no more than any other.
    """
    left = unnormalized_transform(l_radial(k, f, ctx), rule, ctx)
    right = principal_eigen_tuple(rule.tensor_nodes(f.n), k, ctx) * unnormalized_transform(f, rule, ctx)
    regular = rule.regular_mask(f.n)
    scale = float(np.max((np.abs(left) + np.abs(right))[regular]))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(left - right)[regular])) / scale


def spectral_coordinates(rho, ctx: QContext, divide_by_kappa: bool = False) -> np.ndarray:
    """
    z_k = e_k(a(-1/2 + i rho)), k = 1..n; the variables F turns L_k into
    multiplication by. divide_by_kappa=True gives the form with an extra 1/kappa.
    """
    rho = np.asarray(rho, dtype=float)
    n = rho.shape[-1]
    z = np.stack([principal_eigen_tuple(rho, k, ctx) for k in range(1, n + 1)], axis=-1)
    if divide_by_kappa:
        z = z / np.asarray(kappa(rho, ctx))[..., np.newaxis]
    return z
