"""
Multivariate spherical functions on the radial grid and the polynomials
P_lambda built from one-variable little q-Jacobi polynomials.

    Phi_l(u)    = det[Phi_{l_j}(u_i)] / Delta(u)
    P_lambda(z) = det[P_{lambda_j + n - j}(z_i)] / Delta(z)
"""

import logging
import math
from itertools import combinations
from typing import Sequence, Tuple

import numpy as np

from apps.common.exceptions import CoincidentCoordinatesError, DimensionMismatchError
from apps.partitions.coordinates import grid_points
from apps.partitions.partition import Partition, enumerate_partitions
from apps.partitions.symmetric import coincident_mask, scaled_det, schur_jacobi_trudi, vandermonde
from apps.qcore.context import QContext
from apps.qcore.series import grid_index, phi_grid, phi_one
from apps.radial.radial_function import RadialFunction
from .jacobi import coefficient_matrix, jacobi_table, phi_leading_coefficient

logger = logging.getLogger(__name__)

DISTINCT_TOL = 1e-12
# Below this relative gap the determinant quotient loses too many digits
NEAR_COINCIDENT_RTOL = 1e-6


class SphericalParameter:
    """Spectral parameter l = (l_1, ..., l_n) with pairwise distinct entries"""

    __slots__ = ('values',)

    def __init__(self, values: Sequence[complex]):
        values = tuple(complex(v) for v in values)
        if not values:
            raise ValueError("Spectral parameter needs at least one coordinate")
        for a, b in combinations(values, 2):
            if abs(a - b) <= DISTINCT_TOL:
                raise CoincidentCoordinatesError(f"Spectral parameter has repeated entries: {values}")
        self.values = values

    def __repr__(self):
        return f"SphericalParameter({list(self.values)})"

    def __len__(self):
        return len(self.values)

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)

    @classmethod
    def from_partition(cls, lam: Partition) -> 'SphericalParameter':
        """l = lambda + delta, the polynomial spherical functions"""
        return cls(float(m) for m in lam.exponents())

    @classmethod
    def principal(cls, rho: Sequence[float], ctx: QContext) -> 'SphericalParameter':
        """
        l = -1/2 + i rho with pi/h >= rho_1 > ... > rho_n >= 0

        Raises:
            ValueError: rho outside the fundamental domain
        """
        rho = [float(r) for r in rho]
        if any(r < 0 or r > ctx.rho_max for r in rho):
            raise ValueError(f"rho must lie in [0, {ctx.rho_max:.6g}], got {rho}")
        if any(a <= b for a, b in zip(rho, rho[1:])):
            raise ValueError(f"rho must be strictly decreasing, got {rho}")
        return cls(complex(-0.5, r) for r in rho)


def _as_parameter(l) -> SphericalParameter:
    return l if isinstance(l, SphericalParameter) else SphericalParameter(l)


def _phi_entries(l: SphericalParameter, u: np.ndarray, ctx: QContext) -> np.ndarray:
    """Phi_{l_j}(u_i), shape u.shape + (n,); grid points share one recurrence table"""
    flat = u.reshape(-1)
    entries = np.empty((flat.size, l.n), dtype=complex)

    grid = [grid_index(float(value.real), ctx) if value.imag == 0 else None for value in flat.astype(complex)]
    on_grid = [i for i, k in enumerate(grid) if k is not None]
    if on_grid:
        k_max = max(grid[i] for i in on_grid)
        table = phi_grid(l.as_array(), k_max, ctx)
        for i in on_grid:
            entries[i] = table[:, grid[i]]
    for i, k in enumerate(grid):
        if k is None:
            entries[i] = [phi_one(lj, flat[i], ctx) for lj in l.values]

    return entries.reshape(u.shape + (l.n,))


def phi_multi(l, u, ctx: QContext):
    """
    Spherical function Phi_l at u of shape (..., n).

    Raises:
        CoincidentCoordinatesError: two coordinates of u agree
    """
    l = _as_parameter(l)
    u = np.asarray(u)
    if u.ndim == 0 or u.shape[-1] != l.n:
        raise DimensionMismatchError(f"Expected points with {l.n} coordinates")
    if np.any(coincident_mask(u)):
        raise CoincidentCoordinatesError("Phi_l evaluated at repeated coordinates")

    values = scaled_det(_phi_entries(l, u, ctx)) / vandermonde(u)
    return complex(values) if np.ndim(values) == 0 else values


def grid_values(l, partitions: Sequence[Partition], ctx: QContext) -> np.ndarray:
    """Phi_l(q^{-2(mu + delta)}) for each mu, from a single recurrence table"""
    l = _as_parameter(l)
    exponents = np.array([mu.exponents() for mu in partitions], dtype=int)
    table = phi_grid(l.as_array(), int(exponents.max()), ctx)
    matrices = table.T[exponents]
    return scaled_det(matrices) / vandermonde(ctx.q ** (-2.0 * exponents))


def spherical_radial(lam: Partition, ctx: QContext, max_weight: int) -> RadialFunction:
    """The polynomial spherical function Phi_{lambda+delta} restricted to a window"""
    partitions = enumerate_partitions(lam.n, max_weight)
    values = grid_values(SphericalParameter.from_partition(lam), partitions, ctx)
    return RadialFunction.from_vector(lam.n, partitions, values.real)


def _schur_expansion(lam: Partition, z: np.ndarray, ctx: QContext) -> np.ndarray:
    """
    Cauchy-Binet form of P_lambda, free of the Vandermonde division:
        P_lambda = sum_S det(C[:, S]) s_{S - delta}(z)
    over descending index sets S of size n.
    """
    n = lam.n
    matrix = coefficient_matrix(lam.exponents(), ctx)
    value = np.zeros(z.shape[:-1], dtype=np.result_type(z, float))
    for subset in combinations(range(matrix.shape[1]), n):
        columns = subset[::-1]
        minor = np.linalg.det(matrix[:, columns])
        if minor != 0:
            value = value + minor * schur_jacobi_trudi(Partition.from_exponents(columns), z)
    return value


def multivar_P(lam: Partition, z, ctx: QContext):
    """
    P_lambda(z) for z of shape (..., n).

    Points with nearly coincident coordinates go through the Schur expansion.
    """
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        z = z.astype(float)
    if z.ndim == 0 or z.shape[-1] != lam.n:
        raise DimensionMismatchError(f"Expected points with {lam.n} coordinates")
    single = z.ndim == 1
    z = np.atleast_2d(z)

    exponents = list(lam.exponents())
    close = coincident_mask(z, rtol=NEAR_COINCIDENT_RTOL)
    value = np.empty(z.shape[:-1], dtype=np.result_type(z, float))

    separated = z[~close]
    if separated.size:
        entries = jacobi_table(exponents[0], separated, ctx)[..., exponents]
        value[~close] = scaled_det(entries) / vandermonde(separated)
    if np.any(close):
        logger.debug(f"P_{lam.parts}: {int(np.sum(close))} near-coincident points via Schur expansion")
        value[close] = _schur_expansion(lam, z[close], ctx)

    return value[0] if single else value


def proportionality_constant(lam: Partition, ctx: QContext) -> float:
    """Phi_{lambda+delta}(u) = c_lambda P_lambda(u), c_lambda the product of leading coefficients"""
    return math.prod(phi_leading_coefficient(m, ctx) for m in lam.exponents())


def proportionality_ratios(lam: Partition, ctx: QContext, max_weight: int) -> Tuple[np.ndarray, float]:
    """
    Phi_{lambda+delta}(u_mu) / P_lambda(u_mu) over the window.

    Returns:
        (ratios, relative spread std/|mean|)
    """
    partitions = enumerate_partitions(lam.n, max_weight)
    phi = grid_values(SphericalParameter.from_partition(lam), partitions, ctx).real
    p = multivar_P(lam, grid_points(partitions, ctx), ctx)
    ratios = phi / p
    spread = float(np.std(ratios) / abs(np.mean(ratios)))
    return ratios, spread
