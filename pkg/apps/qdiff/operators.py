"""
Radial operators L_k = Delta^{-1} e_k(Box_1, ..., Box_n) Delta on the grid
Delta_D and their truncations to a window |lambda| <= W.

Radial functions are moved to antisymmetric grid functions by the isometry
f -> Delta(u) f / sqrt(n!), extended by the sign of the sorting permutation
and by zero on tuples with repeated entries.
"""

import logging
import math
from collections import namedtuple
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Dict, FrozenSet, List, Optional

import numpy as np
from scipy import sparse

from apps.common.exceptions import DimensionMismatchError, WindowOverflowError
from apps.common.performance import cached_result
from apps.partitions.partition import Partition, enumerate_partitions
from apps.partitions.symmetric import vandermonde
from apps.qcore.context import QContext
from apps.radial.measure import weight_table
from apps.radial.radial_function import RadialFunction
from apps.spherical.eigen import principal_eigen_bound
from .stencil import GridFunction, apply_box

logger = logging.getLogger(__name__)

NormProfileEntry = namedtuple('NormProfileEntry', ['max_weight', 'norm', 'relative_change'])


def _permutation_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _delta_at(exponents, ctx: QContext) -> float:
    return float(vandermonde(ctx.q ** (-2.0 * np.asarray(exponents))))


def isometry(f: RadialFunction, ctx: QContext) -> GridFunction:
    """F(sigma m) = sign(sigma) Delta(u_m) f(lambda) / sqrt(n!) for m = lambda + delta"""
    n = f.n
    scale = 1 / math.sqrt(math.factorial(n))
    F: GridFunction = {}
    for lam, value in f.items():
        m = lam.exponents()
        base = _delta_at(m, ctx) * value * scale
        for perm in permutations(range(n)):
            F[tuple(m[p] for p in perm)] = _permutation_sign(perm) * base
    return F


def isometry_inverse(F: GridFunction, n: int, ctx: QContext) -> RadialFunction:
    """Read an antisymmetric grid function back on strictly decreasing tuples"""
    scale = math.sqrt(math.factorial(n))
    support = {}
    for m, value in F.items():
        if len(m) != n:
            raise DimensionMismatchError(f"Grid point {m} does not have {n} coordinates")
        if all(a > b for a, b in zip(m, m[1:])):
            support[Partition.from_exponents(m)] = value * scale / _delta_at(m, ctx)
    return RadialFunction(n, support)


def _add_into(total: GridFunction, part: GridFunction):
    for key, value in part.items():
        total[key] = total.get(key, 0) + value


def l_radial(k: int, f: RadialFunction, ctx: QContext, max_weight: Optional[int] = None) -> RadialFunction:
    """
    L_k f. With max_weight set, an image leaving the window raises.

    Raises:
        WindowOverflowError: support of L_k f exceeds max_weight
    """
    n = f.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")

    F = isometry(f, ctx)
    G: GridFunction = {}
    for axes in combinations(range(1, n + 1), k):
        image = F
        for axis in axes:
            image = apply_box(image, axis, ctx)
        _add_into(G, image)
    result = isometry_inverse(G, n, ctx)

    if max_weight is not None:
        overflow = [lam for lam in result if lam.weight > max_weight]
        if overflow:
            raise WindowOverflowError(
                f"L_{k} image leaves the window |lambda| <= {max_weight}", overflow=overflow
            )
    return result


@dataclass(frozen=True)
class GridOperator:
    """Truncation of L_k to the window, columns chi_lambda, rows the window"""

    n: int
    k: int
    max_weight: int
    basis: List[Partition]
    matrix: sparse.csr_matrix
    overflow: FrozenSet[Partition] = field(default_factory=frozenset)

    @property
    def truncated(self) -> bool:
        return bool(self.overflow)

    def index(self) -> Dict[Partition, int]:
        return {lam: i for i, lam in enumerate(self.basis)}

    def apply(self, f: RadialFunction) -> RadialFunction:
        """Compressed action P_W L_k P_W"""
        return RadialFunction.from_vector(self.n, self.basis, self.matrix @ f.to_vector(self.basis))

    def triplets(self):
        """(row partition, column partition, value) for every stored entry"""
        coo = self.matrix.tocoo()
        return [(self.basis[i], self.basis[j], v) for i, j, v in zip(coo.row, coo.col, coo.data)]


@cached_result(key_prefix="qdiff")
def operator_matrix(k: int, n: int, max_weight: int, ctx: QContext) -> GridOperator:
    """Assemble L_k column by column on |lambda| <= max_weight"""
    basis = enumerate_partitions(n, max_weight)
    index = {lam: i for i, lam in enumerate(basis)}
    rows, cols, data = [], [], []
    overflow = set()

    for j, lam in enumerate(basis):
        image = l_radial(k, RadialFunction.characteristic(lam), ctx)
        for mu, value in image.items():
            if mu in index:
                rows.append(index[mu])
                cols.append(j)
                data.append(value)
            else:
                overflow.add(mu)

    size = len(basis)
    matrix = sparse.csr_matrix((np.real_if_close(np.array(data, dtype=complex)), (rows, cols)), shape=(size, size))
    logger.debug(f"L_{k} on n={n}, W={max_weight}: {matrix.nnz} entries, {len(overflow)} partitions truncated")
    return GridOperator(n, k, max_weight, basis, matrix, frozenset(overflow))


def krylov_rank(depth: int, n: int, max_weight: int, ctx: QContext) -> int:
    """
    dim span{L_{k_1} ... L_{k_d} f_0 : d <= depth}, projected on the window.
    """
    operators = [operator_matrix(k, n, max_weight, ctx).matrix for k in range(1, n + 1)]
    size = operators[0].shape[0]
    start = np.zeros(size)
    start[0] = 1.0  # f_0 = chi_0, first in window order

    level = [start]
    vectors = [start]
    for _ in range(depth):
        level = [op @ v for v in level for op in operators]
        vectors.extend(level)

    krylov = np.column_stack(vectors)
    krylov = krylov / np.maximum(np.max(np.abs(krylov), axis=0), 1e-300)
    row_scale = np.max(np.abs(krylov), axis=1, keepdims=True)
    krylov = krylov / np.where(row_scale == 0, 1.0, row_scale)
    return int(np.linalg.matrix_rank(krylov))


def eigen_defect(k: int, phi: RadialFunction, eigenvalue: float, max_weight: int, ctx: QContext) -> float:
    """
    Largest relative residual of L_k phi = eigenvalue * phi over |lambda| <= max_weight.

    Each node is scaled by sum |L_k[mu, lam]| |phi(lam)| + |eigenvalue phi(mu)|,
    the size of the terms that cancel there. phi must be known on the
    window widened by n.
    """
    n = phi.n
    op = operator_matrix(k, n, max_weight + n, ctx)
    values = phi.to_vector(op.basis)
    residual = np.abs(op.matrix @ values - eigenvalue * values)
    scale = abs(op.matrix) @ np.abs(values) + np.abs(eigenvalue * values)
    rows = np.array([lam.weight <= max_weight for lam in op.basis])
    scale = np.where(scale == 0, 1.0, scale)
    return float(np.max(residual[rows] / scale[rows]))


def commutator_defect(j: int, k: int, f: RadialFunction, ctx: QContext) -> float:
    """max |L_j L_k f - L_k L_j f|, relative to max |L_j L_k f|"""
    jk = l_radial(j, l_radial(k, f, ctx), ctx)
    kj = l_radial(k, l_radial(j, f, ctx), ctx)
    return jk.max_abs_difference(kj) / max(jk.max_abs(), 1e-300)


def self_adjointness_defect(op: GridOperator, ctx: QContext) -> float:
    """
    max |w_mu M[mu, lam] - w_lam M[lam, mu]| over interior pairs
    (|lam|, |mu| < W), relative to the largest weighted entry.
    """
    weights = weight_table(op.n, op.max_weight, ctx)
    w = np.array([weights[lam] for lam in op.basis])
    interior = np.array([lam.weight < op.max_weight for lam in op.basis])

    weighted = (w[:, np.newaxis] * op.matrix.toarray())[np.ix_(interior, interior)]
    scale = np.max(np.abs(weighted))
    return float(np.max(np.abs(weighted - weighted.T)) / scale) if scale else 0.0


def symmetric_compression(op: GridOperator, ctx: QContext) -> np.ndarray:
    """D^{1/2} M D^{-1/2} with D the point masses; symmetric for a self-adjoint L_k"""
    weights = weight_table(op.n, op.max_weight, ctx)
    root = np.sqrt(np.array([weights[lam] for lam in op.basis]))
    compressed = root[:, np.newaxis] * op.matrix.toarray().real / root[np.newaxis, :]
    return (compressed + compressed.T) / 2


def norm_profile(k: int, n: int, windows, ctx: QContext) -> List[NormProfileEntry]:
    """
    Operator norms of the truncations of L_k in L^2(d nu_q) over growing windows.

    Compressions of a self-adjoint operator have norms increasing with the window
    and bounded by sup |e_k(a(-1/2 + i rho))|.
    """
    profile = []
    previous = None
    for window in sorted(windows):
        op = operator_matrix(k, n, window, ctx)
        value = float(np.max(np.abs(np.linalg.eigvalsh(symmetric_compression(op, ctx)))))
        change = abs(value - previous) / value if previous is not None else math.nan
        profile.append(NormProfileEntry(window, value, change))
        previous = value
    bound = principal_eigen_bound(k, n, ctx)
    logger.info(f"L_{k} (n={n}) truncated norms {[round(e.norm, 6) for e in profile]}, spectral bound {bound:.6g}")
    return profile


def band_shifts(n: int, k: int) -> FrozenSet[tuple]:
    """Shifts d in {-1,0,1}^n with at most k nonzero entries"""
    return frozenset(d for d in product((-1, 0, 1), repeat=n) if sum(1 for x in d if x) <= k)


def band_violations(op: GridOperator) -> List[tuple]:
    """Stored entries (mu, lam, value) whose shift mu - lam is outside the band"""
    allowed = band_shifts(op.n, op.k)
    return [
        (mu, lam, value) for mu, lam, value in op.triplets()
        if tuple(a - b for a, b in zip(mu, lam)) not in allowed
    ]
