"""
Monic little q-Jacobi polynomials P_m(z) in base Q = q^2, orthogonal for the
Jackson moments mu_k on (0, q^2]. Coefficient arrays are in ascending degree.

In the variable x = z / Q the family is p_m(x; 1, 1 | Q), so

    P_m(z) = sum_k (Q^{-m}, Q^{m+1}; Q)_k / (Q; Q)_k^2 z^k, up to normalisation,
    P_{m+1}(z) = (z - alpha_m) P_m(z) - beta_m P_{m-1}(z).

Values are produced by the recurrence; monomial coefficients come from the
ratio of consecutive terms above, each a single product without cancellation.
"""

import logging
import math

import numpy as np
from scipy import linalg

from apps.common.exceptions import IllConditionedError
from apps.common.performance import cached_result
from apps.qcore.context import QContext
from apps.qcore.special import qpochhammer
from apps.radial.measure import moment

logger = logging.getLogger(__name__)

HANKEL_RESIDUAL_TOL = 1e-8
# Jackson nodes are dropped once their mass falls below this fraction of the total
LANCZOS_MASS_TOL = 1e-34


def _check_degree(m: int):
    if m < 0:
        raise ValueError(f"Degree must be nonnegative, got {m}")


@cached_result(key_prefix="jacobi")
def recurrence_coefficients(m_max: int, ctx: QContext):
    """
    alpha_k, beta_k for k < m_max in the variable z; beta_0 is the total mass mu_0.

        alpha_k = 2 Q^{k+1} / ((1 + Q^k)(1 + Q^{k+1}))
        beta_k  = Q^{2k+1} (1 - Q^k)^4 / ((1 - Q^{2k-1})(1 - Q^{2k})^2 (1 - Q^{2k+1}))
    """
    Q = ctx.q2
    k = np.arange(m_max, dtype=float)
    alpha = 2 * Q ** (k + 1) / ((1 + Q ** k) * (1 + Q ** (k + 1)))
    beta = np.empty(m_max)
    if m_max:
        beta[0] = moment(0, ctx)
        j = k[1:]
        beta[1:] = (
            Q ** (2 * j + 1) * (1 - Q ** j) ** 4
            / ((1 - Q ** (2 * j - 1)) * (1 - Q ** (2 * j)) ** 2 * (1 - Q ** (2 * j + 1)))
        )
    return alpha, beta


@cached_result(key_prefix="jacobi")
def lanczos_coefficients(m_max: int, ctx: QContext):
    """
    alpha_k, beta_k by a Lanczos pass on the Jackson nodes z_j = Q^{j+1}
    with masses (1 - Q) Q^{j+1}; independent of the closed forms.

    The top nodes are isolated, so Ritz values lock on early and the
    basis is reorthogonalised in full.
    """
    Q = ctx.q2
    size = max(m_max + 1, math.ceil(math.log(LANCZOS_MASS_TOL) / math.log(Q)))
    nodes = Q ** np.arange(1, size + 1, dtype=float)
    masses = (1 - Q) * nodes

    alpha = np.empty(m_max)
    beta = np.empty(m_max)
    beta[:1] = np.sum(masses)
    basis = np.zeros((size, m_max + 1))
    basis[:, 0] = np.sqrt(masses / np.sum(masses))
    for k in range(m_max):
        vector = basis[:, k]
        alpha[k] = np.sum(nodes * vector ** 2)
        residual = nodes * vector
        for _ in range(2):
            residual = residual - basis[:, :k + 1] @ (basis[:, :k + 1].T @ residual)
        norm = np.linalg.norm(residual)
        if k + 1 < m_max:
            beta[k + 1] = norm ** 2
        basis[:, k + 1] = residual / norm
    logger.debug(f"Lanczos on {size} Jackson nodes for degrees < {m_max}")
    return alpha, beta


def _coefficients_for(method: str, m_max: int, ctx: QContext):
    if method == 'recurrence':
        return recurrence_coefficients(m_max, ctx)
    if method == 'lanczos':
        return lanczos_coefficients(m_max, ctx)
    raise ValueError(f"Unknown method: {method}")


def jacobi_table(m_max: int, z, ctx: QContext, method: str = 'recurrence') -> np.ndarray:
    """P_0(z), ..., P_{m_max}(z) by the three-term recurrence, shape z.shape + (m_max + 1,)"""
    _check_degree(m_max)
    z = np.asarray(z)
    alpha, beta = _coefficients_for(method, m_max, ctx)
    table = np.empty(z.shape + (m_max + 1,), dtype=np.result_type(z, float))
    table[..., 0] = 1.0
    if m_max:
        table[..., 1] = z - alpha[0]
    for k in range(1, m_max):
        table[..., k + 1] = (z - alpha[k]) * table[..., k] - beta[k] * table[..., k - 1]
    return table


def _monic_from_product(m: int, ctx: QContext) -> np.ndarray:
    """c_k = c_{k+1} (1 - Q^{k+1})^2 / ((1 - Q^{k-m})(1 - Q^{m+k+1})), c_m = 1"""
    Q = ctx.q2
    coefficients = np.empty(m + 1)
    coefficients[m] = 1.0
    for k in range(m - 1, -1, -1):
        coefficients[k] = coefficients[k + 1] * (1 - Q ** (k + 1)) ** 2 / (
            (1 - Q ** (k - m)) * (1 - Q ** (m + k + 1))
        )
    return coefficients


def _monic_from_hankel(m: int, ctx: QContext) -> np.ndarray:
    """Solve the moment system sum_j c_j mu_{i+j} = -mu_{i+m}, i < m"""
    if m == 0:
        return np.array([1.0])
    moments = np.array([moment(k, ctx) for k in range(2 * m)])
    hankel = linalg.hankel(moments[:m], moments[m - 1:2 * m - 1])
    rhs = -moments[m:2 * m]
    solution = linalg.solve(hankel, rhs, assume_a='pos')

    residual = np.linalg.norm(hankel @ solution - rhs) / (
        np.linalg.norm(hankel) * np.linalg.norm(solution) + np.linalg.norm(rhs)
    )
    if residual > HANKEL_RESIDUAL_TOL:
        raise IllConditionedError(f"Hankel moment system for degree {m} is ill-conditioned", residual=residual)
    logger.debug(f"Hankel solve for P_{m}: relative residual {residual:.2e}")
    return np.concatenate((solution, [1.0]))


@cached_result(key_prefix="jacobi")
def little_q_jacobi(m: int, ctx: QContext, method: str = 'recurrence') -> np.ndarray:
    """
    Coefficients of P_m, ascending.

    method='recurrence' uses the closed-form term ratios; method='hankel'
    solves the moment equations and serves as the independent cross-check.
    Its conditioning degrades quickly, a few digits are gone by m = 5.
    """
    _check_degree(m)
    if method == 'recurrence':
        return _monic_from_product(m, ctx)
    if method == 'hankel':
        return _monic_from_hankel(m, ctx)
    raise ValueError(f"Unknown method: {method}")


def phi_leading_coefficient(m: int, ctx: QContext) -> float:
    """Leading coefficient of Phi_m in u, (Q^{m+1}; Q)_m / (Q; Q)_m, so that Phi_m = c_m P_m"""
    _check_degree(m)
    Q = ctx.q2
    return float((qpochhammer(Q ** (m + 1), Q, m) / qpochhammer(Q, Q, m)).real)


def evaluate_jacobi(m: int, z, ctx: QContext, method: str = 'recurrence') -> np.ndarray:
    return jacobi_table(m, z, ctx, method)[..., m]


def coefficient_matrix(degrees, ctx: QContext) -> np.ndarray:
    """Rows are the coefficients of P_{m_j}, padded to max(degrees) + 1 columns"""
    width = max(degrees) + 1
    matrix = np.zeros((len(degrees), width))
    for row, m in enumerate(degrees):
        coefficients = little_q_jacobi(m, ctx)
        matrix[row, :len(coefficients)] = coefficients
    return matrix
