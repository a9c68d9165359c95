"""
Independent construction of P_lambda by Gram-Schmidt in the monomial basis.

Polynomials in n variables are dense coefficient arrays c[alpha_1, ..., alpha_n];
products are array convolutions and integrals against Delta(z)^2 times the
Jackson measure reduce to the moments mu_k.
"""

import logging
from collections import namedtuple
from itertools import combinations, permutations, product
from typing import Callable, Dict, Tuple

import numpy as np
from scipy import linalg, signal

from apps.partitions.partition import Partition, dominance_leq, enumerate_partitions
from apps.qcore.context import QContext
from apps.radial.measure import moment_integral

logger = logging.getLogger(__name__)

GramSchmidtResult = namedtuple('GramSchmidtResult', ['lam', 'coefficients', 'array'])


def monomial_array(eta: Partition, size: int) -> np.ndarray:
    array = np.zeros((size,) * eta.n)
    for alpha in set(permutations(eta.parts)):
        array[alpha] = 1.0
    return array


def vandermonde_squared_array(n: int) -> np.ndarray:
    array = np.ones((1,) * n)
    for i, j in combinations(range(n), 2):
        factor = np.zeros((2,) * n)
        factor[tuple(1 if k == i else 0 for k in range(n))] = 1.0
        factor[tuple(1 if k == j else 0 for k in range(n))] = -1.0
        array = signal.convolve(signal.convolve(array, factor, method='direct'), factor, method='direct')
    return array


def lower_basis(lam: Partition):
    """Partitions strictly below lambda in dominance order"""
    return [eta for eta in enumerate_partitions(lam.n, lam.weight) if eta != lam and dominance_leq(eta, lam)]


def gram_schmidt_P(lam: Partition, ctx: QContext) -> GramSchmidtResult:
    """
    m_lambda + sum_{eta < lambda} d_eta m_eta orthogonal to every m_eta,
    for the measure Delta(z)^2 on the base-q^2 Jackson simplex.
    """
    n = lam.n
    size = lam[0] + 1
    basis = lower_basis(lam)
    weight = vandermonde_squared_array(n)
    target = monomial_array(lam, size)

    if not basis:
        return GramSchmidtResult(lam, {}, target)

    arrays = [monomial_array(eta, size) for eta in basis]

    def pairing(a: np.ndarray, b: np.ndarray) -> float:
        return moment_integral(signal.convolve(signal.convolve(a, b, method='direct'), weight, method='direct'), ctx)

    gram = np.array([[pairing(a, b) for b in arrays] for a in arrays])
    rhs = -np.array([pairing(target, a) for a in arrays])

    # Jacobi scaling, the Gram entries span many orders of magnitude
    scale = 1.0 / np.sqrt(np.diag(gram))
    solution = scale * linalg.solve(gram * np.outer(scale, scale), scale * rhs, assume_a='pos')
    logger.debug(f"Gram-Schmidt for {lam.parts}: basis of {len(basis)} monomials")

    array = target + sum(d * a for d, a in zip(solution, arrays))
    return GramSchmidtResult(lam, dict(zip(basis, solution)), array)


def poly_eval(array: np.ndarray, z) -> np.ndarray:
    """Evaluate a dense coefficient array at z of shape (..., n)"""
    z = np.asarray(z, dtype=float)
    alphas = np.argwhere(array != 0)
    coefficients = array[tuple(alphas.T)]
    return np.prod(z[..., np.newaxis, :] ** alphas, axis=-1) @ coefficients


def monomial_expansion(evaluator: Callable[[np.ndarray], np.ndarray], n: int, max_part: int,
                       max_degree: int) -> Dict[Tuple[int, ...], float]:
    """
    Recover the coefficients of a polynomial with exponents alpha_i <= max_part
    and |alpha| <= max_degree by least squares on a tensor grid.
    """
    alphas = [alpha for alpha in product(range(max_part + 1), repeat=n) if sum(alpha) <= max_degree]
    axis = np.linspace(0.4, 1.6, max_part + 2)
    points = np.array(list(product(axis, repeat=n)))
    design = np.prod(points[:, np.newaxis, :] ** np.array(alphas), axis=-1)
    values = np.asarray(evaluator(points), dtype=float)
    solution, *_ = np.linalg.lstsq(design, values, rcond=None)
    return dict(zip(alphas, solution))
