"""
Symmetric polynomial evaluators.

Every evaluator takes z with shape (..., n) and returns shape (...), so a
whole set of quadrature or Jackson nodes is evaluated in one call.
"""

from itertools import combinations, permutations
from typing import Optional

import numpy as np

from apps.common.exceptions import CoincidentCoordinatesError, DimensionMismatchError
from .partition import Partition

COINCIDENT_RTOL = 1e-12


def _as_points(z, n: Optional[int] = None) -> np.ndarray:
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        z = z.astype(float)
    if z.ndim == 0:
        raise DimensionMismatchError("Expected a vector of coordinates, got a scalar")
    if n is not None and z.shape[-1] != n:
        raise DimensionMismatchError(f"Expected {n} coordinates, got {z.shape[-1]}")
    return z


def vandermonde(z) -> np.ndarray:
    """Delta(z) = prod_{i<j} (z_i - z_j)"""
    z = _as_points(z)
    value = np.ones(z.shape[:-1], dtype=z.dtype)
    for i, j in combinations(range(z.shape[-1]), 2):
        value = value * (z[..., i] - z[..., j])
    return value


def coincident_mask(z, rtol: float = COINCIDENT_RTOL) -> np.ndarray:
    """True where two coordinates agree to rtol relative distance"""
    z = _as_points(z)
    mask = np.zeros(z.shape[:-1], dtype=bool)
    for i, j in combinations(range(z.shape[-1]), 2):
        scale = np.maximum(np.abs(z[..., i]), np.abs(z[..., j]))
        mask |= np.abs(z[..., i] - z[..., j]) <= rtol * scale
    return mask


def elementary_all(z) -> np.ndarray:
    """(e_0, ..., e_n)(z) stacked on the last axis"""
    z = _as_points(z)
    n = z.shape[-1]
    e = np.zeros(z.shape[:-1] + (n + 1,), dtype=z.dtype)
    e[..., 0] = 1
    for i in range(n):
        e[..., 1:] = e[..., 1:] + z[..., i, np.newaxis] * e[..., :-1]
    return e


def elementary(k: int, z) -> np.ndarray:
    z = _as_points(z)
    if not 0 <= k <= z.shape[-1]:
        raise ValueError(f"k must lie in 0..{z.shape[-1]}, got {k}")
    return elementary_all(z)[..., k]


def complete_homogeneous_all(degree: int, z) -> np.ndarray:
    """(h_0, ..., h_degree)(z) from h_k = sum_i (-1)^{i-1} e_i h_{k-i}"""
    z = _as_points(z)
    e = elementary_all(z)
    n = z.shape[-1]
    h = np.zeros(z.shape[:-1] + (degree + 1,), dtype=z.dtype)
    h[..., 0] = 1
    for k in range(1, degree + 1):
        for i in range(1, min(k, n) + 1):
            h[..., k] += (-1) ** (i - 1) * e[..., i] * h[..., k - i]
    return h


def complete_homogeneous(k: int, z) -> np.ndarray:
    if k < 0:
        return np.zeros(_as_points(z).shape[:-1])
    return complete_homogeneous_all(k, z)[..., k]


def monomial(lam: Partition, z) -> np.ndarray:
    """m_lambda(z): sum over the distinct rearrangements of lambda"""
    z = _as_points(z, lam.n)
    value = np.zeros(z.shape[:-1], dtype=z.dtype)
    for alpha in set(permutations(lam.parts)):
        value = value + np.prod(z ** np.asarray(alpha), axis=-1)
    return value


def scaled_det(matrix) -> np.ndarray:
    """Determinant of a stack of matrices after equilibrating each column"""
    matrix = np.asarray(matrix)
    scale = np.max(np.abs(matrix), axis=-2, keepdims=True)
    scale = np.where(scale == 0, 1.0, scale)
    return np.linalg.det(matrix / scale) * np.prod(scale[..., 0, :], axis=-1)


def alternant(exponents, z) -> np.ndarray:
    """det(z_i^{m_j})"""
    z = _as_points(z, len(exponents))
    return scaled_det(z[..., :, np.newaxis] ** np.asarray(exponents))


def schur(lam: Partition, z) -> np.ndarray:
    """
    Schur polynomial as the bialternant det(z_i^{lambda_j + n - j}) / Delta(z).

    Raises:
        CoincidentCoordinatesError: two coordinates closer than 1e-12 relative
    """
    z = _as_points(z, lam.n)
    if np.any(coincident_mask(z)):
        raise CoincidentCoordinatesError("Bialternant Schur evaluation at repeated coordinates")
    return alternant(lam.exponents(), z) / vandermonde(z)


def schur_jacobi_trudi(lam: Partition, z) -> np.ndarray:
    """
    Schur polynomial as det(h_{lambda_i - i + j}); no division, so it is
    also valid at repeated coordinates.
    """
    z = _as_points(z, lam.n)
    n = lam.n
    h = complete_homogeneous_all(lam[0] + n, z)
    matrix = np.zeros(z.shape[:-1] + (n, n), dtype=h.dtype)
    for i in range(n):
        for j in range(n):
            index = lam[i] - i + j
            if index >= 0:
                matrix[..., i, j] = h[..., index]
    return np.linalg.det(matrix)


def sym_eval(kind: str, vec, lam: Optional[Partition] = None, k: Optional[int] = None):
    """
    Dispatch on kind in {'monomial', 'elementary', 'schur', 'vandermonde'}.
    """
    if kind == 'monomial':
        return monomial(lam, vec)
    if kind == 'elementary':
        return elementary(k, vec)
    if kind == 'schur':
        return schur(lam, vec)
    if kind == 'vandermonde':
        return vandermonde(vec)
    raise ValueError(f"Unknown symmetric function kind: {kind}")
