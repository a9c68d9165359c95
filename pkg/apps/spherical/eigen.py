"""
Eigenvalues of the q-difference operators on spherical functions
"""

import itertools
import math
from typing import Iterable, Sequence

import numpy as np

from apps.partitions.partition import Partition, eta_shift
from apps.partitions.symmetric import elementary
from apps.qcore.context import QContext
from apps.qcore.special import qpow

INVARIANCE_TOL = 1e-12


def a_eigen(l, ctx: QContext):
    """
    a(l) = (1 - q^{-2l})(1 - q^{2l+2}) / (1 - q^2)^2

    Real input gives a real result; a(l) = a(-1-l).
    """
    real_input = np.isrealobj(l)
    value = (1 - np.asarray(qpow(ctx.q, -2 * np.asarray(l, dtype=complex)))) \
        * (1 - np.asarray(qpow(ctx.q, 2 * np.asarray(l, dtype=complex) + 2))) / (1 - ctx.q2) ** 2
    if real_input:
        value = value.real
    if np.ndim(value) == 0:
        return float(value) if real_input else complex(value)
    return value


def a_principal(rho, ctx: QContext):
    """a(-1/2 + i rho) = (1 - 2q cos(rho h) + q^2) / (1 - q^2)^2, real and positive"""
    rho = np.asarray(rho, dtype=float)
    q = ctx.q
    return (1 - 2 * q * np.cos(rho * ctx.h) + q * q) / (1 - q * q) ** 2


def _check_k(k: int, n: int):
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")


def eigen_tuple(lam: Partition, k: int, ctx: QContext) -> float:
    """e_k(a(lambda_1 + n - 1), ..., a(lambda_n))"""
    _check_k(k, lam.n)
    values = np.array([a_eigen(float(m), ctx) for m in lam.exponents()])
    return float(elementary(k, values))


def principal_eigen_tuple(rho, k: int, ctx: QContext) -> np.ndarray:
    """e_k(a(-1/2 + i rho_1), ..., a(-1/2 + i rho_n)) for rho of shape (..., n)"""
    rho = np.asarray(rho, dtype=float)
    _check_k(k, rho.shape[-1])
    return elementary(k, a_principal(rho, ctx))


def principal_eigen_bound(k: int, n: int, ctx: QContext) -> float:
    """sup over the spectral cube of |e_k(a(-1/2 + i rho))|"""
    _check_k(k, n)
    a_max = a_principal(math.pi / ctx.h, ctx)
    return math.comb(n, k) * float(a_max) ** k


def psi(parts: Sequence[int], k: int, ctx: QContext) -> float:
    """psi_k(lambda hat) = e_k(a(eta(lambda) + delta)), lambda any integer vector"""
    n = len(parts)
    _check_k(k, n)
    shifted = [e + (n - 1 - i) for i, e in enumerate(eta_shift(parts))]
    return float(elementary(k, np.array([a_eigen(x, ctx) for x in shifted])))


def _restricted_weyl_orbit(parts: Sequence[int]) -> Iterable[tuple]:
    """All permutations combined with all sign changes"""
    for perm in itertools.permutations(parts):
        for signs in itertools.product((1, -1), repeat=len(parts)):
            yield tuple(s * p for s, p in zip(signs, perm))


def wres_check(parts: Sequence[int], k: int, ctx: QContext) -> bool:
    """True iff psi_k is unchanged on the permutation/sign-change orbit of parts"""
    reference = psi(parts, k, ctx)
    scale = max(1.0, abs(reference))
    return all(
        abs(psi(image, k, ctx) - reference) <= INVARIANCE_TOL * scale
        for image in _restricted_weyl_orbit(parts)
    )
