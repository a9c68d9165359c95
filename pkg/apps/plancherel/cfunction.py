"""
The q-analogue of the Harish-Chandra c-function, the disk Plancherel density
d sigma, the kappa factor and the matrix-ball density d Sigma.
"""

import logging
import math

import numpy as np

from apps.partitions.coordinates import corner_point
from apps.partitions.symmetric import vandermonde
from apps.qcore.context import QContext
from apps.qcore.series import phi_grid
from apps.qcore.special import infinite_product, qgamma, qpochhammer
from apps.radial.measure import norm_constant

logger = logging.getLogger(__name__)

NORMALIZATIONS = ('unitary', 'printed')


def c_function(l, ctx: QContext):
    """
    c(l) = Gamma_{q^2}(2l + 1) / Gamma_{q^2}(l + 1)^2

    Raises:
        PoleError: 2l + 1 sits on a q-Gamma pole
    """
    l = np.asarray(l, dtype=complex)
    value = np.asarray(qgamma(2 * l + 1, ctx)) / np.asarray(qgamma(l + 1, ctx)) ** 2
    return complex(value) if value.ndim == 0 else value


def sigma_weight(rho, ctx: QContext):
    """
    Density of d sigma on [0, pi/h]:

        h / (2 pi (1 - q^2)) * 1 / (c(-1/2 + i rho) c(-1/2 - i rho))
          = h / (2 pi (1 - q^2)) * (q^2; q^2)^2 |(e^{2i theta}; q^2)|^2 / |(q e^{i theta}; q^2)|^4

    with theta = rho h. The factor 1 - e^{2i theta} makes both endpoints zero.
    """
    rho = np.asarray(rho, dtype=float)
    q, q2 = ctx.q, ctx.q2
    theta = rho * ctx.h

    numerator, _, _ = infinite_product(np.exp(2j * theta), q2, ctx)
    denominator, _, _ = infinite_product(q * np.exp(1j * theta), q2, ctx)
    base, _, _ = infinite_product(q2, q2, ctx)

    density = (abs(complex(base)) ** 2 * np.abs(numerator) ** 2 / np.abs(denominator) ** 4
               * ctx.h / (2 * math.pi * (1 - q2)))
    return float(density) if density.ndim == 0 else density


def kappa(rho, ctx: QContext):
    """
    kappa(rho) = (U f_0)(rho) = (1 - q^2)^{n^2} Phi_{-1/2 + i rho}(q^{-2 delta})

    Vanishes when two coordinates of rho coincide.
    """
    rho = np.asarray(rho, dtype=float)
    n = rho.shape[-1]
    table = phi_grid(-0.5 + 1j * rho, n - 1, ctx)
    # entries Phi_{l_j}(u_i) with u_i = q^{-2(n-1-i)}
    matrix = np.swapaxes(table[..., ::-1], -1, -2)
    corner = float(vandermonde(corner_point(n, ctx)))
    value = (1 - ctx.q2) ** (n * n) * np.linalg.det(matrix).real / corner
    return float(value) if value.ndim == 0 else value


def kappa_printed_constant(n: int, ctx: QContext) -> float:
    """The constant in front of the Vandermonde factorisation of U f_0 as printed"""
    return norm_constant(n, ctx)


def kappa_ratio(rho, ctx: QContext):
    """kappa / prod_{k<j} (x_j - x_k) with x_j = q^{2i rho_j} + q^{-2i rho_j}"""
    rho = np.asarray(rho, dtype=float)
    x = 2 * np.cos(rho * ctx.h)
    return kappa(rho, ctx) / (-1) ** (rho.shape[-1] * (rho.shape[-1] - 1) // 2) / vandermonde(x)


def kappa_vandermonde_constant(n: int, ctx: QContext) -> float:
    """
    The value of kappa_ratio, constant in rho:

        (-1)^{n(n-1)/2} (1-q^2)^{n^2} q^{n(n-1)/2} / (prod_{k<n} (q^2; q^2)_k * Delta(q^{-2 delta}))

    On the grid Phi_l(q^{-2k}) is a polynomial of degree k in q x with
    leading coefficient 1/(q^2; q^2)_k.
    """
    pairs = n * (n - 1) // 2
    leads = math.prod(complex(qpochhammer(ctx.q2, ctx.q2, k)).real for k in range(n))
    corner = float(vandermonde(corner_point(n, ctx)))
    return (-1) ** pairs * (1 - ctx.q2) ** (n * n) * ctx.q ** pairs / (leads * corner)


def big_sigma_weight(rho, ctx: QContext, normalization: str = 'unitary'):
    """
    Density of d Sigma on the cube (integrals over the region are cube / n!).

    unitary: kappa^2 prod sigma / N
    printed: kappa^2 n! N prod sigma
    """
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"Unknown normalization: {normalization}")
    rho = np.asarray(rho, dtype=float)
    n = rho.shape[-1]
    constant = norm_constant(n, ctx)
    density = kappa(rho, ctx) ** 2 * np.prod(sigma_weight(rho, ctx), axis=-1)
    if normalization == 'unitary':
        return density / constant
    return density * math.factorial(n) * constant
