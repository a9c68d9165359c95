"""
The basic hypergeometric function Phi_l(u) behind the disk spherical functions

    Phi_l(u) = 3phi2(q^{-2l}, q^{2l+2}, u; q^2, 0; q^2, q^2)

Off the grid the series is summed directly. On grid points u = q^{-2k} the
series cancels catastrophically for large k (terms of size q^{-k^2} add up to
something of size q^{k}), so grid values come from the three-term recurrence
in k that these functions satisfy there.
"""

import logging
import math
from typing import Optional

import numpy as np

from apps.common.exceptions import ConvergenceError
from .context import QContext
from .special import compensated_sum, qpow

logger = logging.getLogger(__name__)

GRID_RTOL = 1e-12


def grid_index(u: float, ctx: QContext) -> Optional[int]:
    """k with u = q^{-2k} to 1e-12 relative, None when u is off the grid"""
    if u <= 0:
        return None
    k = round(math.log(u) / ctx.h)
    if k < 0:
        return None
    if abs(u - math.exp(k * ctx.h)) <= GRID_RTOL * u:
        return k
    return None


def _terminating_degree(l: complex) -> Optional[int]:
    """m when one upper parameter equals q^{-2m}, i.e. l = m or l = -1-m"""
    if abs(l.imag) > 1e-12:
        return None
    for candidate in (l.real, -1.0 - l.real):
        m = round(candidate)
        if m >= 0 and abs(candidate - m) < 1e-12:
            return m
    return None


def phi_series(l: complex, u: complex, ctx: QContext) -> complex:
    """Direct summation of the series with compensated accumulation"""
    q2 = ctx.q2
    upper_a = complex(qpow(ctx.q, -2 * l))
    upper_b = complex(qpow(ctx.q, 2 * l + 2))
    degree = _terminating_degree(l)

    terms = [1.0 + 0.0j]
    term = 1.0 + 0.0j
    power = 1.0  # q^{2j}

    for j in range(ctx.max_terms):
        if degree is not None and j >= degree:
            return compensated_sum(terms)

        term *= (1 - upper_a * power) * (1 - upper_b * power) * (1 - u * power) * q2
        term /= (1 - power * q2) ** 2
        power *= q2
        terms.append(term)

        if degree is None:
            # past the growth region every ratio is below one
            decaying = max(abs(upper_a), abs(upper_b), abs(u)) * power < 1.0
            scale = max(1.0, abs(sum(terms)))
            if decaying and abs(term) < ctx.series_tol * scale:
                logger.debug(f"Phi_{l}({u}) series converged after {j + 2} terms")
                return compensated_sum(terms)

    raise ConvergenceError(
        f"Phi_l series for l={l}, u={u} did not converge in {ctx.max_terms} terms",
        terms=ctx.max_terms,
        last_term=abs(term),
    )


def phi_grid(l, k_max: int, ctx: QContext) -> np.ndarray:
    """
    Phi_l(q^{-2k}) for k = 0..k_max.

    Uses Phi_0 = 1 and
        (1 - q^{2k+2}) Phi_{k+1} = (s - 2 q^{2k+2}) Phi_k - q^2 (1 - q^{2k}) Phi_{k-1}
    with s = q^{-2l} + q^{2l+2}, the only place l enters.

    Args:
        l: scalar or array of spectral parameters
        k_max: last grid exponent

    Returns:
        complex array of shape l.shape + (k_max + 1,)
    """
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")

    l = np.asarray(l, dtype=complex)
    q2 = ctx.q2
    s = np.asarray(qpow(ctx.q, -2 * l)) + np.asarray(qpow(ctx.q, 2 * l + 2))

    table = np.empty(l.shape + (k_max + 1,), dtype=complex)
    table[..., 0] = 1.0
    if k_max >= 1:
        table[..., 1] = (s - 2 * q2) / (1 - q2)

    for k in range(1, k_max):
        p_next = q2 ** (k + 1)
        table[..., k + 1] = (
            (s - 2 * p_next) * table[..., k] - q2 * (1 - q2 ** k) * table[..., k - 1]
        ) / (1 - p_next)

    return table


def phi_one(l: complex, u: complex, ctx: QContext) -> complex:
    """
    Phi_l(u); grid points u = q^{-2k} are routed through phi_grid.

    Phi_l(1) = 1 for every l and Phi_l = Phi_{-1-l}.
    """
    l = complex(l)
    u = complex(u)

    if u.imag == 0.0:
        k = grid_index(u.real, ctx)
        if k is not None:
            return complex(phi_grid(l, k, ctx)[k])

    return phi_series(l, u, ctx)
