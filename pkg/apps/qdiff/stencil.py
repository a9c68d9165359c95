"""
The second order q-difference operator

    Box f(u) = c_-(u) f(q^{-2} u) + c_0(u) f(u) + c_+(u) f(q^2 u)

on the half-line grid u = q^{-2m}, m >= 0. Grid functions of n variables are
dicts keyed by exponent tuples m = (m_1, ..., m_n); absent keys are zero.
"""

from typing import Dict, Tuple

from apps.qcore.context import QContext

GridFunction = Dict[Tuple[int, ...], complex]


def box_stencil(u: float, ctx: QContext) -> Tuple[float, float, float]:
    """
    (c_-, c_0, c_+) at u, acting on f(q^{-2}u), f(u), f(q^2 u).

    c_+(1) = 0, so the node below the grid never contributes.
    """
    if u <= 0:
        raise ValueError(f"Stencil needs u > 0, got {u}")
    q, q2 = ctx.q, ctx.q2
    denominator = (1 / q - q) ** 2 * u
    c_minus = (1 - u / q2) / denominator
    c_plus = (1 - u) / denominator
    return c_minus, -(c_minus + c_plus), c_plus


def stencil_at(m: int, ctx: QContext) -> Tuple[float, float, float]:
    """box_stencil at the grid node q^{-2m}; c_+ is exactly 0 at m = 0"""
    c_minus, c_zero, c_plus = box_stencil(ctx.q ** (-2 * m), ctx)
    if m == 0:
        c_plus = 0.0
    return c_minus, c_zero, c_plus


def apply_box(F: GridFunction, axis: int, ctx: QContext) -> GridFunction:
    """
    Box acting on variable number `axis` (1-based) of a finitely supported
    grid function; the support grows by one step each way along that axis.
    """
    if not F:
        return {}
    n = len(next(iter(F)))
    if not 1 <= axis <= n:
        raise ValueError(f"axis must lie in 1..{n}, got {axis}")
    i = axis - 1

    targets = set()
    for m in F:
        for step in (-1, 0, 1):
            if m[i] + step >= 0:
                targets.add(m[:i] + (m[i] + step,) + m[i + 1:])

    result: GridFunction = {}
    for t in targets:
        c_minus, c_zero, c_plus = stencil_at(t[i], ctx)
        value = c_zero * F.get(t, 0)
        value += c_minus * F.get(t[:i] + (t[i] + 1,) + t[i + 1:], 0)
        if t[i] > 0:
            value += c_plus * F.get(t[:i] + (t[i] - 1,) + t[i + 1:], 0)
        if value != 0:
            result[t] = value
    return result


def f0_stencil_coefficients(k: int, ctx: QContext) -> Tuple[float, float, float]:
    """
    Box chi_k = c_{k,-1} chi_{k-1} + c_{k,0} chi_k + c_{k,1} chi_{k+1}
    for the indicator chi_k of q^{-2k}; c_{0,-1} is 0 (chi_{-1} is off the grid).
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    lower = stencil_at(k - 1, ctx)[0] if k > 0 else 0.0
    return lower, stencil_at(k, ctx)[1], stencil_at(k + 1, ctx)[2]
