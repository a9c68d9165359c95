"""
Coordinates of the radial grid and of its spectrum
"""

import math

import numpy as np

from apps.qcore.context import QContext
from .partition import Partition
from .symmetric import elementary_all


def grid_point(lam: Partition, ctx: QContext) -> np.ndarray:
    """u = q^{-2(lambda + delta)}, strictly decreasing coordinates >= 1"""
    return np.array([ctx.q ** (-2 * m) for m in lam.exponents()])


def corner_point(n: int, ctx: QContext) -> np.ndarray:
    """q^{-2 delta}, the grid point of the zero partition"""
    return grid_point(Partition.zero(n), ctx)


def grid_points(partitions, ctx: QContext) -> np.ndarray:
    """Stacked grid points, shape (len(partitions), n)"""
    return np.array([grid_point(lam, ctx) for lam in partitions])


def sigma_scale(n: int, ctx: QContext) -> np.ndarray:
    """q^{k(k-1)} for k = 1..n"""
    return np.array([ctx.q ** (k * (k - 1)) for k in range(1, n + 1)])


def sigma_point(lam: Partition, ctx: QContext) -> np.ndarray:
    """x_k = q^{k(k-1)} e_k(q^{-2(lambda + delta)}), k = 1..n"""
    e = elementary_all(grid_point(lam, ctx))
    return sigma_scale(lam.n, ctx) * e[1:]


def partition_from_sigma_point(x, n: int, ctx: QContext, rtol: float = 1e-9) -> Partition:
    """
    Invert sigma_point: recover u as the roots of
    t^n - e_1 t^{n-1} + e_2 t^{n-2} - ... and read off the exponents.

    Raises:
        ValueError: x is not the image of a partition
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"Expected {n} spectral coordinates, got shape {x.shape}")

    e = x / sigma_scale(n, ctx)
    coefficients = np.concatenate(([1.0], [(-1) ** k * e[k - 1] for k in range(1, n + 1)]))
    roots = np.roots(coefficients)
    u = np.sort(roots.real)[::-1]

    if np.any(u <= 0):
        raise ValueError(f"Point {x.tolist()} has nonpositive preimage coordinates")
    exponents = [round(math.log(value) / ctx.h) for value in u]
    try:
        lam = Partition.from_exponents(exponents)
    except ValueError as exc:
        raise ValueError(f"Point {x.tolist()} is not on the spectrum grid") from exc

    image = sigma_point(lam, ctx)
    if np.any(np.abs(image - x) > rtol * np.abs(x)):
        raise ValueError(f"Point {x.tolist()} is not on the spectrum grid")
    return lam
