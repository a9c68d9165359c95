"""
Composite Simpson quadrature on the spectral interval [0, pi/h] and its
tensor powers on the cube.
"""

import logging
from dataclasses import dataclass
from functools import reduce
from itertools import combinations

import numpy as np
from scipy.integrate import newton_cotes

from apps.qcore.context import QContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """M subintervals (even), M + 1 nodes on [0, upper]"""

    M: int
    nodes: np.ndarray
    weights: np.ndarray
    upper: float

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ValueError("Quadrature weights must be positive")
        if abs(self.weights.sum() - self.upper) > 1e-12 * self.upper:
            raise ValueError("Quadrature weights do not integrate 1 exactly")

    @property
    def size(self) -> int:
        return len(self.nodes)

    def tensor_nodes(self, n: int) -> np.ndarray:
        """Node coordinates, shape (M+1,)*n + (n,)"""
        grids = np.meshgrid(*([self.nodes] * n), indexing='ij')
        return np.stack(grids, axis=-1)

    def tensor_weights(self, n: int) -> np.ndarray:
        return reduce(np.multiply.outer, [self.weights] * n)

    def regular_mask(self, n: int) -> np.ndarray:
        """False on tensor nodes with two equal coordinates"""
        indices = np.indices((self.size,) * n)
        mask = np.ones((self.size,) * n, dtype=bool)
        for i, j in combinations(range(n), 2):
            mask &= indices[i] != indices[j]
        return mask

    def integrate(self, values: np.ndarray) -> complex:
        """Tensor rule applied over every axis of values"""
        result = values
        for _ in range(values.ndim):
            result = np.tensordot(result, self.weights, axes=([-1], [0]))
        return complex(result)


def composite_simpson(M: int, ctx: QContext) -> QuadratureRule:
    """Simpson panels of two subintervals each over [0, pi/h]"""
    if M < 2 or M % 2:
        raise ValueError(f"Simpson needs an even number of subintervals, got {M}")
    upper = ctx.rho_max
    step = upper / M
    panel, _ = newton_cotes(2, 1)

    weights = np.zeros(M + 1)
    for start in range(0, M, 2):
        weights[start:start + 3] += panel * step
    nodes = np.linspace(0.0, upper, M + 1)
    logger.debug(f"Simpson rule with {M} subintervals on [0, {upper:.6g}]")
    return QuadratureRule(M, nodes, weights, upper)


def singular_fraction(rule: QuadratureRule, n: int) -> float:
    """Share of tensor nodes with coincident coordinates"""
    return 1.0 - float(np.mean(rule.regular_mask(n))) if n > 1 else 0.0
