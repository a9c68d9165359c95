"""
Functions on the spectral cube [0, pi/h]^n sampled on a tensor quadrature grid
"""

from itertools import permutations
from typing import Optional

import numpy as np

from apps.common.exceptions import DimensionMismatchError
from .quadrature import QuadratureRule


class SpectralFunction:
    """
    Samples f_hat(rho_{a_1}, ..., rho_{a_n}) on the tensor grid of a rule.

    Nodes with coincident coordinates carry kappa = 0 and are flagged in
    `singular`; values there are 0.
    """

    def __init__(self, n: int, rule: QuadratureRule, values, singular: Optional[np.ndarray] = None):
        values = np.asarray(values, dtype=complex)
        expected = (rule.size,) * n
        if values.shape != expected:
            raise DimensionMismatchError(f"Expected samples of shape {expected}, got {values.shape}")
        self.n = n
        self.rule = rule
        self.values = values
        self.singular = singular if singular is not None else ~rule.regular_mask(n)

    def __repr__(self):
        return f"SpectralFunction(n={self.n}, M={self.rule.M})"

    @property
    def M(self) -> int:
        return self.rule.M

    @property
    def regular(self) -> np.ndarray:
        return ~self.singular

    @classmethod
    def constant(cls, n: int, rule: QuadratureRule, value: complex = 1.0) -> 'SpectralFunction':
        function = cls(n, rule, np.full((rule.size,) * n, value, dtype=complex))
        function.values[function.singular] = 0
        return function

    def symmetry_defect(self, weights: Optional[np.ndarray] = None) -> float:
        """
        max |f(sigma rho) - f(rho)| over coordinate permutations.

        With symmetric weights w the defect is max w |f(sigma rho) - f(rho)| / max w |f|;
        w = |kappa| discounts the rounding that 1/kappa amplifies near the diagonal.
        """
        if weights is None:
            return max(
                float(np.max(np.abs(np.transpose(self.values, perm) - self.values)))
                for perm in permutations(range(self.n))
            )
        scale = float(np.max(weights * np.abs(self.values)))
        if scale == 0:
            return 0.0
        return max(
            float(np.max(weights * np.abs(np.transpose(self.values, perm) - self.values)))
            for perm in permutations(range(self.n))
        ) / scale

    def max_abs_difference(self, other: 'SpectralFunction') -> float:
        """Largest deviation on regular nodes"""
        if other.n != self.n or other.values.shape != self.values.shape:
            raise DimensionMismatchError("Spectral functions live on different grids")
        mask = self.regular & other.regular
        return float(np.max(np.abs(self.values - other.values)[mask]))
