"""
Numerical context shared by every q-computation
"""

import math
from dataclasses import dataclass, replace

from django.conf import settings


@dataclass(frozen=True)
class QContext:
    """
    Immutable deformation parameter plus truncation controls.

    All evaluations downstream are deterministic functions of their inputs
    and the context, so a context doubles as a cache-key component.
    """

    q: float
    series_tol: float = 1e-15
    product_tol: float = 1e-16
    max_terms: int = 500

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if self.series_tol <= 0 or self.product_tol <= 0:
            raise ValueError("Tolerances must be strictly positive")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be at least 1, got {self.max_terms}")
        object.__setattr__(self, 'q', float(self.q))

    @property
    def h(self) -> float:
        """h = -2 ln q, so q^{2i rho} = exp(-i rho h)"""
        return -2.0 * math.log(self.q)

    @property
    def q2(self) -> float:
        return self.q * self.q

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def rho_max(self) -> float:
        """Right end pi/h of the principal-series interval"""
        return math.pi / self.h

    def with_q(self, q: float) -> 'QContext':
        return replace(self, q=q)

    @classmethod
    def from_settings(cls, **overrides) -> 'QContext':
        """Build a context from the QBALL_* Django settings, flags win"""
        values = {
            'q': getattr(settings, 'QBALL_Q', 0.5),
            'series_tol': getattr(settings, 'QBALL_SERIES_TOL', 1e-15),
            'product_tol': getattr(settings, 'QBALL_PRODUCT_TOL', 1e-16),
            'max_terms': getattr(settings, 'QBALL_MAX_TERMS', 500),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
