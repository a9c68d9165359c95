"""
Run configuration shared by the management commands
"""

from dataclasses import dataclass
from typing import Optional

from django.conf import settings

from apps.plancherel.quadrature import QuadratureRule, composite_simpson
from apps.qcore.context import QContext

OUTPUT_FORMATS = ('json', 'csv')


def default_quad_nodes(n: int) -> int:
    """Simpson subintervals per axis: the disk needs a finer rule"""
    if n == 1:
        return getattr(settings, 'QBALL_QUAD_NODES_DISK', 2048)
    return getattr(settings, 'QBALL_QUAD_NODES', 256)


@dataclass(frozen=True)
class RunConfig:
    """
    Validated parameters of one command invocation.

    Built by RunConfigSerializer; every command is a deterministic function
    of its RunConfig.
    """

    q: float
    n: int
    max_weight: int
    quad_nodes: int
    tol: Optional[float] = None
    output_format: str = 'json'
    seed: int = 0

    def context(self) -> QContext:
        return QContext.from_settings(q=self.q)

    def rule(self, ctx: Optional[QContext] = None) -> QuadratureRule:
        return composite_simpson(self.quad_nodes, ctx or self.context())

    def tolerance(self, default: float) -> float:
        """--tol overrides every nonzero default; exact checks stay exact"""
        if self.tol is None or default == 0:
            return default
        return self.tol
