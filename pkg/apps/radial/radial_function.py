"""
Finitely supported functions on the radial grid q^{-2(lambda + delta)}
"""

from numbers import Number
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from apps.common.exceptions import DimensionMismatchError
from apps.partitions.partition import Partition, enumerate_partitions


def window_order(lam: Partition) -> Tuple:
    """Sort key matching enumerate_partitions"""
    return (lam.weight, tuple(-p for p in lam.parts))


class RadialFunction:
    """
    A table Partition -> complex with finite support.

    Absent partitions mean value 0; exact zeros are never stored.
    """

    def __init__(self, n: int, support: Optional[Dict] = None):
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        self.n = n
        self._values: Dict[Partition, complex] = {}
        for lam, value in (support or {}).items():
            self[lam] = value

    def __setitem__(self, lam, value):
        if not isinstance(lam, Partition):
            lam = Partition(lam)
        if lam.n != self.n:
            raise DimensionMismatchError(f"{lam} does not belong to Lambda_{self.n}")
        value = complex(value)
        if value == 0:
            self._values.pop(lam, None)
        else:
            self._values[lam] = value

    def __call__(self, lam) -> complex:
        if not isinstance(lam, Partition):
            lam = Partition(lam)
        return self._values.get(lam, 0j)

    def __len__(self):
        return len(self._values)

    def __iter__(self) -> Iterator[Partition]:
        return iter(self.support)

    def __repr__(self):
        return f"RadialFunction(n={self.n}, support={len(self._values)} points)"

    @property
    def support(self) -> List[Partition]:
        return sorted(self._values, key=window_order)

    def items(self) -> List[Tuple[Partition, complex]]:
        return [(lam, self._values[lam]) for lam in self.support]

    @property
    def max_weight(self) -> int:
        return max((lam.weight for lam in self._values), default=0)

    def copy(self) -> 'RadialFunction':
        return RadialFunction(self.n, dict(self._values))

    # -- vector space structure ------------------------------------------------

    def _check_compatible(self, other: 'RadialFunction'):
        if not isinstance(other, RadialFunction):
            raise TypeError(f"Expected a RadialFunction, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatchError(f"Cannot combine radial functions with n={self.n} and n={other.n}")

    def __add__(self, other: 'RadialFunction') -> 'RadialFunction':
        self._check_compatible(other)
        result = self.copy()
        for lam, value in other._values.items():
            result[lam] = result(lam) + value
        return result

    def __neg__(self) -> 'RadialFunction':
        return self * -1

    def __sub__(self, other: 'RadialFunction') -> 'RadialFunction':
        return self + (-other)

    def __mul__(self, scalar) -> 'RadialFunction':
        if not isinstance(scalar, Number):
            return NotImplemented
        return RadialFunction(self.n, {lam: scalar * value for lam, value in self._values.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> 'RadialFunction':
        return self * (1 / scalar)

    # -- windows ---------------------------------------------------------------

    def restrict(self, max_weight: int) -> 'RadialFunction':
        return RadialFunction(self.n, {lam: v for lam, v in self._values.items() if lam.weight <= max_weight})

    def to_vector(self, partitions: Iterable[Partition]) -> np.ndarray:
        return np.array([self(lam) for lam in partitions], dtype=complex)

    def max_abs(self, max_weight: Optional[int] = None) -> float:
        values = [abs(v) for lam, v in self._values.items() if max_weight is None or lam.weight <= max_weight]
        return max(values, default=0.0)

    def max_abs_difference(self, other: 'RadialFunction', max_weight: Optional[int] = None) -> float:
        return (self - other).max_abs(max_weight)

    # -- constructors ----------------------------------------------------------

    @classmethod
    def characteristic(cls, lam: Partition) -> 'RadialFunction':
        """chi_lambda"""
        return cls(lam.n, {lam: 1.0})

    @classmethod
    def f0(cls, n: int) -> 'RadialFunction':
        """The cyclic vector: chi of the corner point q^{-2 delta}"""
        return cls.characteristic(Partition.zero(n))

    @classmethod
    def from_vector(cls, n: int, partitions: Iterable[Partition], values) -> 'RadialFunction':
        return cls(n, dict(zip(partitions, values)))

    @classmethod
    def from_evaluator(cls, func: Callable[[Partition], complex], n: int, max_weight: int) -> 'RadialFunction':
        return cls(n, {lam: func(lam) for lam in enumerate_partitions(n, max_weight)})
