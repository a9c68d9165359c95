"""
Partitions with at most n parts, the dominance order and the
spherical-weight maps.
"""

from functools import lru_cache
from itertools import accumulate
from typing import Iterable, Iterator, List, Tuple

from apps.common.exceptions import DimensionMismatchError


class Partition:
    """
    A weakly decreasing n-tuple of nonnegative integers.

    Zero parts are kept, so (1, 0) and (1, 0, 0) are different partitions
    living in Lambda_2 and Lambda_3.
    """

    __slots__ = ('parts',)

    def __init__(self, parts: Iterable[int]):
        parts = tuple(parts)
        if not parts:
            raise ValueError("A partition needs at least one part")
        for p in parts:
            if int(p) != p or p < 0:
                raise ValueError(f"Partition parts must be nonnegative integers, got {parts}")
        parts = tuple(int(p) for p in parts)
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"Partition parts must be weakly decreasing, got {parts}")
        object.__setattr__(self, 'parts', parts)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    def __repr__(self):
        return f"Partition({self.parts})"

    def __len__(self):
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, index):
        return self.parts[index]

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        return NotImplemented

    def __hash__(self):
        return hash(('Partition', self.parts))

    def __reduce__(self):
        return (Partition, (self.parts,))

    @property
    def n(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        """|lambda|"""
        return sum(self.parts)

    def exponents(self) -> Tuple[int, ...]:
        """lambda + delta, strictly decreasing"""
        n = self.n
        return tuple(p + n - 1 - i for i, p in enumerate(self.parts))

    def to_list(self) -> List[int]:
        return list(self.parts)

    @classmethod
    def zero(cls, n: int) -> 'Partition':
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        return cls((0,) * n)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> 'Partition':
        """Inverse of exponents(): subtract the staircase"""
        exponents = tuple(exponents)
        n = len(exponents)
        return cls(m - (n - 1 - i) for i, m in enumerate(exponents))


def delta_staircase(n: int) -> Partition:
    """delta = (n-1, ..., 1, 0)"""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return Partition(range(n - 1, -1, -1))


def _descending(weight: int, parts_left: int, max_part: int) -> Iterator[Tuple[int, ...]]:
    if weight == 0:
        yield ()
        return
    if parts_left == 0:
        return
    for first in range(min(weight, max_part), 0, -1):
        for rest in _descending(weight - first, parts_left - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=256)
def _window(n: int, max_weight: int) -> Tuple[Partition, ...]:
    window = []
    for weight in range(max_weight + 1):
        for parts in _descending(weight, n, weight):
            window.append(Partition(parts + (0,) * (n - len(parts))))
    return tuple(window)


def enumerate_partitions(n: int, max_weight: int) -> List[Partition]:
    """
    All lambda in Lambda_n with |lambda| <= max_weight.

    Ordered by ascending weight, lexicographically decreasing within a weight.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if max_weight < 0:
        raise ValueError(f"max_weight must be nonnegative, got {max_weight}")
    return list(_window(n, max_weight))


@lru_cache(maxsize=1024)
def count_partitions(weight: int, n: int) -> int:
    """Partitions of weight into at most n parts, p(w, n) = p(w, n-1) + p(w-n, n)"""
    if weight == 0:
        return 1
    if weight < 0 or n == 0:
        return 0
    return count_partitions(weight, n - 1) + count_partitions(weight - n, n)


def check_same_length(*partitions: Partition) -> int:
    lengths = {p.n for p in partitions}
    if len(lengths) != 1:
        raise DimensionMismatchError(f"Partitions of different lengths: {partitions}")
    return lengths.pop()


def dominance_leq(eta: Partition, lam: Partition) -> bool:
    """
    eta <= lambda iff every leading partial sum of eta is at most that of lambda.

    Applied literally, so |eta| < |lambda| is allowed.
    """
    check_same_length(eta, lam)
    return all(a <= b for a, b in zip(accumulate(eta), accumulate(lam)))


def hat_weight(lam: Partition) -> Tuple[int, ...]:
    """Highest weight (l1-l2, ..., l_{n-1}-l_n, 2 l_n, l_{n-1}-l_n, ..., l1-l2)"""
    diffs = [lam[i] - lam[i + 1] for i in range(lam.n - 1)]
    return tuple(diffs + [2 * lam[lam.n - 1]] + diffs[::-1])


def fundamental_weight(k: int, n: int) -> Tuple[int, ...]:
    """mu_k = hat_weight(1^k)"""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    return hat_weight(Partition((1,) * k + (0,) * (n - k)))


def eta_shift(parts: Iterable[int]) -> Tuple[float, ...]:
    """eta(lambda)_i = lambda_i - (2n - 2i + 1)/2 for i = 1..n"""
    parts = tuple(parts)
    n = len(parts)
    return tuple(p - (2 * n - 2 * i - 1) / 2 for i, p in enumerate(parts))
