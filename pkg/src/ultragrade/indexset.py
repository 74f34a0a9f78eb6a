"""Eventually periodic subsets of the natural numbers.

Membership is prefix[i] for i < len(prefix) and period[(i - len(prefix)) %
len(period)] afterwards.  Every value is kept in canonical form (minimal
period first, then minimal prefix), so structural equality coincides with
set equality and the class is closed under the Boolean operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Callable, Iterable, Iterator


def _minimal_period(bits: tuple[bool, ...]) -> tuple[bool, ...]:
    n = len(bits)
    for d in range(1, n):
        if n % d == 0 and all(bits[i] == bits[i % d] for i in range(n)):
            return bits[:d]
    return bits


@dataclass(frozen=True)
class IndexSet:
    prefix: tuple[bool, ...]
    period: tuple[bool, ...]

    @staticmethod
    def make(prefix: Iterable[bool], period: Iterable[bool]) -> "IndexSet":
        pre = [bool(b) for b in prefix]
        per = [bool(b) for b in _minimal_period(tuple(bool(b) for b in period))]
        if not per:
            raise ValueError("period must be nonempty")
        # absorb prefix bits that agree with the (rotated) period
        while pre and pre[-1] == per[-1]:
            pre.pop()
            per = [per[-1]] + per[:-1]
        return IndexSet(tuple(pre), _minimal_period(tuple(per)))

    @staticmethod
    def empty() -> "IndexSet":
        return IndexSet((), (False,))

    @staticmethod
    def full() -> "IndexSet":
        return IndexSet((), (True,))

    @staticmethod
    def from_indices(indices: Iterable[int]) -> "IndexSet":
        idx = set(indices)
        if any(i < 0 for i in idx):
            raise ValueError("indices must be nonnegative")
        if not idx:
            return IndexSet.empty()
        top = max(idx)
        return IndexSet.make([i in idx for i in range(top + 1)], (False,))

    @staticmethod
    def progression(a: int, b: int, n0: int = 0) -> "IndexSet":
        """The set {a*n + b : n >= n0}."""
        if a < 0:
            raise ValueError("step must be nonnegative")
        start = a * n0 + b
        if start < 0:
            raise ValueError("progression leaves the naturals")
        if a == 0:
            return IndexSet.from_indices([start])
        period = [i == 0 for i in range(a)]
        return IndexSet.make([False] * start, period)

    # -- membership and structure -------------------------------------

    def member(self, i: int) -> bool:
        if i < 0:
            return False
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def is_finite(self) -> bool:
        return not any(self.period)

    def is_cofinite(self) -> bool:
        return all(self.period)

    def is_empty(self) -> bool:
        return self.is_finite() and not any(self.prefix)

    def cardinality(self) -> int | None:
        """Number of elements, or None when infinite."""
        if not self.is_finite():
            return None
        return sum(self.prefix)

    def min_element(self) -> int | None:
        for i, b in enumerate(self.prefix):
            if b:
                return i
        for j, b in enumerate(self.period):
            if b:
                return len(self.prefix) + j
        return None

    def iter_elements(self, bound: int | None = None) -> Iterator[int]:
        """Elements in increasing order; stops at `bound` (exclusive) or,
        for finite sets, at exhaustion."""
        i = 0
        while True:
            if bound is not None and i >= bound:
                return
            if bound is None and self.is_finite() and i >= len(self.prefix):
                return
            if self.member(i):
                yield i
            i += 1

    def elements(self) -> list[int]:
        if not self.is_finite():
            raise ValueError("infinite IndexSet")
        return list(self.iter_elements())

    # -- Boolean algebra ----------------------------------------------

    def _combine(self, other: "IndexSet", fn: Callable[[bool, bool], bool]) -> "IndexSet":
        plen = max(len(self.prefix), len(other.prefix))
        per = lcm(len(self.period), len(other.period))
        prefix = [fn(self.member(i), other.member(i)) for i in range(plen)]
        period = [fn(self.member(plen + i), other.member(plen + i)) for i in range(per)]
        return IndexSet.make(prefix, period)

    def union(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda x, y: x or y)

    def intersection(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda x, y: x and y)

    def difference(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda x, y: x and not y)

    def complement(self) -> "IndexSet":
        """Complement within the naturals."""
        return IndexSet.make(
            [not b for b in self.prefix], [not b for b in self.period]
        )

    def restrict_below(self, n: int) -> "IndexSet":
        """Intersection with {0, ..., n-1}."""
        return IndexSet.from_indices(i for i in self.iter_elements(bound=n))

    def subset_of(self, other: "IndexSet") -> bool:
        return self.difference(other).is_empty()

    def __bool__(self) -> bool:
        return not self.is_empty()
