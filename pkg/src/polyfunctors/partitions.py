"""Partition combinatorics: tableau counts, Schur dimensions, LR coefficients.

Partitions are stored canonically as weakly decreasing tuples of positive
integers; the empty tuple is the empty partition.  All counts are exact
Python integers.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def from_any(cls, parts: Iterable[int]) -> "Partition":
        """Accept trailing zeros (as in [2, 1, 0]) and drop them."""
        return cls(p for p in parts if p != 0)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self):
            for j in range(row):
                yield i, j

    def contains(self, other: "Partition") -> bool:
        """True when the diagram of ``other`` sits inside this one."""
        if len(other) > len(self):
            return False
        return all(o <= s for o, s in zip(other, self))

    def __repr__(self) -> str:
        return f"Partition({list(self)})"

    def to_json(self) -> list[int]:
        return list(self)


EMPTY = Partition()


def partitions_of(d: int, max_part: int | None = None) -> list[Partition]:
    """All partitions of ``d`` in reverse-lexicographic order."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    if max_part is None:
        max_part = d
    return [Partition(p) for p in _partitions(d, max_part)]


@lru_cache(maxsize=None)
def _partitions(d: int, max_part: int) -> tuple[tuple[int, ...], ...]:
    if d == 0:
        return ((),)
    out = []
    for first in range(min(d, max_part), 0, -1):
        for rest in _partitions(d - first, first):
            out.append((first,) + rest)
    return tuple(out)


def subpartitions(shape: Partition) -> list[Partition]:
    """All partitions whose diagram lies inside ``shape`` (including ``shape`` and the empty one)."""
    def rec(i: int, bound: int) -> Iterator[tuple[int, ...]]:
        yield ()
        if i >= len(shape):
            return
        for p in range(min(bound, shape[i]), 0, -1):
            for rest in rec(i + 1, p):
                yield (p,) + rest
    return sorted((Partition(p) for p in rec(0, shape[0] if shape else 0)), reverse=True)


def hook_lengths(shape: Partition) -> list[int]:
    conj = shape.conjugate()
    return [shape[i] - j + conj[j] - i - 1 for i, j in shape.cells()]


def syt_count(shape: Partition) -> int:
    """Number of standard Young tableaux of shape ``shape`` (hook length formula)."""
    shape = Partition(shape)
    return factorial(shape.size) // prod(hook_lengths(shape))


def schur_dim(shape: Partition, n: int) -> int:
    """dim S^shape(K^n) by the hook content formula; zero when shape has more than n rows."""
    shape = Partition(shape)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if len(shape) > n:
        return 0
    num = prod(n + j - i for i, j in shape.cells())
    return num // prod(hook_lengths(shape))


def lr_coefficient(first, second, outer) -> int:
    """Littlewood-Richardson coefficient of S^outer in S^first (x) S^second.

    Counts LR tableaux: semistandard fillings of the skew shape outer/first with
    content second whose reverse reading word is a lattice word.
    """
    return _lr(Partition(first), Partition(second), Partition(outer))


@lru_cache(maxsize=None)
def _lr(first: Partition, second: Partition, outer: Partition) -> int:
    if first.size + second.size != outer.size or not outer.contains(first) or not outer.contains(second):
        return 0
    if not second:
        return 1
    first_row = list(first) + [0] * (len(outer) - len(first))
    # Cells in reading order: rows top to bottom, each row right to left.
    cells = [(i, j) for i in range(len(outer)) for j in range(outer[i] - 1, first_row[i] - 1, -1)]
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * (len(second) + 1)

    def rec(k: int) -> int:
        if k == len(cells):
            return 1
        i, j = cells[k]
        hi = len(second)
        # rows weakly increase left to right, and we fill right to left
        right = filling.get((i, j + 1))
        if right is not None:
            hi = min(hi, right)
        lo = 1
        above = filling.get((i - 1, j))
        if above is not None:
            lo = above + 1
        # column strictness also bounds entries by their row index
        hi = min(hi, i + 1)
        total = 0
        for v in range(lo, hi + 1):
            if counts[v] >= second[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            filling[(i, j)] = v
            total += rec(k + 1)
            del filling[(i, j)]
            counts[v] -= 1
        return total

    return rec(0)


def lr_expand(first, second) -> dict[Partition, int]:
    """The decomposition of S^first (x) S^second as {outer: multiplicity}."""
    first, second = Partition(first), Partition(second)
    out = {}
    for outer in partitions_of(first.size + second.size):
        c = lr_coefficient(first, second, outer)
        if c:
            out[outer] = c
    return out


def skew_schur_dim(outer, inner, u: int) -> int:
    """dim S^{outer/inner}(K^u) = sum over rest of c(inner, rest; outer) * dim S^rest(K^u)."""
    outer, inner = Partition(outer), Partition(inner)
    if not outer.contains(inner):
        return 0
    return sum(
        lr_coefficient(inner, rest, outer) * schur_dim(rest, u)
        for rest in partitions_of(outer.size - inner.size)
    )
