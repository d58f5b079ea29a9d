"""Formal algebra of polynomial functors: a constant plus Schur functors with multiplicities.

A functor is stored as the dimension of its constant part plus a mapping
from partitions to positive multiplicities.  Everything here works on these
decompositions only; no vector spaces are ever built.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict
from typing import Mapping

from .partitions import (
    EMPTY,
    Partition,
    lr_expand,
    partitions_of,
    schur_dim,
    skew_schur_dim,
    subpartitions,
    syt_count,
)


class PolynomialFunctor:
    """Immutable decomposition of a polynomial functor."""

    __slots__ = ("_const", "_schur", "_hash")

    def __init__(self, const: int = 0, schur: Mapping | None = None):
        if const < 0:
            raise ValueError("constant dimension must be nonnegative")
        clean: dict[Partition, int] = defaultdict(int)
        for shape, m in (schur or {}).items():
            shape = Partition(shape)
            m = int(m)
            if m < 0:
                raise ValueError(f"negative multiplicity for {shape}")
            if not shape:
                # S^() is the one-dimensional constant functor
                const += m
                continue
            clean[shape] += m
        self._const = int(const)
        self._schur = {shape: m for shape, m in sorted(clean.items(), reverse=True) if m}
        self._hash = None

    @property
    def const(self) -> int:
        return self._const

    @property
    def multiplicities(self) -> dict[Partition, int]:
        return dict(self._schur)

    def multiplicity(self, shape) -> int:
        return self._schur.get(Partition(shape), 0)

    @property
    def degree(self) -> int:
        return max((shape.size for shape in self._schur), default=0)

    def is_zero(self) -> bool:
        return self._const == 0 and not self._schur

    def is_pure(self) -> bool:
        return self._const == 0

    def pure_part(self) -> "PolynomialFunctor":
        return PolynomialFunctor(0, self._schur)

    def __eq__(self, other):
        if not isinstance(other, PolynomialFunctor):
            return NotImplemented
        return self._const == other._const and self._schur == other._schur

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._const, tuple(self._schur.items())))
        return self._hash

    def __add__(self, other):
        return direct_sum(self, other)

    def __mul__(self, other):
        return tensor(self, other)

    def __repr__(self):
        terms = [str(self._const)] if self._const or not self._schur else []
        for shape, m in self._schur.items():
            s = "S" + str(list(shape))
            terms.append(s if m == 1 else f"{m}*{s}")
        return " + ".join(terms)

    def to_json(self) -> dict:
        return {"const": self._const, "schur": [[list(shape), m] for shape, m in self._schur.items()]}

    @classmethod
    def from_json(cls, data) -> "PolynomialFunctor":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict):
            raise ValueError("functor JSON must be an object")
        unknown = set(data) - {"const", "schur"}
        if unknown:
            raise ValueError(f"unknown functor fields: {sorted(unknown)}")
        schur: dict[Partition, int] = defaultdict(int)
        for entry in data.get("schur", []):
            shape, m = entry
            schur[Partition.from_any(shape)] += int(m)
        return cls(int(data.get("const", 0)), schur)


def constant(c: int) -> PolynomialFunctor:
    return PolynomialFunctor(c)


def schur(shape, m: int = 1) -> PolynomialFunctor:
    return PolynomialFunctor(0, {Partition(shape): m})


ZERO = PolynomialFunctor()


def direct_sum(left: PolynomialFunctor, right: PolynomialFunctor) -> PolynomialFunctor:
    out = defaultdict(int, left.multiplicities)
    for shape, m in right.multiplicities.items():
        out[shape] += m
    return PolynomialFunctor(left.const + right.const, out)


def tensor(left: PolynomialFunctor, right: PolynomialFunctor) -> PolynomialFunctor:
    """left (x) right, expanding S^shape (x) S^other by Littlewood-Richardson."""
    out: dict[Partition, int] = defaultdict(int)
    for shape, m in left.multiplicities.items():
        out[shape] += m * right.const
        for other, n in right.multiplicities.items():
            for outer, c in lr_expand(shape, other).items():
                out[outer] += m * n * c
    for other, n in right.multiplicities.items():
        out[other] += n * left.const
    return PolynomialFunctor(left.const * right.const, out)


def degree_part(functor: PolynomialFunctor, e: int) -> PolynomialFunctor:
    """The summands of degree e (the constant part when e = 0)."""
    if e < 0:
        raise ValueError("e must be nonnegative")
    if e == 0:
        return PolynomialFunctor(functor.const)
    return PolynomialFunctor(0, {shape: m for shape, m in functor.multiplicities.items() if shape.size == e})


def schur_weyl(d: int) -> PolynomialFunctor:
    """Decomposition of T^{(x)d}: each S^shape with multiplicity syt_count(shape)."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    if d == 0:
        return PolynomialFunctor(1)
    return PolynomialFunctor(0, {shape: syt_count(shape) for shape in partitions_of(d)})


def dim_at(functor: PolynomialFunctor, n: int) -> int:
    """dim functor(K^n)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return functor.const + sum(m * schur_dim(shape, n) for shape, m in functor.multiplicities.items())


def shift(functor: PolynomialFunctor, u: int) -> PolynomialFunctor:
    """Decomposition of V -> functor(K^u + V).

    Each S^shape splits over the inner shapes it contains, with the skew
    dimension over K^u as multiplicity; the empty inner shape lands in the
    constant part.
    """
    if u < 0:
        raise ValueError("u must be nonnegative")
    if u == 0:
        return functor
    const = functor.const
    out: dict[Partition, int] = defaultdict(int)
    for shape, m in functor.multiplicities.items():
        for inner in subpartitions(shape):
            k = skew_schur_dim(shape, inner, u)
            if not k:
                continue
            if inner == EMPTY:
                const += m * k
            else:
                out[inner] += m * k
    return PolynomialFunctor(const, out)


class OrderVerdict(enum.Enum):
    SMALLER = "Smaller"
    GREATER = "Greater"
    ISOMORPHIC = "Isomorphic"
    INCOMPARABLE = "Incomparable"

    def flip(self) -> "OrderVerdict":
        return {
            OrderVerdict.SMALLER: OrderVerdict.GREATER,
            OrderVerdict.GREATER: OrderVerdict.SMALLER,
        }.get(self, self)


def compare(candidate: PolynomialFunctor, reference: PolynomialFunctor) -> OrderVerdict:
    """Where candidate sits relative to reference in the well-founded order.

    Looks at the largest degree e >= 1 where the parts differ and compares
    multiplicities there.  Constant dimensions only matter when all pure
    parts agree; they are then compared as a degree-0 layer.
    """
    top = max(candidate.degree, reference.degree)
    for e in range(top, 0, -1):
        cand = degree_part(candidate, e).multiplicities
        ref = degree_part(reference, e).multiplicities
        if cand == ref:
            continue
        keys = set(cand) | set(ref)
        le = all(cand.get(k, 0) <= ref.get(k, 0) for k in keys)
        ge = all(cand.get(k, 0) >= ref.get(k, 0) for k in keys)
        if le:
            return OrderVerdict.SMALLER
        if ge:
            return OrderVerdict.GREATER
        return OrderVerdict.INCOMPARABLE
    if candidate.const < reference.const:
        return OrderVerdict.SMALLER
    if candidate.const > reference.const:
        return OrderVerdict.GREATER
    return OrderVerdict.ISOMORPHIC


def descending_chain(functor: PolynomialFunctor) -> list[PolynomialFunctor]:
    """A strictly decreasing chain from functor to 0, removing one summand at a time.

    Each step drops one copy of a highest-degree Schur summand (or one
    constant dimension); the chain has exactly const + sum of multiplicities steps.
    """
    chain = [functor]
    cur = functor
    while not cur.is_zero():
        mult = cur.multiplicities
        if mult:
            shape = max(mult, key=lambda l: (l.size, l))
            mult[shape] -= 1
            cur = PolynomialFunctor(cur.const, mult)
        else:
            cur = PolynomialFunctor(cur.const - 1)
        chain.append(cur)
    return chain
