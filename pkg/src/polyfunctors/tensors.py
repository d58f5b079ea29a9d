"""Exact dense tensors in (K^n)^{(x)e} backed by numpy object arrays of Fractions."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import numpy as np


def rational(x) -> Fraction:
    """Parse a rational from an int, Fraction or a "p/q" string."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def _as_object(a) -> np.ndarray:
    arr = np.empty(np.shape(a), dtype=object)
    arr[...] = a
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = rational(arr[idx])
    return out


class DenseTensor:
    """An element of (K^n)^{(x)degree} with exact rational entries.

    Degree-0 tensors are scalars; their dimension is carried along but
    never checked.
    """

    __slots__ = ("data", "dim")

    def __init__(self, data, dim: int | None = None):
        arr = data if isinstance(data, np.ndarray) and data.dtype == object else _as_object(data)
        if arr.ndim and len(set(arr.shape)) != 1:
            raise ValueError(f"tensor must be cubical, got shape {arr.shape}")
        self.data = arr
        self.dim = arr.shape[0] if arr.ndim else (dim or 0)

    @property
    def degree(self) -> int:
        return self.data.ndim

    @property
    def entries(self) -> list[Fraction]:
        return list(self.data.flat)

    @classmethod
    def zeros(cls, degree: int, dim: int) -> "DenseTensor":
        arr = np.empty((dim,) * degree, dtype=object)
        arr[...] = Fraction(0)
        if degree == 0:
            arr = np.array(Fraction(0), dtype=object)
        return cls(arr, dim)

    @classmethod
    def scalar(cls, value, dim: int = 0) -> "DenseTensor":
        return cls(np.array(rational(value), dtype=object), dim)

    @classmethod
    def from_entries(cls, entries: Sequence, degree: int, dim: int) -> "DenseTensor":
        if len(entries) != dim ** degree:
            raise ValueError(f"expected {dim ** degree} entries, got {len(entries)}")
        arr = np.empty(len(entries), dtype=object)
        for i, x in enumerate(entries):
            arr[i] = rational(x)
        return cls(arr.reshape((dim,) * degree), dim)

    @classmethod
    def vector(cls, entries) -> "DenseTensor":
        return cls.from_entries(list(entries), 1, len(entries))

    @classmethod
    def matrix(cls, rows) -> "DenseTensor":
        rows = [list(r) for r in rows]
        return cls.from_entries([x for r in rows for x in r], 2, len(rows))

    @classmethod
    def basis(cls, dim: int, *indices: int) -> "DenseTensor":
        """e_{i1} (x) ... (x) e_{ik} with zero-based indices."""
        t = cls.zeros(len(indices), dim)
        t.data[tuple(indices)] = Fraction(1)
        return t

    def rows(self) -> list[list[Fraction]]:
        if self.degree != 2:
            raise ValueError("rows() needs a degree-2 tensor")
        return [list(r) for r in self.data]

    def value(self) -> Fraction:
        if self.degree != 0:
            raise ValueError("value() needs a degree-0 tensor")
        return self.data[()]

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.data.flat)

    def __eq__(self, other):
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.all(self.data == other.data))

    __hash__ = None

    def _check(self, other: "DenseTensor"):
        if self.data.shape != other.data.shape:
            raise ValueError(f"shape mismatch: {self.data.shape} vs {other.data.shape}")

    def __add__(self, other: "DenseTensor") -> "DenseTensor":
        self._check(other)
        return DenseTensor(self.data + other.data, self.dim)

    def __sub__(self, other: "DenseTensor") -> "DenseTensor":
        self._check(other)
        return DenseTensor(self.data - other.data, self.dim)

    def __neg__(self) -> "DenseTensor":
        return DenseTensor(-self.data, self.dim)

    def scale(self, c) -> "DenseTensor":
        return DenseTensor(_as_object(self.data * rational(c)), self.dim)

    def otimes(self, other: "DenseTensor") -> "DenseTensor":
        """Tensor product: indices of self followed by indices of other."""
        if self.degree and other.degree and self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        dim = self.dim if self.degree else other.dim
        out = np.multiply.outer(self.data, other.data)
        if not isinstance(out, np.ndarray):
            out = np.array(out, dtype=object)
        return DenseTensor(out, dim)

    def apply(self, linmap) -> "DenseTensor":
        return apply_linear(linmap, self)

    def to_json(self) -> dict:
        return {"degree": self.degree, "dim": self.dim, "entries": [str(x) for x in self.data.flat]}

    @classmethod
    def from_json(cls, obj: dict) -> "DenseTensor":
        return cls.from_entries(obj["entries"], int(obj["degree"]), int(obj["dim"]))

    def __repr__(self):
        return f"DenseTensor(degree={self.degree}, dim={self.dim}, entries={[str(x) for x in self.data.flat]})"


def _map_array(linmap) -> np.ndarray:
    if isinstance(linmap, np.ndarray) and linmap.dtype == object and linmap.ndim == 2:
        return linmap
    rows = [list(r) for r in linmap]
    arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            arr[i, j] = rational(x)
    return arr


def apply_multilinear(maps: Sequence, t: DenseTensor) -> DenseTensor:
    """(phi_1 (x) ... (x) phi_e) t, with a separate map on each tensor index."""
    if len(maps) != t.degree:
        raise ValueError(f"need {t.degree} maps, got {len(maps)}")
    data = t.data
    out_dim = t.dim
    for axis, linmap in enumerate(maps):
        arr = _map_array(linmap)
        if arr.shape[1] != t.dim:
            raise ValueError(f"map has {arr.shape[1]} columns, tensor has dimension {t.dim}")
        data = np.moveaxis(np.tensordot(arr, data, axes=([1], [axis])), 0, axis)
        out_dim = arr.shape[0]
    if not isinstance(data, np.ndarray):
        data = np.array(data, dtype=object)
    return DenseTensor(data, out_dim)


def apply_linear(linmap, t: DenseTensor) -> DenseTensor:
    """linmap^{(x)e} t for an m x n rational matrix linmap and t of dimension n."""
    arr = _map_array(linmap)
    if t.degree == 0:
        return DenseTensor(t.data, arr.shape[0])
    return apply_multilinear([arr] * t.degree, t)


def random_rational(rng: random.Random) -> Fraction:
    """Numerator in [-9, 9], denominator in {1, 2, 3}."""
    return Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))


def random_matrix(rng: random.Random, m: int, n: int) -> list[list[Fraction]]:
    return [[random_rational(rng) for _ in range(n)] for _ in range(m)]


def random_tensor(rng: random.Random, degree: int, dim: int) -> DenseTensor:
    return DenseTensor.from_entries(
        [random_rational(rng) for _ in range(dim ** degree)], degree, dim
    )


def derived_rng(seed: int, *path) -> random.Random:
    """Deterministic child RNG for (seed, trial index, ...)."""
    return random.Random(":".join(str(x) for x in (seed, *path)))
