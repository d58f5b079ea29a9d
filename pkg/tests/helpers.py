"""Brute-force oracles and generators used by the tests.

Nothing here calls the formulas under test: tableaux are enumerated
directly, ranks come from minors, PSD from principal minors.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from fractions import Fraction

from polyfunctors.dsl import Param, Scale, Sum, TensorProduct, Transformation, Var, format_expr
from polyfunctors.partitions import Partition


def _cells(shape, inner=()):
    inner = tuple(inner) + (0,) * (len(shape) - len(inner))
    return [(i, j) for i in range(len(shape)) for j in range(inner[i], shape[i])]


def brute_syt_count(shape) -> int:
    """Count standard tableaux by trying every permutation of the cells."""
    cells = _cells(shape)
    count = 0
    for perm in itertools.permutations(range(1, len(cells) + 1)):
        t = dict(zip(cells, perm))
        if all(
            (t.get((i, j + 1), 10 ** 9) > v) and (t.get((i + 1, j), 10 ** 9) > v)
            for (i, j), v in t.items()
        ):
            count += 1
    return count


def ssyt(shape, n, inner=()):
    """All semistandard fillings of the skew shape shape/inner with entries in 1..n, as dicts."""
    cells = _cells(shape, inner)
    out = []

    def rec(k, t):
        if k == len(cells):
            out.append(dict(t))
            return
        i, j = cells[k]
        lo = 1
        if (i, j - 1) in t:
            lo = max(lo, t[(i, j - 1)])
        if (i - 1, j) in t:
            lo = max(lo, t[(i - 1, j)] + 1)
        for v in range(lo, n + 1):
            t[(i, j)] = v
            rec(k + 1, t)
            del t[(i, j)]

    rec(0, {})
    return out


def brute_schur_dim(shape, n) -> int:
    return len(ssyt(shape, n))


def brute_skew_dim(shape, inner, u) -> int:
    inner = tuple(inner)
    if len(inner) > len(shape) or any(m > l for m, l in zip(inner, shape)):
        return 0
    return len(ssyt(shape, u, inner))


def schur_poly(shape, nvars) -> Counter:
    """Schur polynomial as a Counter exponent-tuple -> coefficient."""
    out = Counter()
    for t in ssyt(shape, nvars):
        e = [0] * nvars
        for v in t.values():
            e[v - 1] += 1
        out[tuple(e)] += 1
    return out


def brute_lr_expand(shape, inner) -> dict:
    """Expand s_lam * s_mu in Schur polynomials by peeling off leading monomials."""
    nvars = max(1, len(shape) + len(inner))
    a, b = schur_poly(shape, nvars), schur_poly(inner, nvars)
    prod = Counter()
    for ea, ca in a.items():
        for eb, cb in b.items():
            prod[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    result = {}
    while True:
        prod = Counter({k: v for k, v in prod.items() if v})
        if not prod:
            return result
        lead = max(prod)
        c = prod[lead]
        outer = Partition.from_any(lead)
        result[outer] = c
        for e, v in schur_poly(outer, nvars).items():
            prod[e] -= c * v


def det(m):
    if not m:
        return Fraction(1)
    return sum(
        (-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m))
    )


def minor_rank(mat) -> int:
    n, k = len(mat), len(mat[0]) if mat else 0
    for r in range(min(n, k), 0, -1):
        for row_idx in itertools.combinations(range(n), r):
            for col_idx in itertools.combinations(range(k), r):
                if det([[mat[i][j] for j in col_idx] for i in row_idx]) != 0:
                    return r
    return 0


def principal_minor_psd(mat) -> bool:
    n = len(mat)
    return all(
        det([[mat[i][j] for j in row_idx] for i in row_idx]) >= 0
        for r in range(1, n + 1)
        for row_idx in itertools.combinations(range(n), r)
    )


# --- random transformations ------------------------------------------------


def random_expr(rng: random.Random, inputs, params=(), target: int = 2, depth: int = 3):
    """A random expression of degree ``target`` over (name, degree) inputs."""
    degs = sorted({d for _, d in inputs})
    reach = _reachable(degs)

    def build(deg, depth):
        leaves = [Var(n, d) for n, d in inputs if d == deg]
        splits = [d for d in range(1, deg) if d in reach and deg - d in reach]
        roll = rng.random()
        if leaves and (depth == 0 or roll < 0.15 or not splits and roll < 0.5):
            return rng.choice(leaves)
        if depth > 0 and roll < 0.55:
            return Sum(build(deg, depth - 1), build(deg, depth - 1))
        if depth > 0 and roll < 0.7:
            coeff = Param(rng.choice(params)) if params and rng.random() < 0.4 else None
            if coeff is None:
                coeff = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice((1, 2, 3)))
            return Scale(coeff, build(deg, depth - 1))
        if splits:
            d = rng.choice(splits)
            return TensorProduct(build(d, max(depth - 1, 0)), build(deg - d, max(depth - 1, 0)))
        return rng.choice(leaves)

    if target not in reach or target == 0:
        raise ValueError(f"degree {target} not reachable from {degs}")
    return build(target, depth)


def _reachable(degs, limit=8):
    out = {0}
    for _ in range(limit):
        out |= {a + d for a in out for d in degs if a + d <= limit}
    return out


def random_transformation(rng: random.Random, name="rnd") -> Transformation:
    k = rng.randint(1, 3)
    inputs = tuple((f"x{i}", rng.choice((1, 1, 2))) for i in range(k))
    params = ("a",) if rng.random() < 0.4 else ()
    nout = rng.randint(1, 2)
    reach = sorted(_reachable({d for _, d in inputs}, 4) - {0, 1}) or [1]
    outputs = tuple(random_expr(rng, inputs, params, target=rng.choice(reach)) for _ in range(nout))
    return Transformation(name, inputs, params, outputs)


__all__ = [
    "brute_syt_count",
    "brute_schur_dim",
    "brute_skew_dim",
    "brute_lr_expand",
    "minor_rank",
    "principal_minor_psd",
    "random_expr",
    "random_transformation",
]


# --- acceptance bookkeeping ------------------------------------------------

ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, float, float, str]] = {}


class criterion:
    """Context manager: time a criterion, enforce its runtime limit, record the outcome."""

    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.detail = ""

    def __enter__(self):
        import time

        self._t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        import time

        elapsed = time.perf_counter() - self._t0
        ok = exc_type is None and elapsed < self.limit
        detail = self.detail if exc_type is None else f"{exc_type.__name__}: {exc}"
        if exc_type is None and not ok:
            detail = f"runtime {elapsed:.2f}s over the {self.limit:g}s limit"
        ACCEPTANCE_RESULTS[self.number] = (self.title, ok, elapsed, self.limit, detail)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {self.number:2d} {self.title} ({elapsed:.2f}s / {self.limit:g}s) {detail}")
        if exc_type is None and not ok:
            raise AssertionError(detail)
        return False
