"""Concrete subsets with exact oracles: rank, span, matroid strata, subrank,
PSD, pairs of quadratic forms, and a subset that is not determined by any
fixed space.

Every subset is registered under a short name (``rank_le:2``, ``span:3``,
``matroid:u23``, ``psd``, ``quadpair``, ``ex39``); see ``get_subset``.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable

from . import linalg
from .subsets import (
    Ambient,
    Point,
    SubsetSpec,
    coordinate_projection,
    pad_rows,
    pullback_member,
)
from .tensors import (
    DenseTensor,
    apply_linear,
    apply_multilinear,
    derived_rng,
    random_matrix,
    random_rational,
)

# --- helpers ---------------------------------------------------------------


def _nonzero_rational(rng: random.Random) -> Fraction:
    while True:
        x = random_rational(rng)
        if x:
            return x


def _random_rank_matrix(rng: random.Random, n: int, k: int) -> list[list[Fraction]]:
    """Product of random n x k and k x n matrices (rank <= k)."""
    if k == 0:
        return [[Fraction(0)] * n for _ in range(n)]
    return linalg.matmul(random_matrix(rng, n, k), random_matrix(rng, k, n))


def _sym(a: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    return [[(a[i][j] + a[j][i]) / 2 for j in range(n)] for i in range(n)]


def _random_symmetric(rng: random.Random, n: int) -> list[list[Fraction]]:
    return _sym(random_matrix(rng, n, n))


def _outer(u, v) -> list[list[Fraction]]:
    return [[Fraction(x) * y for y in v] for x in u]


def _vec(t: DenseTensor) -> list[Fraction]:
    return list(t.data.flat)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = isqrt(x.numerator), isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


# --- rank ------------------------------------------------------------------


def independent_rows_cols(mat, k: int) -> tuple[list[int], list[int]] | None:
    """Row and column index sets of size k whose minor of ``mat`` is invertible, if rank(mat) >= k."""
    _, cols = linalg.rref(mat)
    if len(cols) < k:
        return None
    cols = cols[:k]
    sub_t = [[mat[i][j] for i in range(len(mat))] for j in cols]
    _, rows = linalg.rref(sub_t)
    return rows[:k], cols


def rank_le(r: int, claimed_m: int | None = None) -> SubsetSpec:
    """Matrices of rank at most r in T^{(x)2}; claimed to be determined by K^{r+1}.

    The same map acts on both tensor factors (mat -> g mat g^T).  For even r,
    a skew-symmetric matrix of rank r+2 stays skew under every such map, so
    all its images in K^{r+1} have rank <= r; K^{r+1} is then not enough and
    the stacked row and column projection into K^{2(r+1)} is needed.  ``claimed_m`` lets callers
    test either value.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    m = r + 1 if claimed_m is None else claimed_m

    def oracle(p: Point) -> bool:
        return linalg.rank(p.tensors[0].rows()) <= r

    def member(rng, n):
        return Point((), (DenseTensor.matrix(_random_rank_matrix(rng, n, rng.randint(0, r))),))

    def generic(rng, n):
        return Point((), (DenseTensor.matrix(random_matrix(rng, n, n)),))

    def hints(p, m):
        mat = p.tensors[0].rows()
        n = len(mat)
        found = independent_rows_cols(mat, r + 1)
        if found is None:
            return
        row_idx, col_idx = found
        row_proj, col_proj = coordinate_projection(row_idx, n), coordinate_projection(col_idx, n)
        if m >= 2 * (r + 1):
            yield pad_rows(row_proj + col_proj, m)
        if m >= r + 1:
            for c in (0, 1, -1, 2):
                if c == 0:
                    yield pad_rows(row_proj, m)
                    yield pad_rows(col_proj, m)
                else:
                    yield pad_rows([[x + c * y for x, y in zip(a, b)] for a, b in zip(row_proj, col_proj)], m)

    return SubsetSpec(f"rank_le:{r}", Ambient((2,)), oracle, m, member, generic, hints)


# --- span ------------------------------------------------------------------


def span_membership(d: int) -> SubsetSpec:
    """(v_0, ..., v_d) with v_0 in span(v_1, ..., v_d); determined by K^1."""
    if d < 1:
        raise ValueError("d must be >= 1")

    def oracle(p: Point) -> bool:
        vs = [_vec(t) for t in p.tensors]
        if not vs[0] or not any(vs[0]):
            return True
        return linalg.rank(vs[1:]) == linalg.rank(vs)

    def member(rng, n):
        vs = [[random_rational(rng) for _ in range(n)] for _ in range(d)]
        # occasionally degenerate spans
        if rng.random() < 0.3 and d > 1:
            vs[-1] = [Fraction(0)] * n
        coeffs = [random_rational(rng) for _ in range(d)]
        v0 = [sum((c * v[i] for c, v in zip(coeffs, vs)), Fraction(0)) for i in range(n)]
        return Point((), tuple(DenseTensor.vector(v) for v in [v0] + vs))

    def generic(rng, n):
        return Point((), tuple(DenseTensor.vector([random_rational(rng) for _ in range(n)]) for _ in range(d + 1)))

    def hints(p, m):
        yield from (pad_rows([f], m) for f in span_kernel_functionals(p))

    return SubsetSpec(f"span:{d}", Ambient((1,) * (d + 1)), oracle, 1, member, generic, hints)


def span_kernel_functionals(p: Point) -> Iterable[list[Fraction]]:
    """Functionals vanishing on v_1..v_d but not on v_0."""
    vs = [_vec(t) for t in p.tensors]
    n = len(vs[0])
    for f in linalg.kernel(vs[1:], n):
        if sum((a * b for a, b in zip(f, vs[0])), Fraction(0)) != 0:
            yield f


# --- matroids --------------------------------------------------------------


@dataclass(frozen=True)
class MatroidSpec:
    """A matroid on {1..d} given by its independent sets."""

    d: int
    independent: frozenset

    def __post_init__(self):
        ind = frozenset(frozenset(I) for I in self.independent)
        object.__setattr__(self, "independent", ind)
        if frozenset() not in ind:
            raise ValueError("the empty set must be independent")
        ground = set(range(1, self.d + 1))
        for I in ind:
            if not I <= ground:
                raise ValueError(f"{set(I)} is not a subset of {ground}")
            for k in range(len(I)):
                for J in itertools.combinations(I, k):
                    if frozenset(J) not in ind:
                        raise ValueError(f"not downward closed: {set(J)} missing below {set(I)}")
        for I in ind:
            for J in ind:
                if len(I) < len(J) and not any(I | {x} in ind for x in J - I):
                    raise ValueError(f"exchange axiom fails for {set(I)}, {set(J)}")

    @classmethod
    def uniform(cls, k: int, d: int) -> "MatroidSpec":
        return cls(d, frozenset(frozenset(c) for j in range(k + 1) for c in itertools.combinations(range(1, d + 1), j)))


def independence_pattern(vectors) -> frozenset:
    """The set of index sets (1-based) whose vectors are linearly independent."""
    vecs = [list(v) for v in vectors]
    d = len(vecs)
    out = []
    for k in range(d + 1):
        for I in itertools.combinations(range(d), k):
            if not I or linalg.rank([vecs[i] for i in I]) == k:
                out.append(frozenset(i + 1 for i in I))
    return frozenset(out)


def _pattern(*sets) -> frozenset:
    return frozenset(frozenset(s) for s in sets)


U23 = MatroidSpec.uniform(2, 3)

# the orbit union for U_{2,3} and the two patterns it excludes
U23_ORBIT_PATTERNS = (
    U23.independent,
    _pattern((), (1,), (2,), (3,)),
    _pattern((), (1,), (2,)),
    _pattern((), (1,), (3,)),
    _pattern((), (2,), (3,)),
    _pattern(()),
)
U23_EXCLUDED = (_pattern((), (1,)), _pattern((), (1,), (2,), (1, 2)))

U23_REALIZATION = [[1, 0], [0, 1], [1, 1]]


def matroid_tilde(matroid: MatroidSpec) -> SubsetSpec:
    """Points whose independence pattern is exactly the matroid (not closed under pushforward in general)."""
    def oracle(p: Point) -> bool:
        return independence_pattern(_vec(t) for t in p.tensors) == matroid.independent

    return SubsetSpec(f"matroid_tilde:{matroid.d}", Ambient((1,) * matroid.d), oracle, matroid.d)


def _random_realization_point(rng, n, realization) -> list[list[Fraction]]:
    """Push a realization in K^k into K^n by a random map, injective on its span when possible."""
    k = len(realization[0])
    for _ in range(50):
        emb = random_matrix(rng, n, k)
        if linalg.rank(emb) == min(n, k):
            break
    return [[sum((Fraction(e[j]) * v[j] for j in range(k)), Fraction(0)) for e in emb] for v in realization]


def _random_endomorphism(rng, n) -> list[list[Fraction]]:
    """Random g in End(K^n) of uniformly chosen rank."""
    return _random_rank_matrix(rng, n, rng.randint(0, n))


def matroid_orbit(matroid: MatroidSpec, allowed=None, realization=None, name: str | None = None) -> SubsetSpec:
    """The union of images under endomorphisms of points with the matroid's pattern.

    Membership is decided by classifying the independence pattern against
    ``allowed`` (the known list of patterns in the orbit union).  Determined
    by K^d: a map injective on the span keeps every pattern.
    """
    if allowed is None:
        if matroid != U23:
            raise ValueError("pattern list known only for U_{2,3}; pass allowed=")
        allowed = U23_ORBIT_PATTERNS
        realization = U23_REALIZATION
    allowed = frozenset(allowed)

    def oracle(p: Point) -> bool:
        return independence_pattern(_vec(t) for t in p.tensors) in allowed

    def member(rng, n):
        if realization is None:
            raise ValueError("no realization given")
        vs = _random_realization_point(rng, n, realization)
        if rng.random() < 0.25:
            # rank-one g whose kernel contains one of the vectors
            i = rng.randrange(len(vs))
            ker = linalg.kernel([vs[i]], n)
            coeffs = [_nonzero_rational(rng) for _ in ker]
            f = [sum((c * k[j] for c, k in zip(coeffs, ker)), Fraction(0)) for j in range(n)]
            g = _outer([random_rational(rng) for _ in range(n)], f)
        else:
            g = _random_endomorphism(rng, n)
        return Point((), tuple(DenseTensor.vector(v).apply(g) for v in vs))

    def generic(rng, n):
        return Point((), tuple(DenseTensor.vector([rng.choice((-1, 0, 1, 2)) for _ in range(n)]) for _ in range(matroid.d)))

    def hints(p, m):
        vs = [_vec(t) for t in p.tensors]
        _, coords = linalg.rref(vs)
        if len(coords) <= m:
            yield coordinate_projection(coords, len(vs[0]), m)

    return SubsetSpec(name or f"matroid:{matroid.d}", Ambient((1,) * matroid.d), oracle, matroid.d, member if realization else None, generic, hints)


def matroid_orbit_experiment(samples: int = 1000, n: int = 3, seed: int = 0) -> dict:
    """Push random U_{2,3} points by random endomorphisms and tally the image patterns."""
    subset = matroid_orbit(U23, name="matroid:u23")
    counts: Counter = Counter()
    for i in range(samples):
        p = subset.sample_member(derived_rng(seed, "matroid", i), n)
        counts[independence_pattern(_vec(t) for t in p.tensors)] += 1
    outside = sum(c for pat, c in counts.items() if pat not in U23_ORBIT_PATTERNS)
    return {
        "samples": samples,
        "n": n,
        "patterns": {_pattern_str(p): c for p, c in sorted(counts.items(), key=lambda kv: -kv[1])},
        "outside_union": outside,
        "excluded_hits": {_pattern_str(p): counts.get(p, 0) for p in U23_EXCLUDED},
    }


def _pattern_str(pattern: frozenset) -> str:
    sets = sorted((sorted(s) for s in pattern), key=lambda s: (len(s), s))
    return "{" + ", ".join("{" + ",".join(map(str, s)) + "}" for s in sets) + "}"


def _rank_mod_p(rows, p: int) -> int:
    a = [[x % p for x in row] for row in rows]
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def finite_field_orbit_patterns(p: int = 3, base=((1, 0, 0), (0, 1, 0), (1, 1, 0))) -> Counter:
    """Patterns of every endomorphism image of ``base`` over GF(p): an exhaustive cross-check."""
    counts: Counter = Counter()
    d = len(base)
    for entries in itertools.product(range(p), repeat=9):
        g = [entries[0:3], entries[3:6], entries[6:9]]
        imgs = [[sum(g[i][j] * v[j] for j in range(3)) % p for i in range(3)] for v in base]
        pat = []
        for k in range(d + 1):
            for I in itertools.combinations(range(d), k):
                if not I or _rank_mod_p([imgs[i] for i in I], p) == k:
                    pat.append(frozenset(i + 1 for i in I))
        counts[frozenset(pat)] += 1
    return counts


# --- subrank ---------------------------------------------------------------


def unit_tensor(q: int, dim: int | None = None) -> DenseTensor:
    """e_1^{(x)3} + ... + e_q^{(x)3} in (K^dim)^{(x)3}."""
    dim = q if dim is None else dim
    t = DenseTensor.zeros(3, dim)
    for i in range(q):
        t.data[i, i, i] = Fraction(1)
    return t


def subrank_determining_dim(q: int) -> int:
    return 3 * (q + 1)


@dataclass
class SubrankCheck:
    k: int
    identity: bool
    projection_identity: bool
    big_dim: int

    @property
    def verified(self) -> bool:
        return self.identity and self.projection_identity


def subrank_witness_check(q: int, tensor: DenseTensor, map1, map2, map3) -> SubrankCheck:
    """Check (map1 (x) map2 (x) map3) tensor = e_1^{(x)3} + ... + e_q^{(x)3} exactly.

    Also stacks the three maps into one map to K^{3q}, pushes the tensor forward
    along it, and checks that the three block projections recover the unit
    tensor of size q: the image in K^{3q} has subrank at least q.
    """
    if tensor.degree != 3:
        raise ValueError("tensor must have degree 3")
    maps = [linalg.as_matrix(linmap) for linmap in (map1, map2, map3)]
    for linmap in maps:
        if len(linmap) != q or any(len(row) != tensor.dim for row in linmap):
            raise ValueError(f"each map must be {q} x {tensor.dim}")
    target = unit_tensor(q)
    identity = apply_multilinear(maps, tensor) == target
    stacked = maps[0] + maps[1] + maps[2]
    pushed = apply_linear(stacked, tensor)
    projections = [coordinate_projection(range(i * q, (i + 1) * q), 3 * q) for i in range(3)]
    projection_identity = apply_multilinear(projections, pushed) == target
    return SubrankCheck(q, identity, projection_identity, 3 * q)


# --- positive semidefinite matrices ----------------------------------------


def psd_witness(mat) -> list[Fraction] | None:
    """v with v mat v^T < 0, or None when mat is positive semidefinite."""
    return linalg.negative_direction(mat)


def psd_subset() -> SubsetSpec:
    """Positive semidefinite symmetric matrices (real case); determined by K^1."""

    def oracle(p: Point) -> bool:
        return linalg.is_psd(p.tensors[0].rows())

    def member(rng, n):
        gen = random_matrix(rng, rng.randint(1, n), n)
        return Point((), (DenseTensor.matrix(linalg.matmul(linalg.transpose(gen), gen)),))

    def generic(rng, n):
        return Point((), (DenseTensor.matrix(_random_symmetric(rng, n)),))

    def hints(p, m):
        v = psd_witness(p.tensors[0].rows())
        if v is not None:
            yield pad_rows([v], m)

    return SubsetSpec("psd", Ambient((2,)), oracle, 1, member, generic, hints)


# --- pairs of quadratic forms ----------------------------------------------


def _is_zero(rows) -> bool:
    return all(x == 0 for row in rows for x in row)


def condition_holds(lead, follow) -> bool:
    """Does the form ``follow`` vanish on the zero set of ``lead`` (over C)?

    Decided by the rank of ``lead``.  Rank >= 2: exactly when follow is a
    multiple of lead.  Rank 1, lead = c l^2: exactly when l divides follow,
    i.e. follow restricted to ker l vanishes.  Rank 0: exactly when follow = 0.
    """
    lead, follow = linalg.as_matrix(lead), linalg.as_matrix(follow)
    r = linalg.rank(lead)
    if r == 0:
        return _is_zero(follow)
    if r >= 2:
        return linalg.rank([sum(lead, []), sum(follow, [])]) <= 1
    lin = next(row for row in lead if any(row))
    ker = linalg.kernel([lin], len(lead))
    n = len(lead)
    return all(
        sum((x[i] * follow[i][j] * y[j] for i in range(n) for j in range(n)), Fraction(0)) == 0
        for x in ker
        for y in ker
    )


def in_first_image(lead, follow) -> bool:
    """The pair is (form, s * form) for some scalar s."""
    lead, follow = linalg.as_matrix(lead), linalg.as_matrix(follow)
    lead_flat, follow_flat = sum(lead, []), sum(follow, [])
    if not any(lead_flat):
        return not any(follow_flat)
    return linalg.solve([[x] for x in lead_flat], follow_flat) is not None


def in_second_image(lead, follow) -> bool:
    """The pair is (l^2, l k) for linear forms l, k (over C)."""
    lead, follow = linalg.as_matrix(lead), linalg.as_matrix(follow)
    n = len(lead)
    r = linalg.rank(lead)
    if r == 0:
        return _is_zero(follow)
    if r > 1:
        return False
    # lead = c lin^2; over C rescale lin by sqrt(c) and solve Sym(lin k^T) = follow for k
    lin = next(row for row in lead if any(row))
    rows, rhs = [], []
    for i in range(n):
        for j in range(n):
            row = [Fraction(0)] * n
            row[j] += lin[i] / 2
            row[i] += lin[j] / 2
            rows.append(row)
            rhs.append(follow[i][j])
    return linalg.solve(rows, rhs) is not None


def in_union_of_images(lead, follow) -> bool:
    return in_first_image(lead, follow) or in_second_image(lead, follow)


def isotropic_vectors(form, rng: random.Random | None = None, tries: int = 16) -> Iterable[list[Fraction]]:
    """Rational vectors v != 0 with v^T form v = 0 that are cheap to find.

    Kernel vectors, isotropic basis vectors, and rational roots of the binary
    form on coordinate planes and a few random planes.
    """
    form = linalg.as_matrix(form)
    n = len(form)
    yield from linalg.kernel(form, n)
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    planes = list(itertools.combinations(basis, 2))
    if rng is not None:
        for _ in range(tries):
            planes.append(([random_rational(rng) for _ in range(n)], [random_rational(rng) for _ in range(n)]))
    for e in basis:
        if linalg.quadratic_value(form, e) == 0:
            yield e
    for x, y in planes:
        a = linalg.quadratic_value(form, x)
        c = linalg.quadratic_value(form, y)
        b = sum((x[i] * form[i][j] * y[j] for i in range(n) for j in range(n)), Fraction(0))
        # a s^2 + 2 b s t + c t^2 = 0
        if a == 0:
            yield x
            if b or c:
                # t = 1, s = -c / (2b) when b != 0
                if b:
                    yield [-c / (2 * b) * xi + yi for xi, yi in zip(x, y)]
            continue
        disc = _rational_sqrt(b * b - a * c)
        if disc is None:
            continue
        for s in ((-b + disc) / a, (-b - disc) / a):
            yield [s * xi + yi for xi, yi in zip(x, y)]


def quadpair_subset() -> SubsetSpec:
    """Pairs of quadratic forms where the first vanishing forces the second to vanish; determined by K^1."""

    def oracle(p: Point) -> bool:
        return condition_holds(p.tensors[0].rows(), p.tensors[1].rows())

    def member(rng, n):
        lead, follow = sample_first_image(rng, n) if rng.random() < 0.5 else sample_second_image(rng, n)
        return Point((), (DenseTensor.matrix(lead), DenseTensor.matrix(follow)))

    def generic(rng, n):
        lead, follow = sample_hard_pair(rng, n)
        return Point((), (DenseTensor.matrix(lead), DenseTensor.matrix(follow)))

    def hints(p, m):
        lead, follow = p.tensors[0].rows(), p.tensors[1].rows()
        for v in isotropic_vectors(lead, random.Random(0)):
            if any(v) and linalg.quadratic_value(follow, v) != 0:
                yield pad_rows([v], m)

    return SubsetSpec("quadpair", Ambient((2, 2)), oracle, 1, member, generic, hints)


def sample_first_image(rng: random.Random, n: int):
    form = _sym(_random_rank_matrix(rng, n, rng.randint(0, n)))
    s = random_rational(rng)
    return form, [[s * x for x in row] for row in form]


def sample_second_image(rng: random.Random, n: int):
    lin = [random_rational(rng) for _ in range(n)]
    co = [random_rational(rng) for _ in range(n)]
    c = rng.choice((1, 1, 2, 3, Fraction(1, 2), -1))
    # (sqrt(c) lin)^2 and (sqrt(c) lin)(co / sqrt(c)) stay rational
    lead = [[c * x for x in row] for row in _outer(lin, lin)]
    return lead, _sym(_outer(lin, co))


def sample_hard_pair(rng: random.Random, n: int):
    """Pairs near the boundary of the condition set, plus fully random pairs."""
    kind = rng.randrange(6)
    lin = [random_rational(rng) for _ in range(n)]
    if kind == 0:
        return _random_symmetric(rng, n), _random_symmetric(rng, n)
    if kind == 1:
        # lead = l1 l2 and follow = c lead + small perturbation
        lead = _sym(_outer(lin, [random_rational(rng) for _ in range(n)]))
        noise = _random_symmetric(rng, n) if rng.random() < 0.5 else [[Fraction(0)] * n for _ in range(n)]
        c = random_rational(rng)
        return lead, [[c * x + y for x, y in zip(r1, r2)] for r1, r2 in zip(lead, noise)]
    if kind == 2:
        return _outer(lin, lin), _random_symmetric(rng, n)
    if kind == 3:
        zero = [[Fraction(0)] * n for _ in range(n)]
        return zero, (_random_symmetric(rng, n) if rng.random() < 0.7 else zero)
    if kind == 4:
        # l^2 with follow = l k + something vanishing only off ker l
        lead, follow = sample_second_image(rng, n)
        i = rng.randrange(n)
        bump = [[Fraction(int(a == i and b == i)) for b in range(n)] for a in range(n)]
        return lead, [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(follow, bump)]
    lead, follow = sample_first_image(rng, n)
    if rng.random() < 0.5:
        follow = [[x + (1 if a == b == 0 else 0) for b, x in enumerate(row)] for a, row in enumerate(follow)]
    return lead, follow


def quadratic_pair_check(n: int, samples: int = 500, seed: int = 0) -> dict:
    """Compare the condition oracle with the union-of-images oracle on sampled pairs.

    Also checks each parameterization's images against the condition, and
    cross-checks refusals of the condition with rational points where the
    lead form vanishes and the follow form does not, when one is cheap to find.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    discrepancies = []
    cond_in = union_in = rational_refutations = rational_conflicts = 0
    first_bad = second_bad = 0
    for i in range(samples):
        rng = derived_rng(seed, "quadpair", n, i)
        pick = i % 3
        if pick == 0:
            lead, follow = sample_first_image(rng, n)
        elif pick == 1:
            lead, follow = sample_second_image(rng, n)
        else:
            lead, follow = sample_hard_pair(rng, n)
        in_cond = condition_holds(lead, follow)
        in_union = in_union_of_images(lead, follow)
        cond_in += in_cond
        union_in += in_union
        if in_cond != in_union:
            discrepancies.append({"lead": [[str(x) for x in r] for r in lead], "follow": [[str(x) for x in r] for r in follow]})
        # images of the two parameterizations must satisfy the condition
        lead1, follow1 = sample_first_image(rng, n)
        first_bad += not condition_holds(lead1, follow1)
        lead2, follow2 = sample_second_image(rng, n)
        second_bad += not condition_holds(lead2, follow2)
        for a in isotropic_vectors(lead, rng, tries=4):
            if any(a) and linalg.quadratic_value(follow, a) != 0:
                rational_refutations += 1
                rational_conflicts += in_cond
                break
    return {
        "n": n,
        "samples": samples,
        "seed": seed,
        "condition_in": cond_in,
        "union_in": union_in,
        "discrepancies": len(discrepancies),
        "discrepancy_examples": discrepancies[:3],
        "first_image_violations": first_bad,
        "second_image_violations": second_bad,
        "rational_refutations": rational_refutations,
        "rational_conflicts": rational_conflicts,
    }


# --- the subset that is not determined by any fixed space ------------------


def _is_nonneg_int(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


def ex39_subset(claimed_m: int = 1) -> SubsetSpec:
    """Labelled matrices (c, mat): c not a nonnegative integer, or c = k and rank mat <= k.

    Each level is constructible, but no K^m determines the subset: at K^m
    the label-m fibre is everything, so (m, I_{m+1}) passes every
    pullback test to K^m while having rank m + 1.
    """

    def oracle(p: Point) -> bool:
        c = p.scalars[0]
        if not _is_nonneg_int(c):
            return True
        return linalg.rank(p.tensors[0].rows()) <= c

    def member(rng, n):
        if rng.random() < 0.3:
            return Point((Fraction(rng.choice((1, 3)), 2),), (DenseTensor.matrix(random_matrix(rng, n, n)),))
        k = rng.randint(0, n)
        return Point((Fraction(k),), (DenseTensor.matrix(_random_rank_matrix(rng, n, k)),))

    def generic(rng, n):
        label = rng.choice((Fraction(0), Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-1)))
        return Point((label,), (DenseTensor.matrix(random_matrix(rng, n, n)),))

    def hints(p, m):
        n = p.dim
        if m == 1 and 7 ** n <= 2401:
            for row in itertools.product(range(-3, 4), repeat=n):
                if any(row):
                    yield [[Fraction(x) for x in row]]
        else:
            yield from (pad_rows(coordinate_projection(c, n), m) for c in itertools.combinations(range(n), min(m, n)))

    return SubsetSpec("ex39", Ambient((2,), scalars=1), oracle, claimed_m, member, generic, hints)


def nonconstructible_demo(random_budget: int = 10_000, seed: int = 0) -> dict:
    """Run the pullback test on (1, I_2) against K^1, plus two control points."""
    subset = ex39_subset(1)
    p = Point((Fraction(1),), (DenseTensor.matrix(linalg.identity(2)),))
    structured = sum(1 for _ in subset.hints(p, 1)) + 2  # hints plus the coordinate projections
    # after the projections run out, candidates alternate random / composed-with-random
    result = pullback_member(subset, p, budget=structured + 2 * random_budget, seed=seed)
    # every 1x1 matrix has rank <= 1, so the label-1 fibre of subset(K^1) is all of K^{1x1}
    fibre_full = all(
        subset.contains(Point((Fraction(1),), (DenseTensor.matrix([[Fraction(a)]]),))) for a in range(-5, 6)
    )
    zero_label = Point((Fraction(0),), (DenseTensor.matrix([[1, 2], [0, 1]]),))
    frac_label = Point((Fraction(1, 2),), (DenseTensor.matrix([[1, 2], [3, 4]]),))
    zr = pullback_member(subset, zero_label, budget=64, seed=seed)
    return {
        "subset": subset.name,
        "claimed_m": 1,
        "point": p.to_json(),
        "oracle": "in" if subset.contains(p) else "out",
        "pullback": result.verdict,
        "witness": None if result.witness is None else result.witness.to_json(),
        "candidates_tried": result.candidates_tried,
        "label_fibre_full_at_claimed_m": fibre_full,
        # out of subset, yet every pushforward to K^1 lands in the full label-1 fibre
        "determined_by_claimed_m": subset.contains(p) or not fibre_full,
        "controls": {
            "zero_label": {"oracle": "in" if subset.contains(zero_label) else "out", "pullback": zr.verdict},
            "non_integer_label": {"oracle": "in" if subset.contains(frac_label) else "out"},
        },
    }


# --- registry --------------------------------------------------------------

DESCRIPTIONS = {
    "rank_le:<r>": "matrices of rank <= r in T^(x)2, claimed_m = r+1",
    "span:<d>": "(v0..vd) with v0 in span(v1..vd), claimed_m = 1",
    "matroid:u23": "End-orbit union of the uniform matroid U(2,3) stratum, claimed_m = 3",
    "psd": "positive semidefinite symmetric matrices (real case), claimed_m = 1",
    "quadpair": "pairs of quadratic forms where the first vanishing forces the second to vanish, claimed_m = 1",
    "ex39": "label c in K with rank <= c when c is a nonnegative integer; not determined by K^1",
}


def get_subset(name: str, claimed_m: int | None = None) -> SubsetSpec:
    """Look up a catalog subset by its registered name."""
    head, _, arg = name.partition(":")
    if head == "rank_le" and arg:
        subset = rank_le(int(arg), claimed_m)
    elif head == "span" and arg:
        subset = span_membership(int(arg))
    elif head == "matroid" and arg == "u23":
        subset = matroid_orbit(U23, name="matroid:u23")
    elif name == "psd":
        subset = psd_subset()
    elif name == "quadpair":
        subset = quadpair_subset()
    elif name == "ex39":
        subset = ex39_subset()
    else:
        raise KeyError(f"unknown subset {name!r}; known: {', '.join(DESCRIPTIONS)}")
    if claimed_m is not None:
        subset.claimed_m = claimed_m
    return subset
