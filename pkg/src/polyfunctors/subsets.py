"""Subsets of tensor-power functors given by membership oracles, and the pullback test.

A subset is determined by K^m when a point at any dimension n lies in it
exactly when every pushforward of the point along a linear map K^n -> K^m
does.  Pushforwards of members are always members, so one pushforward that
leaves the subset proves the point is not a member.  The search here looks for such
witnesses; failing to find one within budget is only evidence.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .dsl import Transformation
from .functors import PolynomialFunctor, direct_sum, schur_weyl
from .tensors import DenseTensor, apply_linear, derived_rng, random_matrix, random_rational, random_tensor
from .transform import sample_params

LinMap = list[list[Fraction]]

DEFAULT_STRUCTURED = 64
DEFAULT_RANDOM = 256
DEFAULT_BUDGET = DEFAULT_STRUCTURED + DEFAULT_RANDOM


class Point(NamedTuple):
    """A point of K^s x (K^n)^{(x)d_1} x ... : scalar slots, then tensor components."""

    scalars: tuple[Fraction, ...]
    tensors: tuple[DenseTensor, ...]

    @property
    def dim(self) -> int:
        return next((t.dim for t in self.tensors if t.degree), 0)

    def push(self, linmap) -> "Point":
        return Point(self.scalars, tuple(apply_linear(linmap, t) for t in self.tensors))

    def to_json(self) -> dict:
        return {"scalars": [str(s) for s in self.scalars], "tensors": [t.to_json() for t in self.tensors]}

    @classmethod
    def from_json(cls, obj: dict) -> "Point":
        return cls(
            tuple(Fraction(s) for s in obj.get("scalars", [])),
            tuple(DenseTensor.from_json(t) for t in obj.get("tensors", [])),
        )


def point(*tensors: DenseTensor, scalars: Sequence = ()) -> Point:
    return Point(tuple(Fraction(s) for s in scalars), tuple(tensors))


@dataclass(frozen=True)
class Ambient:
    """K^scalars x T^{(x)d_1} x ... x T^{(x)d_k}."""

    degrees: tuple[int, ...]
    scalars: int = 0

    def functor(self) -> PolynomialFunctor:
        out = PolynomialFunctor(self.scalars)
        for d in self.degrees:
            out = direct_sum(out, schur_weyl(d))
        return out

    def check(self, p: Point, n: int | None = None) -> None:
        if len(p.scalars) != self.scalars:
            raise ValueError(f"expected {self.scalars} scalar slots, got {len(p.scalars)}")
        if tuple(t.degree for t in p.tensors) != self.degrees:
            raise ValueError(
                f"expected tensor degrees {self.degrees}, got {tuple(t.degree for t in p.tensors)}"
            )
        n = p.dim if n is None else n
        for t in p.tensors:
            if t.degree and t.dim != n:
                raise ValueError(f"tensor of dimension {t.dim} in a point of dimension {n}")

    def random_point(self, rng: random.Random, n: int) -> Point:
        return Point(
            tuple(random_rational(rng) for _ in range(self.scalars)),
            tuple(random_tensor(rng, d, n) for d in self.degrees),
        )


Oracle = Callable[[Point], bool]
Sampler = Callable[[random.Random, int], Point]
Hints = Callable[[Point, int], Iterable[LinMap]]


@dataclass
class SubsetSpec:
    """A subset given by an exact membership oracle and a claimed determining dimension."""

    name: str
    ambient: Ambient
    oracle: Oracle
    claimed_m: int
    sample_member: Sampler | None = None
    sample_generic: Sampler | None = None
    hints: Hints | None = None

    def contains(self, p: Point) -> bool:
        return bool(self.oracle(p))

    def generic(self, rng: random.Random, n: int) -> Point:
        if self.sample_generic is not None:
            return self.sample_generic(rng, n)
        return self.ambient.random_point(rng, n)

    def structured(self, rng: random.Random, n: int) -> Point:
        if self.sample_member is not None:
            return self.sample_member(rng, n)
        return degenerate_point(self.ambient, rng, n)


def degenerate_point(ambient: Ambient, rng: random.Random, n: int) -> Point:
    """A low-height point with some components zeroed; used when no parameterization is known."""
    tensors = []
    for d in ambient.degrees:
        if rng.random() < 0.5:
            tensors.append(DenseTensor.zeros(d, n))
        else:
            tensors.append(DenseTensor.from_entries([rng.choice((-1, 0, 0, 1)) for _ in range(n ** d)], d, n))
    return Point(tuple(rng.choice((0, 1, Fraction(1, 2))) for _ in range(ambient.scalars)), tuple(tensors))


@dataclass
class Witness:
    """A linear map K^n -> K^m whose pushforward of ``point`` leaves the subset."""

    linmap: LinMap
    point: Point
    image: Point
    strategy: str
    oracle_verdict: str = "out"

    def verify(self, subset: SubsetSpec) -> bool:
        return self.point.push(self.linmap) == self.image and not subset.contains(self.image)

    def to_json(self) -> dict:
        return {
            "map": [[str(x) for x in row] for row in self.linmap],
            "point": self.point.to_json(),
            "image": self.image.to_json(),
            "strategy": self.strategy,
            "oracle_verdict": self.oracle_verdict,
        }


# --- witness search --------------------------------------------------------


def coordinate_projection(rows: Sequence[int], n: int, m: int | None = None) -> LinMap:
    """The m x n matrix sending e_{rows[k]} to e_k (zero rows past len(rows))."""
    m = len(rows) if m is None else m
    linmap = [[Fraction(0)] * n for _ in range(m)]
    for k, i in enumerate(rows):
        linmap[k][i] = Fraction(1)
    return linmap


def pad_rows(linmap: LinMap, m: int) -> LinMap:
    """Compose with the inclusion K^k -> K^m (k <= m)."""
    n = len(linmap[0]) if linmap else 0
    return [list(r) for r in linmap] + [[Fraction(0)] * n for _ in range(m - len(linmap))]


def _matmul(a: LinMap, b: LinMap) -> LinMap:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def _projections(n: int, m: int) -> Iterator[LinMap]:
    if m >= n:
        yield coordinate_projection(range(n), n, m)
        return
    for rows in itertools.combinations(range(n), m):
        yield coordinate_projection(rows, n, m)


def witness_candidates(subset: SubsetSpec, p: Point, seed: int = 0) -> Iterator[tuple[str, LinMap]]:
    """Candidate maps K^n -> K^{claimed_m}, deterministic given the seed.

    Subset-specific hints come first; then coordinate projections, random
    rational matrices, and projections composed with random endomorphisms
    of K^n are interleaved.
    """
    n, m = p.dim, subset.claimed_m
    if subset.hints is not None:
        for linmap in subset.hints(p, m):
            yield "hint", linmap
    rng = derived_rng(seed, "witness", subset.name)
    proj = _projections(n, m)
    proj_list = list(_projections(n, m))
    k = 0
    while True:
        nxt = next(proj, None)
        if nxt is not None:
            yield "projection", nxt
        yield "random", random_matrix(rng, m, n)
        g = random_matrix(rng, n, n)
        yield "composed", _matmul(proj_list[k % len(proj_list)], g)
        k += 1


def witness_search(subset: SubsetSpec, p: Point, budget: int = DEFAULT_BUDGET, seed: int = 0) -> tuple[Witness | None, int]:
    """First candidate whose pushforward leaves the subset, and the number of candidates tried."""
    tried = 0
    for strategy, linmap in witness_candidates(subset, p, seed):
        if tried >= budget:
            break
        tried += 1
        image = p.push(linmap)
        if not subset.contains(image):
            return Witness(linmap, p, image, strategy), tried
    return None, tried


@dataclass
class PullbackResult:
    verdict: str  # "refuted" (witness found) or "consistent" (none within budget)
    witness: Witness | None
    candidates_tried: int

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness.to_json() if self.witness else None,
            "candidates_tried": self.candidates_tried,
        }


def pullback_member(subset: SubsetSpec, p: Point, budget: int = DEFAULT_BUDGET, seed: int = 0) -> PullbackResult:
    """Test p against the pullback condition at K^{claimed_m}.

    "refuted" comes with a witness and proves p is not in subset.  "consistent"
    means no witness was found within budget, which is evidence only.
    """
    subset.ambient.check(p)
    w, tried = witness_search(subset, p, budget, seed)
    return PullbackResult("refuted" if w else "consistent", w, tried)


# --- combinators -----------------------------------------------------------


def _same_ambient(subset: SubsetSpec, other: SubsetSpec) -> None:
    if subset.ambient != other.ambient:
        raise ValueError(f"ambient mismatch: {subset.ambient} vs {other.ambient}")


def _either_sampler(subset: SubsetSpec, other: SubsetSpec) -> Sampler:
    def sample(rng, n):
        return (subset if rng.random() < 0.5 else other).structured(rng, n)
    return sample


def union(subset: SubsetSpec, other: SubsetSpec) -> SubsetSpec:
    """Union of two subsets, determined by K^{m1 + m2}.

    A non-member has a witness for each side; stacking the two maps gives a
    witness for the union.
    """
    _same_ambient(subset, other)

    def hints(p, m):
        w1, _ = witness_search(subset, p)
        w2, _ = witness_search(other, p)
        if w1 and w2:
            yield [list(r) for r in w1.linmap] + [list(r) for r in w2.linmap]

    return SubsetSpec(
        name=f"({subset.name} | {other.name})",
        ambient=subset.ambient,
        oracle=lambda p: subset.contains(p) or other.contains(p),
        claimed_m=subset.claimed_m + other.claimed_m,
        sample_member=_either_sampler(subset, other),
        sample_generic=subset.sample_generic,
        hints=hints,
    )


def intersect(subset: SubsetSpec, other: SubsetSpec) -> SubsetSpec:
    """Intersection of two subsets with claimed dimension m1 + m2 (an upper bound; max(m1, m2) would also do)."""
    _same_ambient(subset, other)

    def hints(p, m):
        for part in (subset, other):
            if not part.contains(p):
                w, _ = witness_search(part, p)
                if w:
                    yield pad_rows(w.linmap, m)

    def sample(rng, n):
        # members of one side that happen to lie in both; fall back to the raw sample
        for _ in range(20):
            q = _either_sampler(subset, other)(rng, n)
            if subset.contains(q) and other.contains(q):
                return q
        return q

    return SubsetSpec(
        name=f"({subset.name} & {other.name})",
        ambient=subset.ambient,
        oracle=lambda p: subset.contains(p) and other.contains(p),
        claimed_m=subset.claimed_m + other.claimed_m,
        sample_member=sample,
        sample_generic=subset.sample_generic,
        hints=hints,
    )


def boolean_laws_hold(subset: SubsetSpec, other: SubsetSpec, points: Iterable[Point]) -> bool:
    """Commutativity, idempotence and absorption of the combined oracles on sample points."""
    either, both = union(subset, other), intersect(subset, other)
    either_rev, both_rev = union(other, subset), intersect(other, subset)
    for p in points:
        if either.contains(p) != either_rev.contains(p) or both.contains(p) != both_rev.contains(p):
            return False
        inside = subset.contains(p)
        if union(subset, subset).contains(p) != inside or intersect(subset, subset).contains(p) != inside:
            return False
        if union(subset, intersect(subset, other)).contains(p) != subset.contains(p):
            return False
        if intersect(subset, union(subset, other)).contains(p) != subset.contains(p):
            return False
    return True


def preimage(t: Transformation, subset: SubsetSpec) -> SubsetSpec:
    """Points whose image under ``t`` lies in ``subset``; same claimed dimension.

    Since ``t`` commutes with pushforwards, a witness for the image of a point
    is also a witness for the point itself.
    """
    if t.output_degrees != subset.ambient.degrees or subset.ambient.scalars:
        raise ValueError(
            f"transformation outputs {t.output_degrees} do not match ambient {subset.ambient.degrees}"
        )
    ambient = Ambient(t.input_degrees, len(t.params))

    def image(q: Point) -> Point:
        return Point((), tuple(t.evaluate(t.bind(q.scalars, q.tensors), q.dim)))

    def hints(q, m):
        w, _ = witness_search(subset, image(q))
        if w:
            yield w.linmap

    def generic(rng, n):
        scal = sample_params(t, rng)
        return Point(tuple(scal[p] for p in t.params), tuple(random_tensor(rng, d, n) for d in t.input_degrees))

    def structured(rng, n):
        scal = sample_params(t, rng)
        base = degenerate_point(ambient, rng, n)
        return Point(tuple(scal[p] for p in t.params), base.tensors)

    return SubsetSpec(
        name=f"{t.name}^-1({subset.name})",
        ambient=ambient,
        oracle=lambda q: subset.contains(image(q)),
        claimed_m=subset.claimed_m,
        sample_member=structured,
        sample_generic=generic,
        hints=hints,
    )


# --- experiments -----------------------------------------------------------


@dataclass
class DeterminacyReport:
    subset: str
    n: int
    claimed_m: int
    samples: int = 0
    members: int = 0
    witnessed: int = 0
    unwitnessed: int = 0
    soundness_violations: int = 0
    seed: int | None = None
    budget: int | None = None
    unwitnessed_points: list = field(default_factory=list)
    violation_examples: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        """soundness-violation if any member left the subset; otherwise consistent.

        Unwitnessed non-members are reported separately: they are evidence
        against the claimed dimension, not a proof.
        """
        return "soundness-violation" if self.soundness_violations else "consistent"

    @property
    def claimed_m_supported(self) -> bool:
        return self.soundness_violations == 0 and self.unwitnessed == 0

    def merge(self, other: "DeterminacyReport") -> "DeterminacyReport":
        if (self.subset, self.n, self.claimed_m) != (other.subset, other.n, other.claimed_m):
            raise ValueError("can only merge reports of the same experiment")
        return DeterminacyReport(
            self.subset,
            self.n,
            self.claimed_m,
            self.samples + other.samples,
            self.members + other.members,
            self.witnessed + other.witnessed,
            self.unwitnessed + other.unwitnessed,
            self.soundness_violations + other.soundness_violations,
            self.seed,
            self.budget,
            self.unwitnessed_points + other.unwitnessed_points,
            self.violation_examples + other.violation_examples,
        )

    CSV_FIELDS = (
        "subset", "n", "claimed_m", "samples", "members", "witnessed",
        "unwitnessed", "soundness_violations", "verdict", "seed", "budget",
    )

    def csv_row(self) -> list:
        return [getattr(self, f) for f in self.CSV_FIELDS]

    def to_json(self) -> dict:
        return {
            "subset": self.subset,
            "n": self.n,
            "claimed_m": self.claimed_m,
            "samples": self.samples,
            "members_confirmed": self.members,
            "nonmembers_with_witness": self.witnessed,
            "nonmembers_without_witness": self.unwitnessed,
            "soundness_violations": self.soundness_violations,
            "verdict": self.verdict,
            "claimed_m_supported": self.claimed_m_supported,
            "seed": self.seed,
            "budget": self.budget,
            "unwitnessed_points": self.unwitnessed_points,
            "violation_examples": self.violation_examples,
        }


def soundness_maps(rng: random.Random, n: int, m: int, trials: int) -> Iterator[LinMap]:
    projections = list(itertools.islice(_projections(n, m), max(1, trials // 2)))
    yield from projections
    for _ in range(trials - len(projections)):
        yield random_matrix(rng, m, n)


def determinacy_experiment(
    subset: SubsetSpec,
    n: int,
    samples: int = 100,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    soundness_trials: int = 8,
    keep_examples: int = 3,
) -> DeterminacyReport:
    """Sample points at dimension n and test both directions of the pullback condition.

    Even-indexed samples come from the subset's structured sampler (usually
    members built from a parameterization), odd-indexed ones are generic.
    Members are pushed forward along sampled maps and must stay members;
    non-members get a witness search.
    """
    report = DeterminacyReport(subset.name, n, subset.claimed_m, seed=seed, budget=budget)
    for i in range(samples):
        report = report.merge(_one_sample(subset, n, i, budget, seed, soundness_trials, keep_examples))
    report.unwitnessed_points = report.unwitnessed_points[:keep_examples]
    report.violation_examples = report.violation_examples[:keep_examples]
    return report


def _one_sample(subset, n, i, budget, seed, soundness_trials, keep) -> DeterminacyReport:
    rng = derived_rng(seed, "sample", subset.name, n, i)
    p = subset.structured(rng, n) if i % 2 == 0 else subset.generic(rng, n)
    subset.ambient.check(p, n)
    r = DeterminacyReport(subset.name, n, subset.claimed_m, samples=1, seed=seed, budget=budget)
    if subset.contains(p):
        r.members = 1
        for linmap in soundness_maps(rng, n, subset.claimed_m, soundness_trials):
            image = p.push(linmap)
            if not subset.contains(image):
                r.soundness_violations = 1
                r.violation_examples.append(
                    {"point": p.to_json(), "map": [[str(x) for x in row] for row in linmap]}
                )
                break
        return r
    w, _ = witness_search(subset, p, budget, seed=seed * 1_000_003 + i)
    if w is not None:
        r.witnessed = 1
    else:
        r.unwitnessed = 1
        r.unwitnessed_points.append(p.to_json())
    return r
