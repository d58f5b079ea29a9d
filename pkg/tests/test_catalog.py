import random
from fractions import Fraction

import pytest

from helpers import principal_minor_psd
from polyfunctors import linalg
from polyfunctors.catalog import (
    DESCRIPTIONS,
    U23,
    U23_EXCLUDED,
    U23_ORBIT_PATTERNS,
    MatroidSpec,
    condition_holds,
    ex39_subset,
    finite_field_orbit_patterns,
    get_subset,
    in_first_image,
    in_second_image,
    independence_pattern,
    matroid_orbit,
    matroid_orbit_experiment,
    matroid_tilde,
    nonconstructible_demo,
    psd_subset,
    quadpair_subset,
    quadratic_pair_check,
    rank_le,
    span_membership,
    subrank_determining_dim,
    subrank_witness_check,
    unit_tensor,
)
from polyfunctors.subsets import Point, determinacy_experiment, point, pullback_member
from polyfunctors.tensors import DenseTensor, apply_multilinear, random_matrix

vec, mat = DenseTensor.vector, DenseTensor.matrix


# --- rank -----------------------------------------------------------------


def test_rank_examples():
    assert rank_le(0).contains(point(DenseTensor.zeros(2, 3)))
    assert rank_le(3).contains(point(DenseTensor.zeros(2, 3)))
    assert not rank_le(2).contains(point(mat(linalg.identity(3))))
    rng = random.Random(0)
    for r in (1, 2):
        subset = rank_le(r)
        assert subset.claimed_m == r + 1
        for _ in range(20):
            n = rng.randint(r, 5)
            prod = linalg.matmul(random_matrix(rng, n, r), random_matrix(rng, r, n))
            assert subset.contains(point(mat(prod)))
    with pytest.raises(ValueError):
        rank_le(-1)


# --- span -----------------------------------------------------------------


def test_span_examples():
    subset = span_membership(2)
    v1, v2 = [1, 2, 0], [0, 1, 1]
    assert subset.contains(point(vec(v1), vec(v1), vec(v2)))
    assert not span_membership(1).contains(point(DenseTensor.basis(2, 1), DenseTensor.basis(2, 0)))
    rng = random.Random(3)
    for _ in range(20):
        vs = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(2)]
        a = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(2)]
        v0 = [a[0] * x + a[1] * y for x, y in zip(*vs)]
        assert subset.contains(point(vec(v0), vec(vs[0]), vec(vs[1])))
    with pytest.raises(ValueError):
        span_membership(0)


# --- matroids -------------------------------------------------------------


def test_matroid_validation():
    assert len(U23.independent) == 7
    with pytest.raises(ValueError):
        MatroidSpec(2, frozenset({frozenset({1, 2})}))  # empty set missing
    with pytest.raises(ValueError):
        MatroidSpec(2, frozenset({frozenset(), frozenset({1, 2})}))  # not downward closed
    with pytest.raises(ValueError):
        # exchange fails: {3} cannot be extended from {1,2}
        MatroidSpec(3, frozenset(map(frozenset, [(), (1,), (2,), (3,), (1, 2)])))


def test_matroid_examples():
    e1, e2 = [1, 0, 0], [0, 1, 0]
    p = point(vec(e1), vec(e2), vec([1, 1, 0]))
    assert matroid_tilde(U23).contains(p)
    pat = independence_pattern([e1, [0, 0, 0], [0, 0, 0]])
    assert pat == U23_EXCLUDED[0]
    assert pat not in U23_ORBIT_PATTERNS
    subset = matroid_orbit(U23)
    assert subset.claimed_m == 3
    assert not subset.contains(point(vec(e1), vec([0, 0, 0]), vec([0, 0, 0])))
    assert subset.contains(point(vec(e1), vec([0, 0, 0]), vec([2, 0, 0])))


def test_matroid_orbit_sampling():
    res = matroid_orbit_experiment(1000, n=3, seed=0)
    assert res["outside_union"] == 0
    assert all(v == 0 for v in res["excluded_hits"].values())
    assert len(res["patterns"]) == 6


def test_matroid_finite_field_cross_check():
    counts = finite_field_orbit_patterns(3)
    assert set(counts) == set(U23_ORBIT_PATTERNS)
    assert sum(counts.values()) == 3 ** 9
    assert not set(counts) & set(U23_EXCLUDED)


def test_matroid_determinacy():
    rep = determinacy_experiment(matroid_orbit(U23, name="matroid:u23"), 4, samples=60, seed=1)
    assert rep.soundness_violations == 0 and rep.unwitnessed == 0


# --- subrank --------------------------------------------------------------


def test_subrank_examples():
    for q in (1, 2, 3):
        ident_q = linalg.identity(q)
        check = subrank_witness_check(q, unit_tensor(q), ident_q, ident_q, ident_q)
        assert check.verified and check.big_dim == 3 * q
    assert subrank_determining_dim(2) == 9
    tensor = unit_tensor(3)
    tensor.data[0, 1, 2] = Fraction(1)
    ident3 = linalg.identity(3)
    assert not subrank_witness_check(3, tensor, ident3, ident3, ident3).verified
    with pytest.raises(ValueError):
        subrank_witness_check(2, unit_tensor(3), ident3, ident3, ident3)


def _invertible(rng, n):
    while True:
        mat = random_matrix(rng, n, n)
        if linalg.det(mat) != 0:
            return mat


def _inverse(mat):
    n = len(mat)
    cols = [linalg.solve(mat, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return [list(r) for r in zip(*cols)]


@pytest.mark.parametrize("q,n", [(q, n) for q in (1, 2, 3) for n in range(q, 6)])
def test_subrank_transformed_diagonal(q, n):
    rng = random.Random(q * 10 + n)
    mats = [_invertible(rng, n) for _ in range(3)]
    tensor = apply_multilinear(mats, unit_tensor(q, n))
    proj = [[Fraction(int(i == j)) for j in range(n)] for i in range(q)]
    maps = [linalg.matmul(proj, _inverse(mat)) for mat in mats]
    assert subrank_witness_check(q, tensor, *maps).verified


# --- PSD ------------------------------------------------------------------


def test_psd_examples():
    subset = psd_subset()
    assert subset.claimed_m == 1
    assert subset.contains(point(mat(linalg.identity(3))))
    diag = [[1, 0], [0, -1]]
    assert not subset.contains(point(mat(diag)))
    res = pullback_member(subset, point(mat(diag)))
    (v,) = res.witness.linmap
    assert linalg.quadratic_value(diag, v) < 0
    assert v[0] == 0
    rng = random.Random(0)
    for _ in range(20):
        gen = random_matrix(rng, 3, 3)
        assert subset.contains(point(mat(linalg.matmul(linalg.transpose(gen), gen))))
    with pytest.raises(ValueError):
        subset.contains(point(mat([[0, 1], [0, 0]])))


def test_psd_matches_minors_on_samples():
    subset = psd_subset()
    rng = random.Random(5)
    for i in range(100):
        p = subset.structured(rng, 3) if i % 2 else subset.generic(rng, 3)
        assert subset.contains(p) == principal_minor_psd(p.tensors[0].rows())


# --- pairs of quadratic forms ---------------------------------------------


def test_quadpair_examples():
    form = [[1, 2], [2, -1]]
    assert condition_holds(form, [[3 * x for x in r] for r in form])
    assert in_first_image(form, [[3 * x for x in r] for r in form])
    x_sq, xy = [[1, 0], [0, 0]], [[0, Fraction(1, 2)], [Fraction(1, 2), 0]]
    assert condition_holds(x_sq, xy) and in_second_image(x_sq, xy) and not in_first_image(x_sq, xy)
    assert not condition_holds(xy, x_sq)
    # (xy, x^2) fails at a = (1, 0)
    assert linalg.quadratic_value(xy, [1, 0]) == 0 and linalg.quadratic_value(x_sq, [1, 0]) == 1
    assert condition_holds([[0, 0], [0, 0]], [[0, 0], [0, 0]])
    assert not condition_holds([[0, 0], [0, 0]], x_sq)


def test_quadpair_witness_via_isotropic_vector():
    subset = quadpair_subset()
    xy, x_sq = [[0, Fraction(1, 2)], [Fraction(1, 2), 0]], [[1, 0], [0, 0]]
    res = pullback_member(subset, point(mat(xy), mat(x_sq)))
    assert res.verdict == "refuted" and res.witness.verify(subset)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_quadpair_check(n):
    res = quadratic_pair_check(n, samples=150, seed=n)
    assert res["discrepancies"] == 0
    assert res["first_image_violations"] == 0 and res["second_image_violations"] == 0
    assert res["rational_conflicts"] == 0


def test_quadpair_soundness():
    rep = determinacy_experiment(quadpair_subset(), 3, samples=40, seed=0)
    assert rep.soundness_violations == 0
    assert rep.witnessed > 0


# --- the subset not determined by K^1 -------------------------------------


def test_ex39_examples():
    subset = ex39_subset()
    ident2 = mat(linalg.identity(2))
    assert not subset.contains(Point((Fraction(1),), (ident2,)))
    assert subset.contains(Point((Fraction(2),), (ident2,)))
    assert subset.contains(Point((Fraction(-1),), (ident2,)))
    assert subset.contains(Point((Fraction(1, 2),), (ident2,)))
    res = pullback_member(subset, Point((Fraction(0),), (mat([[1, 2], [0, 1]]),)))
    assert res.verdict == "refuted"


def test_nonconstructible_demo():
    res = nonconstructible_demo(random_budget=2000, seed=0)
    assert res["oracle"] == "out"
    assert res["pullback"] == "consistent" and res["witness"] is None
    assert res["label_fibre_full_at_claimed_m"] and not res["determined_by_claimed_m"]
    assert res["controls"]["zero_label"] == {"oracle": "out", "pullback": "refuted"}
    assert res["controls"]["non_integer_label"]["oracle"] == "in"


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_nonconstructible_demo_reproducible_across_seeds(seed):
    res = nonconstructible_demo(random_budget=300, seed=seed)
    assert res["pullback"] == "consistent"


def test_ex39_refuted_with_bigger_space():
    # K^2 is enough for the point (1, I_2) itself
    subset = ex39_subset(claimed_m=2)
    res = pullback_member(subset, Point((Fraction(1),), (mat(linalg.identity(2)),)))
    assert res.verdict == "refuted"


# --- registry -------------------------------------------------------------


@pytest.mark.parametrize("name", ["rank_le:2", "span:3", "matroid:u23", "psd", "quadpair", "ex39"])
def test_registry(name):
    subset = get_subset(name)
    assert subset.name == name
    rng = random.Random(0)
    subset.ambient.check(subset.generic(rng, 3), 3)
    subset.ambient.check(subset.structured(rng, 3), 3)


def test_registry_errors_and_override():
    with pytest.raises(KeyError):
        get_subset("nope")
    assert get_subset("rank_le:2", claimed_m=6).claimed_m == 6
    assert len(DESCRIPTIONS) == 6
