import itertools

import pytest
from hypothesis import given, settings, strategies as st

from helpers import brute_lr_expand, brute_schur_dim, brute_skew_dim, brute_syt_count
from polyfunctors.partitions import (
    EMPTY,
    Partition,
    lr_coefficient,
    lr_expand,
    partitions_of,
    schur_dim,
    skew_schur_dim,
    subpartitions,
    syt_count,
)

SMALL = [shape for d in range(0, 5) for shape in partitions_of(d)]


def test_partition_validation():
    assert Partition([2, 1]) == (2, 1)
    assert Partition.from_any([3, 1, 0, 0]) == Partition([3, 1])
    for bad in ([1, 2], [2, 0], [-1]):
        with pytest.raises(ValueError):
            Partition(bad)
    assert Partition([3, 1]).conjugate() == Partition([2, 1, 1])
    assert EMPTY.size == 0 and EMPTY.to_json() == []


def test_partitions_of_examples():
    assert partitions_of(0) == [EMPTY]
    assert partitions_of(3) == [Partition([3]), Partition([2, 1]), Partition([1, 1, 1])]
    assert len(partitions_of(5)) == 7


def test_partition_counts_match_recurrence():
    # Euler pentagonal recurrence as independent count
    p = [1]
    for n in range(1, 13):
        total, k = 0, 1
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p.append(total)
    for d in range(13):
        parts = partitions_of(d)
        assert len(parts) == p[d]
        assert len(set(parts)) == len(parts)
        assert parts == sorted(parts, reverse=True)


def test_subpartitions():
    subs = subpartitions(Partition([2, 1]))
    assert set(subs) == {EMPTY, Partition([1]), Partition([2]), Partition([1, 1]), Partition([2, 1])}


def test_syt_examples():
    assert syt_count(Partition([3])) == 1
    assert syt_count(Partition([2, 1])) == 2
    assert syt_count(Partition([2, 2])) == 2


@pytest.mark.parametrize("shape", [shape for d in range(1, 7) for shape in partitions_of(d)])
def test_syt_brute_force(shape):
    assert syt_count(shape) == brute_syt_count(shape)


def test_schur_dim_examples():
    assert schur_dim(Partition([1, 1, 1]), 2) == 0
    assert schur_dim(Partition([2]), 2) == 3
    assert schur_dim(Partition([2, 1]), 3) == 8
    assert schur_dim(EMPTY, 0) == 1


@pytest.mark.parametrize("shape", [shape for d in range(0, 6) for shape in partitions_of(d)])
def test_schur_dim_brute_force(shape):
    for n in range(0, 5):
        assert schur_dim(shape, n) == brute_schur_dim(shape, n)


def test_lr_examples():
    assert lr_coefficient(Partition([1]), Partition([1]), Partition([2])) == 1
    assert lr_coefficient(Partition([1]), Partition([1]), Partition([3])) == 0
    assert lr_coefficient(Partition([2, 1]), Partition([2, 1]), Partition([3, 2, 1])) == 2
    assert lr_coefficient(Partition([2]), Partition([1]), Partition([1, 1, 1])) == 0


@pytest.mark.parametrize("shape,inner", [(a, b) for a in SMALL for b in SMALL if a.size + b.size <= 6])
def test_lr_against_schur_polynomial_product(shape, inner):
    assert lr_expand(shape, inner) == brute_lr_expand(shape, inner)


def test_lr_symmetry_up_to_six():
    parts = [shape for d in range(0, 7) for shape in partitions_of(d)]
    for shape, inner in itertools.product(parts, repeat=2):
        if shape.size + inner.size > 6:
            continue
        for outer in partitions_of(shape.size + inner.size):
            assert lr_coefficient(shape, inner, outer) == lr_coefficient(inner, shape, outer)


def test_skew_examples():
    assert skew_schur_dim(Partition([2]), Partition([1]), 3) == 3
    assert skew_schur_dim(Partition([2, 1]), Partition([2, 1]), 5) == 1
    # frozen after the brute-force skew enumerator returned 4
    assert brute_skew_dim((2, 1), (1,), 2) == 4
    assert skew_schur_dim(Partition([2, 1]), Partition([1]), 2) == 4
    assert skew_schur_dim(Partition([2]), Partition([1, 1]), 3) == 0


@pytest.mark.parametrize("shape", [shape for d in range(0, 6) for shape in partitions_of(d)])
def test_skew_brute_force(shape):
    for inner in subpartitions(shape):
        for u in range(0, 4):
            assert skew_schur_dim(shape, inner, u) == brute_skew_dim(shape, inner, u)


def test_skew_with_empty_inner():
    for shape in SMALL:
        for u in range(5):
            assert skew_schur_dim(shape, EMPTY, u) == schur_dim(shape, u)


partition_st = st.integers(0, 6).flatmap(lambda d: st.sampled_from(partitions_of(d)))


@settings(max_examples=60, deadline=None)
@given(partition_st, partition_st, st.integers(0, 4))
def test_dimension_product(shape, inner, n):
    lhs = schur_dim(shape, n) * schur_dim(inner, n)
    assert lhs == sum(c * schur_dim(outer, n) for outer, c in lr_expand(shape, inner).items())
