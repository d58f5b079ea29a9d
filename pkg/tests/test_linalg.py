import itertools
import random
from fractions import Fraction

import pytest

from helpers import det as cofactor_det
from helpers import minor_rank, principal_minor_psd
from polyfunctors import linalg
from polyfunctors.tensors import random_matrix


def test_rank_matches_minors_exhaustive():
    for entries in itertools.product((-1, 0, 1), repeat=9):
        mat = [list(entries[0:3]), list(entries[3:6]), list(entries[6:9])]
        assert linalg.rank(mat) == minor_rank(mat), mat


def test_psd_matches_principal_minors_exhaustive():
    for a, b, c, d, e, f in itertools.product((-1, 0, 1), repeat=6):
        mat = [[a, b, c], [b, d, e], [c, e, f]]
        v = linalg.negative_direction(mat)
        assert (v is None) == principal_minor_psd(mat), mat
        if v is not None:
            assert linalg.quadratic_value(mat, v) < 0


def test_negative_direction_examples():
    assert linalg.negative_direction([[1, 0], [0, 1]]) is None
    v = linalg.negative_direction([[1, 0], [0, -1]])
    assert linalg.quadratic_value([[1, 0], [0, -1]], v) < 0
    with pytest.raises(ValueError):
        linalg.negative_direction([[0, 1], [0, 0]])


@pytest.mark.parametrize("seed", range(20))
def test_random_rational_matrices(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 4), rng.randint(1, 4)
    mat = random_matrix(rng, m, n)
    if seed % 3 == 0 and m > 1:
        mat[-1] = [x + 2 * y for x, y in zip(mat[0], mat[1 % m])]
    assert linalg.rank(mat) == minor_rank(mat)
    red, piv = linalg.rref(mat)
    assert len(piv) == linalg.rank(mat)
    ker = linalg.kernel(mat, n)
    assert len(ker) == n - len(piv)
    for k in ker:
        assert all(sum(a * x for a, x in zip(row, k)) == 0 for row in mat)
    if m == n:
        assert linalg.det(mat) == cofactor_det(mat)
    x = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
    b = [sum(a * xi for a, xi in zip(row, x)) for row in mat]
    sol = linalg.solve(mat, b)
    assert sol is not None
    assert [sum(a * xi for a, xi in zip(row, sol)) for row in mat] == b


def test_solve_inconsistent():
    assert linalg.solve([[1, 1], [2, 2]], [1, 3]) is None
    assert linalg.solve([[1, 0], [0, 1]], [Fraction(1, 2), 3]) == [Fraction(1, 2), 3]
