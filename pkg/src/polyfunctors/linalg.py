"""Exact linear algebra over the rationals.

Matrices are lists of rows of ``Fraction`` (anything ``Fraction`` accepts is
coerced).  Rank uses fraction-free (Bareiss) elimination on an integer
rescaling of the rows, so no intermediate fractions appear.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = list[list[Fraction]]


def as_matrix(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * den) for x in row])
    return out


def rank(rows) -> int:
    """Rank of a rational matrix by Bareiss elimination."""
    a = _integer_rows(rows)
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                a[i][j] = (p * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def rref(rows) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = as_matrix(rows)
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def kernel(rows, ncols: int | None = None) -> Matrix:
    """Basis of the right kernel {x : rows x = 0}, as a list of vectors."""
    a = as_matrix(rows)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(rows, rhs) -> list[Fraction] | None:
    """One solution x of rows x = rhs, or None when the system is inconsistent."""
    a = as_matrix(rows)
    b = [Fraction(x) for x in rhs]
    ncols = len(a[0]) if a else 0
    aug = [row + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = red[r][ncols]
    return x


def transpose(rows) -> Matrix:
    return [list(col) for col in zip(*rows)]


def matmul(a, b) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def det(rows) -> Fraction:
    """Determinant by Gaussian elimination."""
    a = as_matrix(rows)
    n = len(a)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            sign = -sign
        out *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * out


def quadratic_value(mat, v: Sequence) -> Fraction:
    """v^T mat v."""
    return sum(
        (Fraction(v[i]) * mat[i][j] * v[j] for i in range(len(v)) for j in range(len(v))),
        Fraction(0),
    )


def is_symmetric(mat) -> bool:
    n = len(mat)
    return all(len(row) == n for row in mat) and all(
        mat[i][j] == mat[j][i] for i in range(n) for j in range(i)
    )


def negative_direction(mat) -> list[Fraction] | None:
    """A rational vector v with v^T mat v < 0, or None if mat is positive semidefinite.

    Pivoted LDL^T on the symmetric matrix.  The working block is kept as
    basis^T mat basis with the basis columns in original coordinates, so any
    negative direction found in the block lifts back through the basis.
    """
    mat = as_matrix(mat)
    if not is_symmetric(mat):
        raise ValueError("matrix is not symmetric")
    n = len(mat)
    # columns of basis, indexed by the remaining positions
    basis = {i: [Fraction(int(i == k)) for k in range(n)] for i in range(n)}
    block = {(i, j): mat[i][j] for i in range(n) for j in range(n)}
    remaining = list(range(n))
    while remaining:
        neg = next((i for i in remaining if block[i, i] < 0), None)
        if neg is not None:
            return basis[neg]
        pos = next((i for i in remaining if block[i, i] > 0), None)
        if pos is None:
            # all diagonal entries zero: any nonzero off-diagonal entry gives a negative direction
            for i in remaining:
                for j in remaining:
                    if i != j and block[i, j] != 0:
                        s = -1 if block[i, j] > 0 else 1
                        return [x + s * y for x, y in zip(basis[i], basis[j])]
            return None
        p = block[pos, pos]
        rest = [i for i in remaining if i != pos]
        for i in rest:
            f = block[pos, i] / p
            if f:
                basis[i] = [x - f * y for x, y in zip(basis[i], basis[pos])]
        block = {
            (i, j): block[i, j] - block[i, pos] * block[pos, j] / p
            for i in rest
            for j in rest
        }
        remaining = rest
    return None


def is_psd(mat) -> bool:
    return negative_direction(mat) is None
