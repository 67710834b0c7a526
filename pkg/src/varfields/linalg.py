"""Tiny exact linear algebra over any commutative coefficient type.

Matrices are lists of lists.  Entries only need ``+``, ``-``, ``*`` and
truthiness for zero tests, so the same helpers serve Fractions,
quotient-ring elements, localized elements and truncated series.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def mat_shape(a) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_neg(a):
    return [[-x for x in row] for row in a]


def mat_scale(a, s):
    return [[x * s for x in row] for row in a]


def mat_mul(a, b):
    rows, inner = mat_shape(a)
    _, cols = mat_shape(b)
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = a[i][0] * b[0][j]
            for k in range(1, inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_commutator(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def mat_is_zero(a) -> bool:
    return all(not x for row in a for x in row)


def mat_eq(a, b) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def frac_identity(n: int):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def frac_zero(rows: int, cols: int):
    return [[Fraction(0)] * cols for _ in range(rows)]


def det(a):
    """Determinant by cofactor expansion; fine for the tiny minors used here."""
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix has no determinant here; handle 0x0 upstream")
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = None
    for j in range(n):
        entry = a[0][j]
        if not entry:
            continue
        minor = [row[:j] + row[j + 1 :] for row in a[1:]]
        term = entry * det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        # expand a genuinely zero first row via any entry's ring
        return a[0][0]
    return total


def replace_column(a, j: int, col: Sequence):
    return [row[:j] + [col[i]] + row[j + 1 :] for i, row in enumerate(a)]


def frac_solve(a, b):
    """Solve A x = b over Fraction by Gaussian elimination; None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[col])]
    return [row[n] for row in m]


def frac_rank(a) -> int:
    if not a or not a[0]:
        return 0
    m = [[Fraction(x) for x in row] for row in a]
    rows, cols = mat_shape(m)
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(rows):
            if r != rank and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def frac_invertible(a) -> bool:
    return len(a) == len(a[0]) and frac_rank(a) == len(a)


def frac_solve_general(a, b):
    """One exact solution of a (possibly non-square) system, or None.

    Row-reduces the augmented matrix; free variables are set to zero.
    """
    if not a:
        return None
    rows = len(a)
    cols = len(a[0])
    m = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(a, b)]
    pivots = []
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(rows):
            if r != rank and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
        if rank == rows:
            break
    for r in range(rank, rows):
        if m[r][cols]:
            return None
    solution = [Fraction(0)] * cols
    for r, col in enumerate(pivots):
        solution[col] = m[r][cols]
    return solution
