"""Small exact integer-matrix toolkit: Hermite and Smith normal forms,
determinants and rational inverses.

Matrices are lists of rows.  Everything here is exact; sizes are expected to
be desk scale (n <= 6 or so).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

__all__ = [
    "identity",
    "matmul",
    "transpose",
    "det",
    "inverse",
    "hnf",
    "snf",
    "random_unimodular",
    "as_tuple",
]


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def as_tuple(M) -> tuple:
    return tuple(tuple(row) for row in M)


def transpose(M: Sequence[Sequence]) -> list:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    if not A:
        return []
    if not B:
        return [[] for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def det(M: Sequence[Sequence]) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in M]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        result *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return sign * result


def inverse(M: Sequence[Sequence]) -> list:
    """Exact inverse over Q (entries are Fractions)."""
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def hnf(A: Sequence[Sequence[int]]) -> list:
    """Column Hermite normal form of a full-row-rank integer matrix.

    Returns the square lower-triangular H with H Z^n = A Z^m, positive
    diagonal, and entries left of each diagonal entry reduced into
    [0, diagonal).
    """
    n = len(A)
    if n == 0:
        return []
    m = len(A[0])
    cols = [[int(A[i][j]) for i in range(n)] for j in range(m)]
    for i in range(n):
        for j in range(i + 1, len(cols)):
            while cols[j][i] != 0:
                q = cols[i][i] // cols[j][i]
                cols[i] = [x - q * y for x, y in zip(cols[i], cols[j])]
                cols[i], cols[j] = cols[j], cols[i]
        if i >= len(cols) or cols[i][i] == 0:
            raise ValueError("matrix does not have full row rank")
        if cols[i][i] < 0:
            cols[i] = [-x for x in cols[i]]
        for j in range(i):
            q = cols[j][i] // cols[i][i]
            if q:
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[i])]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def snf(A: Sequence[Sequence[int]]):
    """Smith normal form with transforms.

    Returns ``(d, U, V)`` with A = U * diag(d) * V, U and V unimodular and
    d_1 | d_2 | ... (trailing zeros for singular A).  A must be square.
    """
    n = len(A)
    a = [[int(x) for x in row] for row in A]
    L = identity(n)  # row operations applied so far
    R = identity(n)  # column operations applied so far

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for M in (a, R):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        L[dst] = [x + f * y for x, y in zip(L[dst], L[src])]

    def add_col(dst, src, f):
        for M in (a, R):
            for row in M:
                row[dst] += f * row[src]

    for t in range(n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            done = True
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                 if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            L[t] = [-x for x in L[t]]
    d = [a[i][i] for i in range(n)]
    U = [[int(x) for x in row] for row in inverse(L)]
    V = [[int(x) for x in row] for row in inverse(R)]
    return d, U, V


def random_unimodular(n: int, rng: random.Random, steps: int = 12) -> list:
    """Random product of elementary matrices and sign flips."""
    M = identity(n)
    if n == 0:
        return M
    for _ in range(steps):
        if n > 1:
            i, j = rng.sample(range(n), 2)
            f = rng.choice([-2, -1, 1, 2])
            for row in M:
                row[j] += f * row[i]
        if rng.random() < 0.2:
            k = rng.randrange(n)
            for row in M:
                row[k] = -row[k]
    return M
