"""Linear and quadratic algebra over F_p.

Matrices are lists of rows of Python ints.  Subspaces of F_p^d are always
returned as canonical reduced row echelon bases (tuples of row tuples), so
equal subspaces compare equal.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Sequence

from .scalars import LaurentScalar, as_scalar

__all__ = [
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "current_budget",
    "rref",
    "fp_rank",
    "gaussian_binomial",
    "gaussian_binomial_int",
    "enumerate_subspaces",
    "FpQuadSpace",
    "count_totally_isotropic",
    "set_default_budget",
]

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured budget."""

    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(f"enumeration needs {required} items, budget is {budget}")


_configured_budget: int | None = None


def set_default_budget(budget: int | None) -> None:
    """Process-wide budget used when no explicit budget is passed (None resets)."""
    global _configured_budget
    if budget is not None and budget <= 0:
        raise ValueError("budget must be positive")
    _configured_budget = budget


def current_budget(budget: int | None = None) -> int:
    """Explicit argument, then :func:`set_default_budget`, then $SIEGEL_HECKE_BUDGET."""
    if budget is not None:
        return budget
    if _configured_budget is not None:
        return _configured_budget
    env = os.environ.get("SIEGEL_HECKE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def rref(rows: Sequence[Sequence[int]], p: int):
    """Reduced row echelon form mod p.

    Returns ``(basis, pivots)`` where ``basis`` holds only the nonzero rows.
    """
    m = [[x % p for x in row] for row in rows]
    pivots = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def fp_rank(M: Sequence[Sequence[int]], p: int) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M, p)[1])


def gaussian_binomial(n: int, r: int, p) -> LaurentScalar:
    """Gaussian binomial (n choose r)_p; ``p`` may be an int or a scalar such as symbol("P")."""
    if r < 0 or r > n:
        return LaurentScalar()
    q = as_scalar(p)
    # Pascal-type recurrence keeps everything polynomial in a formal q.
    row = [LaurentScalar.const(1)]
    for m in range(1, n + 1):
        new = [LaurentScalar.const(1)]
        for i in range(1, m):
            new.append(row[i - 1] + q ** i * row[i])
        new.append(LaurentScalar.const(1))
        row = new
    return row[r]


def gaussian_binomial_int(n: int, r: int, p: int) -> int:
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(1, r + 1):
        num *= p ** (n - i + 1) - 1
        den *= p ** (r - i + 1) - 1
    return num // den


def enumerate_subspaces(d: int, dim: int, p: int, budget: int | None = None) -> list:
    """All ``dim``-dimensional subspaces of F_p^d as canonical RREF bases."""
    if dim < 0 or dim > d:
        return []
    need = gaussian_binomial_int(d, dim, p)
    limit = current_budget(budget)
    if need > limit:
        raise BudgetExceeded(need, limit)
    out = []
    for pivots in itertools.combinations(range(d), dim):
        # free positions: row i, column c > pivots[i] with c not a pivot
        free = [
            (i, c)
            for i, pc in enumerate(pivots)
            for c in range(pc + 1, d)
            if c not in pivots
        ]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * d for _ in range(dim)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            out.append(tuple(tuple(r) for r in rows))
    return out


@dataclass(frozen=True)
class FpQuadSpace:
    """Quadratic space over F_p.

    ``gram`` is the polar bilinear form B(x, y) = Q(x+y) - Q(x) - Q(y) and
    ``diagQ`` holds Q(e_i).  Q(x) = sum diagQ_i x_i^2 + sum_{i<j} gram_ij x_i x_j.
    """

    p: int
    gram: tuple
    diagQ: tuple

    @property
    def dim(self) -> int:
        return len(self.diagQ)

    @classmethod
    def from_even_gram(cls, T: Sequence[Sequence[int]], p: int) -> "FpQuadSpace":
        n = len(T)
        for i in range(n):
            if T[i][i] % 2:
                raise ValueError("gram matrix must have even diagonal")
        gram = tuple(tuple(int(T[i][j]) % p for j in range(n)) for i in range(n))
        diag = tuple((int(T[i][i]) // 2) % p for i in range(n))
        return cls(p, gram, diag)

    def Q(self, x: Sequence[int]) -> int:
        p, n = self.p, self.dim
        total = sum(self.diagQ[i] * x[i] * x[i] for i in range(n))
        total += sum(
            self.gram[i][j] * x[i] * x[j] for i in range(n) for j in range(i + 1, n)
        )
        return total % p

    def B(self, x: Sequence[int], y: Sequence[int]) -> int:
        n = self.dim
        return sum(self.gram[i][j] * x[i] * y[j] for i in range(n) for j in range(n)) % self.p

    def is_totally_isotropic(self, basis: Sequence[Sequence[int]]) -> bool:
        # Q vanishes on a span iff it vanishes on the basis and the polar form does too.
        for i, v in enumerate(basis):
            if self.Q(v):
                return False
            for w in basis[i + 1:]:
                if self.B(v, w):
                    return False
        return True


def count_totally_isotropic(space: FpQuadSpace, codim: int, budget: int | None = None) -> int:
    target = space.dim - codim
    if codim < 0 or target < 0:
        return 0
    if target == 0:
        return 1
    return sum(
        1
        for sub in enumerate_subspaces(space.dim, target, space.p, budget)
        if space.is_totally_isotropic(sub)
    )
