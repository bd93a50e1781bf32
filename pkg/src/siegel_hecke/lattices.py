"""Even lattices, sublattices between p*L and L/p, p-types and isometry tests.

A lattice L is Z^n with an even positive semidefinite Gram matrix T.  A
sublattice Omega with pL <= Omega <= p^-1 L is stored by the integer matrix
``num`` = p * (basis of Omega) in column Hermite normal form, so the basis of
Omega is ``num / p``.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .fpspaces import (
    BudgetExceeded,
    FpQuadSpace,
    count_totally_isotropic,
    current_budget,
    enumerate_subspaces,
    fp_rank,
    gaussian_binomial_int,
)
from .normal_forms import (
    as_tuple,
    det,
    hnf,
    identity,
    inverse,
    matmul,
    random_unimodular,
    snf,
    transpose,
)

__all__ = [
    "GramLattice",
    "Sublattice",
    "PType",
    "EquivalenceUnsupported",
    "ptype",
    "enumerate_between",
    "direct_subgroup_enumeration",
    "count_formula",
    "induced_gram",
    "is_even_integral",
    "project_drop_last",
    "extend_by_zero",
    "gram_equivalent",
    "split_radical",
    "is_psd",
]

MODES = ("lattice", "full")


class EquivalenceUnsupported(ValueError):
    pass


def _principal_minors_nonneg(T) -> bool:
    n = len(T)
    for size in range(1, n + 1):
        for idx in itertools.combinations(range(n), size):
            if det([[T[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def is_psd(T) -> bool:
    """Exact PSD test: every principal minor is nonnegative."""
    return _principal_minors_nonneg(T)


def _is_pd(T) -> bool:
    return all(det([row[:k] for row in T[:k]]) > 0 for k in range(1, len(T) + 1))


@dataclass(frozen=True)
class GramLattice:
    """Z^n with an even positive semidefinite Gram matrix."""

    gram: tuple

    def __init__(self, gram: Sequence[Sequence[int]]):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("gram matrix must be square")
        for i in range(n):
            if g[i][i] % 2:
                raise ValueError("gram matrix must have even diagonal")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        if not is_psd(g):
            raise ValueError("gram matrix must be positive semidefinite")
        object.__setattr__(self, "gram", g)

    @property
    def n(self) -> int:
        return len(self.gram)

    def is_positive_definite(self) -> bool:
        return _is_pd(self.gram)

    def to_json(self) -> dict:
        return {"n": self.n, "gram": [list(r) for r in self.gram]}

    @classmethod
    def from_json(cls, data) -> "GramLattice":
        if isinstance(data, str):
            data = json.loads(data)
        g = data["gram"]
        if "n" in data and data["n"] != len(g):
            raise ValueError("field 'n' does not match gram size")
        return cls(g)


@dataclass(frozen=True, order=True)
class PType:
    m0: int
    m1: int
    m2: int = 0

    @property
    def n(self) -> int:
        return self.m0 + self.m1 + self.m2

    def __iter__(self):
        return iter((self.m0, self.m1, self.m2))


@dataclass(frozen=True)
class Sublattice:
    """Omega = num/p with p*L <= Omega <= p^-1 L, num in column HNF."""

    ambient: GramLattice
    p: int
    num: tuple

    def __init__(self, ambient: GramLattice, p: int, num, normalize: bool = True):
        n = ambient.n
        m = as_tuple(hnf(num)) if (normalize and n) else as_tuple(num)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "num", m)
        if n:
            if any(x % 1 for row in m for x in row):
                raise ValueError("basis must lie in p^-1 L")
            inv = inverse(m)
            if any((p * p * x).denominator != 1 for row in inv for x in row):
                raise ValueError("sublattice must contain p L")

    @property
    def n(self) -> int:
        return self.ambient.n

    def basis(self) -> list:
        return [[Fraction(x, self.p) for x in row] for row in self.num]

    def key(self) -> str:
        return json.dumps([list(r) for r in self.num], separators=(",", ":")) + f"/{self.p}"

    def in_lattice(self) -> bool:
        """True when Omega <= L."""
        return all(x % self.p == 0 for row in self.num for x in row)

    def elementary_divisors(self) -> list:
        return snf(self.num)[0] if self.n else []

    def ptype(self) -> PType:
        d = self.elementary_divisors()
        p = self.p
        return PType(d.count(1), d.count(p), d.count(p * p))

    def ptype_tp(self) -> PType:
        """(m0, m1) for p*L <= Omega <= L."""
        if not self.in_lattice():
            raise ValueError("sublattice is not contained in L")
        t = self.ptype()
        return PType(t.m1, t.m2)

    def index_exponent(self) -> int:
        """v with [Omega : pL] = p^v (generalized index)."""
        t = self.ptype()
        return 2 * t.m0 + t.m1

    def gram(self) -> list:
        return induced_gram(self)

    def gram_scaled(self) -> list:
        """Gram of Omega^{1/p}, i.e. the form Q/p."""
        return [[x / self.p for x in row] for row in induced_gram(self)]

    def is_integral(self) -> bool:
        return is_even_integral(self.gram())

    def is_scaled_integral(self) -> bool:
        return is_even_integral(self.gram_scaled())

    def decomposition(self):
        """Invariant-factor data ``(d, U)``: L has basis the columns of U and
        Omega = span(d_i/p * u_i)."""
        d, U, _ = snf(self.num)
        return d, U

    def lambda1_gram(self, U=None, d=None) -> list:
        if U is None:
            d, U = self.decomposition()
        cols = [i for i, di in enumerate(d) if di == self.p]
        U1 = [[U[r][c] for c in cols] for r in range(self.n)]
        return matmul(matmul(transpose(U1), [list(r) for r in self.ambient.gram]), U1)

    def alpha(self, j: int, n: int | None = None) -> int:
        """Number of totally isotropic subspaces of L1/pL1 of codimension n-j."""
        n = self.n if n is None else n
        g = self.lambda1_gram()
        if not g:
            return 1 if n - j == 0 else 0
        return count_totally_isotropic(FpQuadSpace.from_even_gram(g, self.p), n - j)

    def alpha_after_basis_change(self, j: int, W) -> int:
        """alpha_j recomputed in the coordinates given by the unimodular W."""
        Winv = [[int(x) for x in row] for row in inverse(W)]
        amb = GramLattice(matmul(matmul(transpose(W), [list(r) for r in self.ambient.gram]), W))
        other = Sublattice(amb, self.p, matmul(Winv, [list(r) for r in self.num]))
        return other.alpha(j, self.n)

    def to_json(self) -> dict:
        return {"p": self.p, "basis_num": [list(r) for r in self.num], "basis_den": self.p}

    @classmethod
    def from_json(cls, ambient: GramLattice, data) -> "Sublattice":
        if isinstance(data, str):
            data = json.loads(data)
        p = int(data["p"])
        den = int(data.get("basis_den", p))
        if p % den:
            raise ValueError("basis_den must divide p")
        num = [[int(x) * (p // den) for x in row] for row in data["basis_num"]]
        return cls(ambient, p, num)


def ptype(om: Sublattice) -> PType:
    return om.ptype()


def induced_gram(om: Sublattice) -> list:
    if om.n == 0:
        return []
    B = [list(r) for r in om.num]
    G = matmul(matmul(transpose(B), [list(r) for r in om.ambient.gram]), B)
    q = om.p * om.p
    return [[Fraction(x, q) for x in row] for row in G]


def is_even_integral(G) -> bool:
    for i, row in enumerate(G):
        for j, x in enumerate(row):
            x = Fraction(x)
            if x.denominator != 1:
                return False
            if i == j and x.numerator % 2:
                return False
    return True


def count_formula(n: int, s: int, t: int, p: int) -> int:
    """Number of Omega of p-type (t, s-t, n-s)."""
    return gaussian_binomial_int(n, s, p) * gaussian_binomial_int(s, t, p) * p ** (t * (n - s))


def _total_count(n: int, p: int, mode: str) -> int:
    if mode == "lattice":
        return sum(gaussian_binomial_int(n, s, p) for s in range(n + 1))
    return sum(count_formula(n, s, t, p) for s in range(n + 1) for t in range(s + 1))


def _lift_with_p(rows, n, p) -> list:
    """Integer matrix whose columns are the lifted rows plus p*e_i."""
    cols = [list(r) for r in rows] + [[p * int(i == j) for j in range(n)] for i in range(n)]
    return transpose(cols)


def enumerate_between(lat: GramLattice, p: int, mode: str = "full", budget: int | None = None) -> list:
    """All Omega with pL <= Omega <= L (mode "lattice") or pL <= Omega <= p^-1 L (mode "full")."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    n = lat.n
    limit = current_budget(budget)
    need = _total_count(n, p, mode)
    if need > limit:
        raise BudgetExceeded(need, limit)
    if n == 0:
        return [Sublattice(lat, p, [])]
    out = []
    if mode == "lattice":
        for s in range(n + 1):
            for sub in enumerate_subspaces(n, s, p):
                gen = _lift_with_p(sub, n, p)
                out.append(Sublattice(lat, p, [[p * x for x in row] for row in gen]))
        return out
    for s in range(n + 1):
        for d1 in enumerate_subspaces(n, s, p):
            D = hnf(_lift_with_p(d1, n, p))  # basis of Delta_1
            Dinv = inverse(D)
            # image of pL in Delta_1 / p Delta_1
            W = [[int(p * Dinv[r][c]) % p for r in range(n)] for c in range(n)]
            w_rank = fp_rank(W, p)
            for t in range(s + 1):
                for d2 in enumerate_subspaces(n, t, p):
                    if fp_rank(list(W) + list(d2), p) != w_rank + t:
                        continue
                    coords = _lift_with_p(d2, n, p)  # columns in Delta_1 coordinates
                    out.append(Sublattice(lat, p, matmul(D, coords)))
    return out


def direct_subgroup_enumeration(lat: GramLattice, p: int, mode: str = "full") -> list:
    """Independent oracle: every column HNF H with p^2 Z^n <= H Z^n <= Z^n."""
    n = lat.n
    if n == 0:
        return [Sublattice(lat, p, [])]
    out = []
    diags = [1, p, p * p] if mode == "full" else [p, p * p]
    for diag in itertools.product(diags, repeat=n):
        slots = [(i, j) for i in range(n) for j in range(i)]
        ranges = [range(diag[i]) for i, _ in slots]
        for vals in itertools.product(*ranges):
            H = [[0] * n for _ in range(n)]
            for i in range(n):
                H[i][i] = diag[i]
            for (i, j), v in zip(slots, vals):
                H[i][j] = v
            if mode == "lattice" and any(x % p for row in H for x in row):
                continue
            inv = inverse(H)
            if all((p * p * x).denominator == 1 for row in inv for x in row):
                out.append(Sublattice(lat, p, H, normalize=False))
    return out


def extend_by_zero(lat: GramLattice) -> GramLattice:
    n = lat.n
    g = [list(r) + [0] for r in lat.gram] + [[0] * (n + 1)]
    return GramLattice(g)


def restrict_first(lat: GramLattice) -> GramLattice:
    """L' from L = L' + Z x_n, checking that x_n lies in the radical."""
    n = lat.n
    if n == 0 or any(lat.gram[n - 1][i] for i in range(n)):
        raise ValueError("ambient lattice is not of the form L' + Z x_n with x_n in the radical")
    return GramLattice([row[: n - 1] for row in lat.gram[: n - 1]])


def project_drop_last(om: Sublattice, base: GramLattice | None = None) -> Sublattice:
    base = restrict_first(om.ambient) if base is None else base
    n = om.n
    if n == 1:
        return Sublattice(base, om.p, [])
    return Sublattice(base, om.p, [list(row) for row in om.num[: n - 1]])


# ---------------------------------------------------------------------------
# isometry testing

MAX_EQUIV_RANK = 4
MAX_EQUIV_BOX = 200_000


def _short_vectors(T, norm: int) -> list:
    n = len(T)
    Tinv = inverse(T)
    bounds = [math.isqrt(int(norm * Tinv[i][i])) + 1 for i in range(n)]
    box = 1
    for b in bounds:
        box *= 2 * b + 1
    if box > MAX_EQUIV_BOX:
        raise EquivalenceUnsupported("equivalence test unsupported at this size")
    out = []
    for v in itertools.product(*[range(-b, b + 1) for b in bounds]):
        if sum(v[i] * T[i][j] * v[j] for i in range(n) for j in range(n)) == norm:
            out.append(v)
    return out


@lru_cache(maxsize=4096)
def _equiv(T1: tuple, T2: tuple) -> bool:
    n = len(T1)
    if det(T1) != det(T2):
        return False
    cands = [_short_vectors(T1, T2[i][i]) for i in range(n)]

    def ip(u, v):
        return sum(u[a] * T1[a][b] * v[b] for a in range(n) for b in range(n))

    chosen: list = []

    def search(i):
        if i == n:
            return abs(det(transpose(chosen))) == 1
        for v in cands[i]:
            if all(ip(chosen[k], v) == T2[k][i] for k in range(i)):
                chosen.append(v)
                if search(i + 1):
                    return True
                chosen.pop()
        return False

    return search(0)


def gram_equivalent(T1, T2) -> bool:
    """True iff tG T1 G = T2 for some G in GL_n(Z); positive definite input."""
    T1 = as_tuple(T1)
    T2 = as_tuple(T2)
    if len(T1) != len(T2):
        return False
    n = len(T1)
    if n == 0:
        return True
    if n > MAX_EQUIV_RANK:
        raise EquivalenceUnsupported("equivalence test unsupported at this size")
    if not (_is_pd(T1) and _is_pd(T2)):
        raise ValueError("gram_equivalent needs positive definite forms")
    if sorted(T1[i][i] for i in range(n)) == sorted(T2[i][i] for i in range(n)) and T1 == T2:
        return True
    return _equiv(T1, T2)


def split_radical(T) -> tuple:
    """Return the nondegenerate part T' with T ~ diag(T', 0)."""
    n = len(T)
    if n == 0:
        return ()
    d, _, V = snf([list(r) for r in T])
    R = [[int(x) for x in row] for row in inverse(V)]
    r = sum(1 for x in d if x)
    G = matmul(matmul(transpose(R), [list(row) for row in T]), R)
    return as_tuple(row[:r] for row in G[:r])


def random_unimodular_change(om: Sublattice, seed: int) -> list:
    return random_unimodular(om.n, random.Random(seed))
