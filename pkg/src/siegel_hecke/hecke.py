"""Hecke action on lattice-indexed Fourier coefficients.

Conventions.  ``K`` stands for p**k and ``X`` for chi(p).  The prime ``p``
is either a concrete int or the string "P", in which case powers of p are
powers of the formal symbol P.  All results are :class:`LaurentScalar`.

* T(p): a(L; F|T(p)) = sum over pL <= Om <= L of
  X^v K^m0 p^(m1(m1+1)/2 - n(n+1)/2) a(Om^{1/p}),   [Om:pL] = p^v.
* T~_j(p^2): a(L; F|T~_j) = sum over pL <= Om <= L/p of
  X^(j-n+v) p^E_j alpha_j(Om) a(Om).
* T~_j = p^((n-j)(n+1)) K^-(n-j) X^-(n-j) sum_t (n-t choose j-t)_p T_t.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .fpspaces import gaussian_binomial
from .lattices import (
    GramLattice,
    PType,
    Sublattice,
    enumerate_between,
    gram_equivalent,
    is_even_integral,
    split_radical,
)
from .scalars import LaurentScalar, as_scalar, const, symbol

__all__ = [
    "ppow",
    "exponent_E",
    "exponent_Ej",
    "CoeffTable",
    "coefficient_A_Tp",
    "coefficient_A_Ttilde",
    "apply_Tp",
    "apply_Ttilde_j",
    "apply_Tj",
    "tilde_from_standard",
    "standard_from_tilde",
    "c_tp",
    "c_std",
    "c_tilde",
    "intertwine_coeffs",
    "bind_weight",
]

log = logging.getLogger(__name__)

K = symbol("K")
X = symbol("X")


def ppow(p, e) -> LaurentScalar:
    """p**e as a scalar, for p an int or the formal prime "P"."""
    if isinstance(p, str):
        return symbol(p, e) if e else const(1)
    if isinstance(p, LaurentScalar):
        return p ** e
    return const(Fraction(p) ** e)


def exponent_E(pt: PType, n: int, p="P") -> LaurentScalar:
    if pt.m2:
        raise ValueError("T(p) exponent needs a p-type with m2 = 0")
    m0, m1 = pt.m0, pt.m1
    e2 = m1 * (m1 + 1) - n * (n + 1)
    return K ** m0 * ppow(p, e2 // 2)


def exponent_Ej(pt: PType, n: int, j: int, p="P") -> LaurentScalar:
    m0, m1, m2 = pt.m0, pt.m1, pt.m2
    if m0 + m1 + m2 != n:
        raise ValueError("p-type does not sum to n")
    a = m1 - n + j
    e = m2 * (m2 + m1 + 1) + a * (a + 1) // 2 - j * (n + 1)
    return K ** (m0 - m2 + j) * ppow(p, e)


def bind_weight(s: LaurentScalar, p: int, k: int | None = None, chi_p=None) -> LaurentScalar:
    """Substitute K = p^k and/or X = chi(p) into a scalar."""
    b = {}
    if k is not None:
        b["K"] = const(Fraction(p) ** k)
    if chi_p is not None:
        b["X"] = as_scalar(chi_p)
    return s.substitute(b) if b else s


# ---------------------------------------------------------------------------
# coefficient tables


def _gram_key(G) -> tuple:
    return tuple(tuple(int(Fraction(x)) for x in row) for row in G)


@dataclass
class CoeffTable:
    """Fourier coefficients a(L; F) of a degree-n form, keyed by Gram matrix.

    Keys are compared up to GL_n(Z) equivalence after splitting off the
    radical, so a key diag(T', 0) matches T'.  Missing keys read as 0.
    ``lower`` optionally maps a lower degree r to a table used for keys whose
    nondegenerate part has rank r.
    """

    degree: int
    entries: list = field(default_factory=list)  # (reduced gram, value)
    lower: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = [(split_radical(g), as_scalar(v)) for g, v in self.entries]

    def add(self, gram, value) -> None:
        if len(gram) != self.degree:
            raise ValueError(f"gram of size {len(gram)} in a degree {self.degree} table")
        self.entries.append((split_radical(_gram_key(gram)), as_scalar(value)))

    def lookup(self, G) -> LaurentScalar:
        if not is_even_integral(G):
            return LaurentScalar()
        red = split_radical(_gram_key(G))
        for key, val in self.entries:
            if len(key) == len(red) and gram_equivalent(key, red):
                return val
        r = len(red)
        if r < self.degree:
            if r in self.lower:
                return self.lower[r].lookup(red)
            if self.lower:
                log.warning("no table for rank %d key; reading 0", r)
        return LaurentScalar()

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "entries": [
                {"gram": [list(r) for r in key], "value": val.to_json()}
                for key, val in self.entries
            ],
        }

    @classmethod
    def from_json(cls, data) -> "CoeffTable":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "degree" not in data:
            raise ValueError("coefficient table: missing field 'degree'")
        t = cls(int(data["degree"]))
        for i, e in enumerate(data.get("entries", [])):
            if "gram" not in e or "value" not in e:
                raise ValueError(f"coefficient table: entry {i} needs 'gram' and 'value'")
            if e["gram"]:
                GramLattice(e["gram"])  # validates symmetry, parity and PSD
            t.add(e["gram"], LaurentScalar.from_json(e["value"]))
        return t


# ---------------------------------------------------------------------------
# Hafner-Walling coefficients


def coefficient_A_Tp(om: Sublattice, table: CoeffTable | None = None, p=None, a=None) -> LaurentScalar:
    """A(Om, L; F|T(p)).

    ``a`` overrides the coefficient lookup with an explicit scalar standing for
    a(Om^{1/p}); it is only used when Om^{1/p} is even integral.
    """
    p = om.p if p is None else p
    if not om.is_scaled_integral():
        return LaurentScalar()
    coeff = a if a is not None else table.lookup(om.gram_scaled())
    if not coeff:
        return LaurentScalar()
    pt = om.ptype_tp()
    return X ** pt.m0 * exponent_E(pt, om.n, p) * coeff


def coefficient_A_Ttilde(om: Sublattice, j: int, table: CoeffTable | None = None, p=None, a=None) -> LaurentScalar:
    """A(Om, L; F|T~_j(p^2))."""
    p = om.p if p is None else p
    n = om.n
    if not om.is_integral():
        return LaurentScalar()
    coeff = a if a is not None else table.lookup(om.gram())
    if not coeff:
        return LaurentScalar()
    pt = om.ptype()
    alpha = om.alpha(j, n)
    if not alpha:
        return LaurentScalar()
    v = 2 * pt.m0 + pt.m1
    return X ** (j - n + v) * exponent_Ej(pt, n, j, p) * alpha * coeff


def apply_Tp(table: CoeffTable, lat: GramLattice, p: int, budget: int | None = None) -> LaurentScalar:
    total = LaurentScalar()
    for om in enumerate_between(lat, p, "lattice", budget):
        total = total + coefficient_A_Tp(om, table)
    return total


def apply_Ttilde_j(table: CoeffTable, lat: GramLattice, p: int, j: int, budget: int | None = None) -> LaurentScalar:
    if not 0 <= j <= lat.n:
        raise ValueError("need 0 <= j <= n")
    total = LaurentScalar()
    for om in enumerate_between(lat, p, "full", budget):
        total = total + coefficient_A_Ttilde(om, j, table)
    return total


def apply_Tj(table: CoeffTable, lat: GramLattice, p: int, j: int, budget: int | None = None) -> LaurentScalar:
    """a(L; F|T_j(p^2)) through the inverse of the averaging matrix."""
    n = lat.n
    inv = standard_from_tilde(n, p)
    total = LaurentScalar()
    for s in range(j + 1):
        if inv[j][s]:
            total = total + inv[j][s] * apply_Ttilde_j(table, lat, p, s, budget)
    return total


# ---------------------------------------------------------------------------
# change of basis between T_t and T~_j


def tilde_from_standard(n: int, p="P") -> list:
    """Matrix M with T~_j = sum_t M[j][t] T_t (rows and columns 0..n)."""
    M = [[LaurentScalar() for _ in range(n + 1)] for _ in range(n + 1)]
    for j in range(n + 1):
        pref = ppow(p, (n - j) * (n + 1)) * K ** (j - n) * X ** (j - n)
        for t in range(j + 1):
            M[j][t] = pref * gaussian_binomial(n - t, j - t, symbol(p) if isinstance(p, str) else p)
    return M


def _lower_triangular_inverse(M: list) -> list:
    size = len(M)
    inv = [[LaurentScalar() for _ in range(size)] for _ in range(size)]
    for j in range(size):
        d = M[j][j].invert()
        inv[j][j] = d
        for i in range(j + 1, size):
            acc = LaurentScalar()
            for t in range(j, i):
                if M[i][t] and inv[t][j]:
                    acc = acc + M[i][t] * inv[t][j]
            inv[i][j] = -(M[i][i].invert()) * acc
    return inv


def standard_from_tilde(n: int, p="P") -> list:
    """Exact inverse of :func:`tilde_from_standard`."""
    return _lower_triangular_inverse(tilde_from_standard(n, p))


# ---------------------------------------------------------------------------
# closed-form intertwining coefficients (superscript n-1, source degree n)


def c_tp(n: int, p="P", x: LaurentScalar = X) -> LaurentScalar:
    return 1 + x * K * ppow(p, -n)


def c_std(n: int, j: int, s: int, p="P", x: LaurentScalar = X) -> LaurentScalar:
    """c^{(n-1)}_{j,s}; zero outside s in {j, j-1, j-2} and 0 <= s <= n-1."""
    if s < 0 or s > n - 1 or j < 0 or j > n:
        return LaurentScalar()
    P = lambda e: ppow(p, e)  # noqa: E731
    if s == j:
        return x * K * P(j - 2 * n)
    if s == j - 1:
        return x ** 2 * K ** 2 * P(-2 * n) + x * (K * P(j - 2 * n) - K * P(j - 2 * n - 1)) + 1
    if s == j - 2:
        return x * (K * P(-j + 1) - K * P(j - 2 * n - 1))
    return LaurentScalar()


def c_tilde(n: int, j: int, s: int, p="P", x: LaurentScalar = X) -> LaurentScalar:
    """Coefficient of Phi(F)|T~_s^{(n-1)} in Phi(F|T~_j^{(n)})."""
    if s < 0 or s > n - 1 or j < 0 or j > n:
        return LaurentScalar()
    P = lambda e: ppow(p, e)  # noqa: E731
    if s == j:
        return const(1)
    if s == j - 1:
        return x ** 2 * K ** 2 * P(-j - n) + x * K * P(-n) + P(n - j)
    if s == j - 2:
        return x ** 2 * (K ** 2 * P(-2 * j + 1) - K ** 2 * P(-n - j))
    return LaurentScalar()


def intertwine_coeffs(n: int, kind: str, j: int | None = None, p="P", x: LaurentScalar = X) -> dict:
    """Named coefficients relating degree-n operators to degree n-1."""
    if n < 1:
        raise ValueError("need n >= 1")
    if kind == "Tp":
        return {"c": c_tp(n, p, x)}
    if j is None or not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    f = {"Tj": c_std, "Tj_tilde": c_tilde}.get(kind)
    if f is None:
        raise ValueError(f"unknown kind {kind!r}")
    return {f"c_{j},{s}": f(n, j, s, p, x) for s in (j, j - 1, j - 2)}
