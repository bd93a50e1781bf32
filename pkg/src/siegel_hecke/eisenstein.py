"""Characters over squarefree N and Hecke eigenvalues of Klingen-Eisenstein lifts.

A character chi = prod_q chi_q is tracked by a sign per prime q | N: +1 for
chi_q, -1 for its conjugate.  Its value at p is the monomial
prod_q X_q^sign_q, where the symbol ``Xq`` (e.g. ``X3``) stands for chi_q(p).
Eigenvalues come out as scalars in the X_q, K = p^k, optionally P, and the
base eigenvalue symbols ``L`` (for T(p)) and ``L0``, ``L1``, ... (for T_j(p^2)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .cusps import CuspTuple, check_squarefree, prime_factors
from .hecke import K, c_std, c_tp, ppow
from .scalars import LaurentScalar, RootOfUnity, const, evaluate, symbol

__all__ = [
    "CharacterProduct",
    "DirichletPrimeCharacter",
    "character_split",
    "character_step",
    "twisted_coeff_Tp",
    "twisted_coeffs_Tj",
    "base_degree1_lambdas",
    "base_degree1_lambdas_algebra",
    "lift_eigenvalue_Tp",
    "lift_eigenvalue_Tj",
    "evaluate_eigenvalue",
    "BadPrimeError",
    "MissingBaseEigenvalue",
]


class BadPrimeError(ValueError):
    pass


class MissingBaseEigenvalue(KeyError):
    pass


def xsym(q: int) -> str:
    return f"X{q}"


@dataclass(frozen=True)
class CharacterProduct:
    """prod over q in ``signs`` of chi_q or its conjugate; other primes of N are trivial."""

    N: int
    signs: tuple  # sorted ((q, +-1), ...)

    @classmethod
    def full(cls, N: int) -> "CharacterProduct":
        """The formal character chi = prod_{q | N} chi_q."""
        return cls(N, tuple((q, 1) for q in check_squarefree(N)))

    @classmethod
    def trivial(cls, N: int) -> "CharacterProduct":
        check_squarefree(N)
        return cls(N, ())

    def primes(self) -> list:
        return [q for q, _ in self.signs]

    def restrict(self, l: int) -> "CharacterProduct":
        if self.N % l:
            raise ValueError(f"{l} does not divide {self.N}")
        return CharacterProduct(self.N, tuple((q, e) for q, e in self.signs if l % q == 0))

    def conjugate(self) -> "CharacterProduct":
        return CharacterProduct(self.N, tuple((q, -e) for q, e in self.signs))

    def at_power(self, a: int, l: int | None = None) -> LaurentScalar:
        """chi_l(p^a) (all of chi when l is None)."""
        out = const(1)
        for q, e in self.signs:
            if l is None or l % q == 0:
                out = out * symbol(xsym(q), e * a)
        return out

    def value_at_p(self) -> LaurentScalar:
        return self.at_power(1)

    def fingerprint(self) -> tuple:
        return self.signs

    def __str__(self):
        if not self.signs:
            return "1"
        return "*".join(f"chi{q}" if e > 0 else f"conj(chi{q})" for q, e in self.signs)


def character_split(chi: CharacterProduct, l: int):
    """(chi_l, chi_{N/l})."""
    if chi.N % l:
        raise ValueError(f"{l} does not divide {chi.N}")
    return chi.restrict(l), chi.restrict(chi.N // l)


def character_step(psi: CharacterProduct, l: int) -> CharacterProduct:
    """conj(psi_l) * psi_{N/l}."""
    if psi.N % l:
        raise ValueError(f"{l} does not divide {psi.N}")
    return CharacterProduct(psi.N, tuple((q, -e if l % q == 0 else e) for q, e in psi.signs))


@dataclass(frozen=True)
class DirichletPrimeCharacter:
    """The character mod q sending the least primitive root g to exp(2 pi i a/(q-1))."""

    q: int
    a: int

    def generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        phi = q - 1
        fs = set(prime_factors(phi))
        return next(g for g in range(2, q) if all(pow(g, phi // f, q) != 1 for f in fs))

    def value(self, m: int) -> RootOfUnity | None:
        """chi(m) as a root of unity, or None when q | m."""
        q = self.q
        if m % q == 0:
            return None
        if q == 2:
            return RootOfUnity(0, 1)
        g, x, e = self.generator(), 1, 0
        while x != m % q:
            x, e = x * g % q, e + 1
        return RootOfUnity(self.a * e, q - 1)

    def parity(self) -> int:
        """chi(-1) as +-1."""
        return 1 if self.q == 2 or self.a % 2 == 0 else -1


# ---------------------------------------------------------------------------
# twisted coefficients


def twisted_coeff_Tp(n: int, l1: int, chi: CharacterProduct, p="P") -> LaurentScalar:
    """chi_{l1}(p^n) c^{(n-1)}(conj(chi_{l1}) chi_{l0})."""
    stepped = character_step(chi, l1)
    return chi.at_power(n, l1) * c_tp(n, p, stepped.value_at_p())


def twisted_coeffs_Tj(n: int, j: int, l1: int, chi: CharacterProduct, p="P") -> tuple:
    """chi_{l1}(p^{2n}) times (c_{j,j}, c_{j,j-1}, c_{j,j-2}) at the stepped character."""
    stepped = character_step(chi, l1)
    x = stepped.value_at_p()
    f = chi.at_power(2 * n, l1)
    return tuple(f * c_std(n, j, s, p, x) for s in (j, j - 1, j - 2))


# ---------------------------------------------------------------------------
# degree-1 base case


def base_degree1_lambdas(psi: CharacterProduct, p="P", L: LaurentScalar | str = "L") -> tuple:
    """(lambda_0, lambda_1) for T_0(p^2), T_1(p^2) of a degree-1 eigenform with
    T(p)-eigenvalue L, in the form printed alongside the degree-two theorem:
    lambda_0 = p^(k-3) psi(p), lambda_1 = L^2 - (1 + conj(psi)(p) p^(k-1)) lambda_0.
    """
    L = symbol(L) if isinstance(L, str) else L
    x = psi.value_at_p()
    lam0 = K * ppow(p, -3) * x
    lam1 = L * L - (1 + x ** -1 * K * ppow(p, -1)) * lam0
    return lam0, lam1


def base_degree1_lambdas_algebra(psi: CharacterProduct, p="P", L: LaurentScalar | str = "L") -> tuple:
    """(lambda_0, lambda_1) as forced by the normalisation of T~_j:
    T~_0 = 1 gives T_0 = p^(k-2) psi(p), and T~_1 = T_1 + T_0 equals the
    classical T(p^2) = T(p)^2 - psi(p) p^(k-1), so lambda_1 = L^2 - (1+p) lambda_0.
    """
    L = symbol(L) if isinstance(L, str) else L
    x = psi.value_at_p()
    lam0 = K * ppow(p, -2) * x
    lam1 = L * L - (1 + ppow(p, 1)) * lam0
    return lam0, lam1


# ---------------------------------------------------------------------------
# the recursion


def _check_cusp(n: int, r: int, cusp: CuspTuple, chi: CharacterProduct):
    if not 0 <= r < n:
        raise ValueError("need 0 <= r < n")
    if cusp.n != n or cusp.r != r:
        raise ValueError(f"cusp must be an {r}-cusp in degree {n} ({n - r} parts)")
    if cusp.N != chi.N:
        raise ValueError("cusp and character have different levels")


def lift_eigenvalue_Tp(n: int, r: int, cusp: CuspTuple, chi: CharacterProduct,
                       base: LaurentScalar | str | int | None = None, p="P") -> LaurentScalar:
    """T(p)-eigenvalue of the lift of a degree-r eigenform from ``cusp``.

    Uses the factor c^{(t-1)} at each step t = n, ..., r+1.
    """
    _check_cusp(n, r, cusp, chi)
    if base is None:
        base = const(1) if r == 0 else symbol("L")
    elif isinstance(base, str):
        base = symbol(base)
    lam = base if isinstance(base, LaurentScalar) else const(base)
    psi = chi
    for t in range(n, r, -1):
        l = cusp.l(t - r)
        nxt = character_step(psi, l)
        lam = lam * psi.at_power(t, l) * c_tp(t, p, nxt.value_at_p())
        psi = nxt
    return lam


def lift_eigenvalue_Tj(n: int, r: int, j: int, cusp: CuspTuple, chi: CharacterProduct,
                       base: Mapping[int, object] | None = None, p="P") -> LaurentScalar:
    """T_j(p^2)-eigenvalue of the lift, by the memoized theta recursion."""
    _check_cusp(n, r, cusp, chi)
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    if base is None:
        base = {0: const(1)} if r == 0 else {i: symbol(f"L{i}") for i in range(r + 1)}
    base = {i: (symbol(v) if isinstance(v, str) else (v if isinstance(v, LaurentScalar) else const(v)))
            for i, v in base.items()}
    memo: dict = {}

    def theta(m: int, i: int, psi: CharacterProduct) -> LaurentScalar:
        if i < 0 or i > m:
            return LaurentScalar()
        if m == r:
            if i not in base:
                lo, hi = max(0, j - 2 * (n - r)), min(r, j)
                raise MissingBaseEigenvalue(
                    f"base eigenvalue index {i} needed; supply indices {lo}..{hi}")
            return base[i]
        key = (m, i, psi.fingerprint())
        if key in memo:
            return memo[key]
        l = cusp.l(m - r)
        nxt = character_step(psi, l)
        x = nxt.value_at_p()
        acc = LaurentScalar()
        for s in (i, i - 1, i - 2):
            c = c_std(m, i, s, p, x)
            if c:
                acc = acc + c * theta(m - 1, s, nxt)
        out = psi.at_power(2 * m, l) * acc
        memo[key] = out
        return out

    return theta(n, j, chi)


def evaluate_eigenvalue(expr: LaurentScalar, k: int, p: int, chi_values: Mapping[int, object] | None = None,
                        N: int = 1, base_values: Mapping[str, object] | None = None):
    """Numeric value; ``chi_values`` maps q | N to chi_q(p) (RootOfUnity or number)."""
    if N % p == 0:
        raise BadPrimeError("bad prime for eigenvalue evaluation")
    bindings: dict = {"K": Fraction(p) ** k, "P": Fraction(p)}
    for q in check_squarefree(N):
        v = (chi_values or {}).get(q, RootOfUnity(0, 1))
        bindings[xsym(q)] = v
    bindings.update(base_values or {})
    return evaluate(expr, bindings)
