"""Exact coefficient arithmetic.

Everything in the package computes with :class:`LaurentScalar`, a sparse
multivariate Laurent polynomial with rational coefficients.  Symbols are
plain strings; the ones used throughout are

* ``K``   -- stands for p**k,
* ``X``   -- chi(p) for the character of the form being acted on,
* ``X2``, ``X3``, ... -- chi_q(p) for the prime-power components of chi,
* ``P``   -- a formal prime (only when identities are checked generically),
* ``L``, ``L0``, ``L1``, ... -- base eigenvalues of a lifted cusp form.

Character values at a good prime lie on the unit circle, so conj(chi(p)) is
represented by ``X**-1``.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentScalar",
    "RootOfUnity",
    "NonInvertibleError",
    "UnboundSymbolError",
    "as_scalar",
    "symbol",
    "const",
    "evaluate",
    "FLOAT_TOLERANCE",
]

# Monomials are sorted tuples of (symbol, nonzero exponent).
Monomial = tuple

FLOAT_TOLERANCE = 1e-9


class NonInvertibleError(ArithmeticError):
    pass


class UnboundSymbolError(KeyError):
    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__(f"unbound symbols: {', '.join(self.missing)}")


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for s, e in b:
        exps[s] = exps.get(s, 0) + e
    return tuple(sorted((s, e) for s, e in exps.items() if e))


def _mono_pow(a: Monomial, k: int) -> Monomial:
    return tuple((s, e * k) for s, e in a) if k else ()


class LaurentScalar:
    """Sparse Laurent polynomial over Q in string-named symbols.

    Instances are immutable and hashable.  Zero terms are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[tuple(sorted((s, int(e)) for s, e in mono if e))] = c
        self._terms = clean
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, c) -> "LaurentScalar":
        return cls({(): Fraction(c)})

    @classmethod
    def symbol(cls, name: str, exp: int = 1) -> "LaurentScalar":
        return cls({((name, exp),): Fraction(1)})

    @classmethod
    def monomial(cls, coeff=1, **exps: int) -> "LaurentScalar":
        return cls({tuple(sorted(exps.items())): Fraction(coeff)})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def symbols(self) -> set:
        return {s for mono in self._terms for s, _ in mono}

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def degree_in(self, names: Iterable[str]) -> int:
        """Largest total exponent of ``names`` over all terms (0 for zero)."""
        names = set(names)
        return max(
            (sum(e for s, e in mono if s in names) for mono in self._terms),
            default=0,
        )

    def coefficient(self, mono: Mapping[str, int] | Monomial = ()) -> Fraction:
        if isinstance(mono, Mapping):
            mono = tuple(sorted((s, e) for s, e in mono.items() if e))
        return self._terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = as_scalar(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, 0) + c
        return LaurentScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-as_scalar(other))

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        other = as_scalar(other)
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return LaurentScalar(out)

    __rmul__ = __mul__

    def invert(self) -> "LaurentScalar":
        if len(self._terms) != 1:
            raise NonInvertibleError("non-invertible scalar")
        (mono, c), = self._terms.items()
        return LaurentScalar({_mono_pow(mono, -1): 1 / c})

    def __truediv__(self, other):
        other = as_scalar(other)
        return self * other.invert()

    def __rtruediv__(self, other):
        return as_scalar(other) * self.invert()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.invert() ** (-k)
        if self.is_monomial():
            (mono, c), = self._terms.items()
            return LaurentScalar({_mono_pow(mono, k): c ** k})
        result = LaurentScalar.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            other = as_scalar(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- substitution / evaluation ---------------------------------------

    def substitute(self, bindings: Mapping[str, object]) -> "LaurentScalar":
        """Replace some symbols by exact values (rationals or scalars)."""
        out = LaurentScalar()
        for mono, c in self._terms.items():
            term = LaurentScalar.const(c)
            rest = []
            for s, e in mono:
                if s in bindings:
                    term = term * as_scalar(bindings[s]) ** e
                else:
                    rest.append((s, e))
            out = out + term * LaurentScalar({tuple(rest): 1})
        return out

    def evaluate(self, bindings: Mapping[str, object]):
        return evaluate(self, bindings)

    # -- formatting / serialisation --------------------------------------

    def __repr__(self):
        return f"LaurentScalar({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = [s if e == 1 else f"{s}^{e}" for s, e in mono]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "terms": [
                {
                    "exp": dict(mono),
                    "num": str(c.numerator),
                    "den": str(c.denominator),
                }
                for mono, c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json(cls, data) -> "LaurentScalar":
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, (int, float)) and not isinstance(data, bool):
            return cls.const(Fraction(data))
        terms = {}
        for t in data["terms"]:
            mono = tuple(sorted((s, int(e)) for s, e in t.get("exp", {}).items()))
            c = Fraction(int(t["num"]), int(t.get("den", "1")))
            terms[mono] = terms.get(mono, 0) + c
        return cls(terms)


def as_scalar(x) -> LaurentScalar:
    if isinstance(x, LaurentScalar):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction, Rational)):
        return LaurentScalar.const(x)
    raise TypeError(f"cannot convert {type(x).__name__} to LaurentScalar")


def symbol(name: str, exp: int = 1) -> LaurentScalar:
    return LaurentScalar.symbol(name, exp)


def const(c) -> LaurentScalar:
    return LaurentScalar.const(c)


@dataclass(frozen=True)
class RootOfUnity:
    """exp(2*pi*i*numerator/order), kept in lowest terms."""

    numerator: int
    order: int

    def __post_init__(self):
        if self.order <= 0:
            raise ValueError("order must be positive")
        num = self.numerator % self.order
        g = gcd(num, self.order)
        object.__setattr__(self, "numerator", num // g)
        object.__setattr__(self, "order", self.order // g)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        o = self.order * other.order // gcd(self.order, other.order)
        return RootOfUnity(
            self.numerator * (o // self.order) + other.numerator * (o // other.order), o
        )

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.numerator * k, self.order)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(-self.numerator, self.order)

    def is_rational(self) -> bool:
        return self.order <= 2

    def value(self):
        """Exact ``Fraction`` for orders 1 and 2, ``complex`` otherwise."""
        if self.order == 1:
            return Fraction(1)
        if self.order == 2:
            return Fraction(-1)
        return cmath.exp(2j * cmath.pi * self.numerator / self.order)


Binding = Union[int, Fraction, complex, float, RootOfUnity, LaurentScalar]


def _binding_value(v):
    if isinstance(v, RootOfUnity):
        return v.value()
    if isinstance(v, LaurentScalar):
        return v.constant_value()
    if isinstance(v, bool):
        raise TypeError("bool is not a valid binding")
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, (float, complex)):
        return complex(v)
    raise TypeError(f"unsupported binding type {type(v).__name__}")


def evaluate(s: LaurentScalar, bindings: Mapping[str, Binding]):
    """Numeric value of ``s``.

    Returns a ``Fraction`` when every binding used is rational (including
    roots of unity of order 1 or 2), otherwise a ``complex`` whose accuracy is
    documented as ``FLOAT_TOLERANCE`` absolute.
    """
    s = as_scalar(s)
    missing = s.symbols() - set(bindings)
    if missing:
        raise UnboundSymbolError(missing)
    values = {name: _binding_value(bindings[name]) for name in s.symbols()}
    exact = all(isinstance(v, Fraction) for v in values.values())
    total = Fraction(0) if exact else 0j
    for mono, c in s._terms.items():
        term = c if exact else complex(c)
        for name, e in mono:
            v = values[name]
            if v == 0 and e < 0:
                raise ZeroDivisionError(f"{name} bound to 0 with exponent {e}")
            term = term * v ** e
        total += term
    return total
