"""Cusps of Gamma_0(N)\\H_n^* for squarefree N.

An r-cusp is a tuple (l_{n-r}, ..., l_1) of pairwise coprime divisors of N;
l_0 = N / (l_{n-r} ... l_1).  Equivalently each prime q | N is assigned an
index i in 0..n-r, namely the i with q | l_i.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .fpspaces import fp_rank
from .normal_forms import identity, inverse, matmul, transpose

__all__ = [
    "prime_factors",
    "check_squarefree",
    "CuspTuple",
    "enumerate_cusps",
    "cusps_above",
    "embed_cusp",
    "embed_cusp_by_rank",
    "verify_multiplicity",
    "verify_no_self_intersection",
    "sl2_crt_lift",
    "gamma_rep",
    "kappa_rep",
    "xi_embed",
    "standard_rep",
    "embedded_rep",
    "rank_profile",
    "tuple_from_profile",
    "is_symplectic",
    "similitude",
    "random_gamma0",
    "incidence",
    "incidence_dot",
    "verify_reps",
    "gamma_congruences_ok",
    "kappa_conjugate",
]


def prime_factors(N: int) -> list:
    """Sorted prime factors of N with multiplicity (trial division; N is small)."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    out, d = [], 2
    while d * d <= N:
        while N % d == 0:
            out.append(d)
            N //= d
        d += 1
    if N > 1:
        out.append(N)
    return out


def check_squarefree(N: int) -> list:
    ps = prime_factors(N)
    if len(set(ps)) != len(ps):
        raise ValueError(f"N = {N} is not squarefree")
    return ps


@dataclass(frozen=True, order=True)
class CuspTuple:
    N: int
    n: int
    r: int
    parts: tuple  # (l_{n-r}, ..., l_1)

    def __post_init__(self):
        check_squarefree(self.N)
        if not 0 <= self.r <= self.n:
            raise ValueError("need 0 <= r <= n")
        if len(self.parts) != self.n - self.r:
            raise ValueError(f"an {self.r}-cusp in degree {self.n} has {self.n - self.r} parts")
        if any(x < 1 or self.N % x for x in self.parts):
            raise ValueError("parts must be positive divisors of N")
        if prod(self.parts) and self.N % prod(self.parts):
            raise ValueError("parts must be pairwise coprime")
        for a, b in itertools.combinations(self.parts, 2):
            if gcd(a, b) != 1:
                raise ValueError("parts must be pairwise coprime")

    @property
    def l0(self) -> int:
        return self.N // prod(self.parts)

    def l(self, i: int) -> int:
        """l_i for 0 <= i <= n-r."""
        if i == 0:
            return self.l0
        if not 1 <= i <= self.n - self.r:
            raise IndexError(i)
        return self.parts[self.n - self.r - i]

    def index_of(self, q: int) -> int:
        """The i with q | l_i."""
        for i in range(self.n - self.r + 1):
            if self.l(i) % q == 0:
                return i
        raise ValueError(f"{q} does not divide N")

    def label(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"

    def to_json(self) -> dict:
        return {"N": self.N, "n": self.n, "r": self.r, "parts": list(self.parts), "l0": self.l0}


def _from_assignment(N, n, r, primes, assign) -> CuspTuple:
    ls = [1] * (n - r + 1)
    for q, i in zip(primes, assign):
        ls[i] *= q
    return CuspTuple(N, n, r, tuple(ls[i] for i in range(n - r, 0, -1)))


def enumerate_cusps(N: int, n: int, r: int) -> list:
    primes = check_squarefree(N)
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    out = [
        _from_assignment(N, n, r, primes, assign)
        for assign in itertools.product(range(n - r + 1), repeat=len(primes))
    ]
    return sorted(out)


def _divisors(m: int) -> list:
    ps = prime_factors(m)
    return sorted(prod(c) for k in range(len(ps) + 1) for c in itertools.combinations(ps, k))


def cusps_above(c: CuspTuple) -> list:
    """The (s+1)-cusps on which the s-cusp c lies."""
    s, n = c.r, c.n
    if not 0 <= s < n - 1:
        raise ValueError("cusps_above needs 0 <= s < n-1")
    m = n - s - 1  # number of c_i
    out = set()
    for cs in itertools.product(*[_divisors(c.l(i)) for i in range(1, m + 1)]):
        ci = {i: cs[i - 1] for i in range(1, m + 1)}
        d = [c.l(n - s) * ci[m]]
        for i in range(m - 1, 0, -1):
            d.append(c.l(i + 1) // ci[i + 1] * ci[i])
        out.add(CuspTuple(c.N, n, s + 1, tuple(d)))
    return sorted(out)


def embed_cusp(outer: CuspTuple, inner: CuspTuple) -> CuspTuple:
    """View the s-cusp ``inner`` of the degree-r boundary component ``outer``
    as an s-cusp of degree n, via the gcd product formulas."""
    N, n, r = outer.N, outer.n, outer.r
    if inner.N != N or inner.n != r:
        raise ValueError("inner cusp must be of degree r and the same level")
    s = inner.r
    d = r - s

    def lo(a):
        return outer.l(a) if 0 <= a <= n - r else None

    def mi(b):
        return inner.l(b) if 0 <= b <= d else None

    def g(b, a):
        x, y = mi(b), lo(a)
        return 1 if x is None or y is None else gcd(x, y)

    parts = []
    for i in range(n - s, 0, -1):
        if i > d:
            v = prod(g(d - b, i - b) for b in range(d + 1) if 1 <= i - b <= n - r)
        else:
            v = prod(g(d - b, i - b) for b in range(i)) * g(i, 0)
        parts.append(v)
    return CuspTuple(N, n, s, tuple(parts))


def embed_cusp_by_rank(outer: CuspTuple, inner: CuspTuple) -> CuspTuple:
    """Same map computed prime by prime from the C_22 rank rule."""
    n, r, s = outer.n, outer.r, inner.r
    primes = check_squarefree(outer.N)
    assign = []
    for q in primes:
        a, j = outer.index_of(q), inner.index_of(q)
        assign.append(j if a == 0 else r - s + a - j)
    return _from_assignment(outer.N, n, s, primes, assign)


def verify_multiplicity(N: int, n: int, s: int) -> dict:
    """s-cusps counted once per (s+1)-cusp containing them, two ways."""
    t = len(check_squarefree(N))
    closed = 2 ** t * (n - s) ** t
    if s == n - 1:
        fibres = len(enumerate_cusps(N, n, s))  # each lies on the interior once
        via_embed = fibres
    else:
        fibres = sum(len(cusps_above(c)) for c in enumerate_cusps(N, n, s))
        via_embed = sum(
            len({embed_cusp(d, m) for m in enumerate_cusps(N, s + 1, s)})
            for d in enumerate_cusps(N, n, s + 1)
        )
    return {
        "N": N, "n": n, "s": s, "t": t,
        "via_cusps_above": fibres, "via_embedding": via_embed, "closed_form": closed,
        "passed": fibres == closed == via_embed,
    }


def verify_no_self_intersection(N: int, n: int) -> dict:
    """For each r-cusp and s <= r, distinct inner s-cusps embed to distinct s-cusps."""
    checks = failures = 0
    for r in range(n):
        for outer in enumerate_cusps(N, n, r):
            for s in range(r + 1):
                inner = enumerate_cusps(N, r, s)
                images = [embed_cusp(outer, m) for m in inner]
                checks += 1
                if len(set(images)) != len(inner):
                    failures += 1
    return {"N": N, "n": n, "checks": checks, "failures": failures, "passed": failures == 0}


# ---------------------------------------------------------------------------
# representative matrices


def _crt(r1, m1, r2, m2) -> int:
    if m1 == 1:
        return r2 % m2
    if m2 == 1:
        return r1 % m1
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2) % m2)) % (m1 * m2)


def sl2_crt_lift(l: int, m: int) -> list:
    """Matrix in SL_2(Z), = (0,-1;1,0) mod l^2 and = identity mod m^2."""
    if gcd(l, m) != 1:
        raise ValueError("l and m must be coprime")
    L2, M2 = l * l, m * m
    c = _crt(1, L2, 0, M2)
    d = _crt(0, L2, 1, M2)
    if c == 0 and d == 0:
        c = 1
    step = L2 * M2
    while gcd(c, d) != 1:
        d += step
    # a*d - b*c = 1
    g, x, y = _ext_gcd(d, c)
    a, b = x, -y
    t = _crt(-a % L2, L2, -b % M2, M2)
    return [[a + t * c, b + t * d], [c, d]]


def _ext_gcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def gamma_rep(l: int, r: int, N: int) -> list:
    if N % l:
        raise ValueError(f"{l} does not divide {N}")
    (a, b), (c, d) = sl2_crt_lift(l, N // l)
    I = identity(r)
    blk = lambda x: [[x * v for v in row] for row in I]  # noqa: E731
    return _blocks(blk(a), blk(b), blk(c), blk(d))


def _blocks(A, B, C, D) -> list:
    return [ra + rb for ra, rb in zip(A, B)] + [rc + rd for rc, rd in zip(C, D)]


def kappa_rep(l: int, n: int, N: int) -> list:
    g = gamma_rep(l, n, N)
    return [row if i < n else [l * x for x in row] for i, row in enumerate(g)]


def xi_embed(g: list, n: int) -> list:
    r = len(g) // 2
    if r > n:
        raise ValueError("cannot embed a larger matrix")
    M = identity(2 * n)
    for i in range(2 * r):
        for j in range(2 * r):
            ii = i if i < r else n + i - r
            jj = j if j < r else n + j - r
            M[ii][jj] = g[i][j]
    return M


def standard_rep(c: CuspTuple) -> list:
    n, r = c.n, c.r
    M = identity(2 * n)
    for i, l in enumerate(c.parts):
        M = matmul(M, xi_embed(gamma_rep(l, n - i, c.N), n))
    return M


def embedded_rep(outer: CuspTuple, inner: CuspTuple) -> list:
    """gamma(outer) * xi_{r,n}(gamma(inner)), representing the embedded s-cusp."""
    return matmul(standard_rep(outer), xi_embed(standard_rep(inner), outer.n))


def _J(n):
    Z = [[0] * n for _ in range(n)]
    I = identity(n)
    return _blocks(Z, I, [[-x for x in row] for row in I], Z)


def similitude(g: list):
    """mu with tg J g = mu J, or None if g is not a symplectic similitude."""
    n = len(g) // 2
    J = _J(n)
    G = matmul(matmul(transpose(g), J), g)
    mu = G[0][n] if n else 1
    if G != [[mu * x for x in row] for row in J]:
        return None
    return mu


def is_symplectic(g: list) -> bool:
    return similitude(g) == 1


def rank_profile(g: list, r: int, N: int) -> dict:
    """q -> rank mod q of the bottom-right (n-r) block of C."""
    n = len(g) // 2
    C22 = [row[r:n] for row in g[n + r:]]
    return {q: fp_rank(C22, q) for q in check_squarefree(N)}


def tuple_from_profile(profile: dict, N: int, n: int, r: int) -> CuspTuple:
    primes = check_squarefree(N)
    return _from_assignment(N, n, r, primes, [profile[q] for q in primes])


def random_gamma0(n: int, N: int, rng: random.Random, steps: int = 6) -> list:
    """Random element of Gamma_0^{(n)}(N) from translations, Levi and lower generators."""
    g = identity(2 * n)
    Z = [[0] * n for _ in range(n)]
    I = identity(n)
    for _ in range(steps):
        kind = rng.randrange(3)
        S = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                S[i][j] = S[j][i] = rng.randint(-2, 2)
        if kind == 0:
            h = _blocks(I, S, Z, I)
        elif kind == 1:
            h = _blocks(I, Z, [[N * x for x in row] for row in S], I)
        else:
            A = identity(n)
            if n > 1:
                i, j = rng.sample(range(n), 2)
                A[i][j] = rng.choice([-1, 1])
            Ainv_t = transpose([[int(x) for x in row] for row in inverse(A)])
            h = _blocks(A, Z, Z, Ainv_t)
        g = matmul(g, h)
    return g


def kappa_conjugate(l: int, n: int, N: int, g: list) -> list:
    k = kappa_rep(l, n, N)
    return matmul(matmul(inverse(k), g), k)


def _congruent(g: list, h: list, m: int) -> bool:
    return all((x - y) % m == 0 for rg, rh in zip(g, h) for x, y in zip(rg, rh))


def gamma_congruences_ok(l: int, r: int, N: int) -> bool:
    """gamma_rep(l, r) is symplectic, = J-rotation mod l^2 and = 1 mod (N/l)^2."""
    g = gamma_rep(l, r, N)
    I, Z = identity(r), [[0] * r for _ in range(r)]
    rot = _blocks(Z, [[-x for x in row] for row in I], I, Z)
    m = N // l
    return is_symplectic(g) and _congruent(g, rot, l * l) and _congruent(g, identity(2 * r), m * m)


def verify_reps(N: int, n: int) -> dict:
    """Every r-cusp representative: symplectic, congruences of each factor, C_22 rank profile."""
    checks, failures = 0, []
    for r in range(n):
        for c in enumerate_cusps(N, n, r):
            g = standard_rep(c)
            prof = rank_profile(g, r, N)
            want = {q: c.index_of(q) for q in check_squarefree(N)}
            ok = (
                is_symplectic(g)
                and all(gamma_congruences_ok(l, n - i, N) for i, l in enumerate(c.parts))
                and prof == want
                and tuple_from_profile(prof, N, n, r) == c
            )
            checks += 1
            if not ok:
                failures.append({"cusp": c.label(), "r": r, "profile": prof, "expected": want})
    return {"N": N, "n": n, "checks": checks, "failures": failures, "passed": not failures}


# ---------------------------------------------------------------------------
# incidence


def incidence(N: int, n: int) -> dict:
    nodes, edges = [], []
    for s in range(n):
        for c in enumerate_cusps(N, n, s):
            nodes.append({"id": f"{s}:{c.label()}", "level": s, "parts": list(c.parts)})
            if s < n - 1:
                for d in cusps_above(c):
                    edges.append({"from": f"{s}:{c.label()}", "to": f"{s + 1}:{d.label()}"})
    return {"N": N, "n": n, "nodes": nodes, "edges": edges}


def incidence_dot(N: int, n: int) -> str:
    inc = incidence(N, n)
    lines = [f'digraph cusps_N{N}_n{n} {{', "  rankdir=BT;"]
    for node in inc["nodes"]:
        lines.append(f'  "{node["id"]}" [label="{node["id"]}"];')
    for e in inc["edges"]:
        lines.append(f'  "{e["from"]}" -> "{e["to"]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
