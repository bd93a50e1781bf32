import random
from fractions import Fraction

import pytest
from conftest import sigma

from siegel_hecke.cusps import CuspTuple, enumerate_cusps
from siegel_hecke.eisenstein import (
    BadPrimeError,
    CharacterProduct,
    DirichletPrimeCharacter,
    MissingBaseEigenvalue,
    base_degree1_lambdas,
    base_degree1_lambdas_algebra,
    character_split,
    character_step,
    evaluate_eigenvalue,
    lift_eigenvalue_Tj,
    lift_eigenvalue_Tp,
    twisted_coeff_Tp,
    twisted_coeffs_Tj,
)
from siegel_hecke.hecke import c_std, c_tp
from siegel_hecke.scalars import RootOfUnity, const, symbol

K, L, L0, L1, P = (symbol(s) for s in ("K", "L", "L0", "L1", "P"))
X2, X3 = symbol("X2"), symbol("X3")


def test_split_and_step():
    chi = CharacterProduct.full(6)
    a, b = character_split(chi, 1)
    assert a.signs == () and b == chi
    a, b = character_split(chi, 6)
    assert a == chi and b.signs == ()
    assert character_step(chi, 2).value_at_p() == X2 ** -1 * X3
    assert character_step(character_step(chi, 6), 6) == chi
    with pytest.raises(ValueError):
        character_step(chi, 5)


def test_twisted_coefficients():
    chi = CharacterProduct.full(6)
    x = chi.value_at_p()
    assert twisted_coeff_Tp(3, 1, chi) == c_tp(3, "P", x)
    assert twisted_coeffs_Tj(2, 1, 1, chi) == tuple(c_std(2, 1, s, "P", x) for s in (1, 0, -1))
    assert twisted_coeffs_Tj(2, 1, 1, chi)[2] == 0
    triv = CharacterProduct.trivial(6)
    assert twisted_coeff_Tp(2, 6, triv).symbols() <= {"K", "P"}


def test_degree1_base_printed():
    lam0, lam1 = base_degree1_lambdas(CharacterProduct.trivial(1))
    assert lam0 == K * P ** -3
    assert lam1 == L ** 2 - (1 + K * P ** -1) * K * P ** -3
    assert evaluate_eigenvalue(lam0, 4, 3) == 3
    assert evaluate_eigenvalue(lam0, 12, 2) == 512
    assert evaluate_eigenvalue(lam1, 12, 2, base_values={"L": -24}) == -1048512


def test_degree1_base_roundtrip_random():
    rng = random.Random(7)
    psi = CharacterProduct.full(3)
    lam0, lam1 = base_degree1_lambdas(psi)
    for _ in range(10):
        env = {"L": Fraction(rng.randint(-99, 99), rng.randint(1, 9)), "K": rng.randint(2, 99),
               "P": rng.choice([2, 5, 7]), "X3": rng.choice([1, -1])}
        x = env["X3"]
        lhs = env["L"] ** 2 - (1 + Fraction(1, x) * Fraction(env["K"], env["P"])) * lam0.evaluate(env)
        assert lam1.evaluate(env) == lhs


@pytest.mark.parametrize("l1", [1, 2, 3, 6])
def test_degree_two_closed_forms(l1):
    """The two displayed degree-2 formulas, written out by hand."""
    chi = CharacterProduct.full(6)
    c = CuspTuple(6, 2, 1, (l1,))
    chi_l1 = lambda a: (X2 ** a if l1 % 2 == 0 else 1) * (X3 ** a if l1 % 3 == 0 else 1)  # noqa: E731
    psi = (X2 ** -1 if l1 % 2 == 0 else X2) * (X3 ** -1 if l1 % 3 == 0 else X3)
    c1 = 1 + psi * K * P ** -2
    c11 = psi * K * P ** -3
    c10 = psi ** 2 * K ** 2 * P ** -4 + psi * (K * P ** -3 - K * P ** -4) + 1
    assert lift_eigenvalue_Tp(2, 1, c, chi) == chi_l1(2) * c1 * L
    assert lift_eigenvalue_Tj(2, 1, 1, c, chi) == chi_l1(4) * (c11 * L1 + c10 * L0)


def test_trivial_character_level_one():
    c = CuspTuple(1, 2, 1, (1,))
    assert lift_eigenvalue_Tp(2, 1, c, CharacterProduct.full(1)) == (1 + K * P ** -2) * L
    e = lift_eigenvalue_Tp(2, 1, c, CharacterProduct.full(1))
    assert evaluate_eigenvalue(e, 12, 2, base_values={"L": -24}) == -24600


@pytest.mark.parametrize("k,p", [(4, 2), (12, 3), (6, 5)])
def test_siegel_eisenstein_degree1(k, p):
    e = lift_eigenvalue_Tp(1, 0, CuspTuple(1, 1, 0, (1,)), CharacterProduct.full(1))
    assert evaluate_eigenvalue(e, k, p) == sigma(k - 1, p)


def test_siegel_eisenstein_product():
    for n in range(1, 5):
        e = lift_eigenvalue_Tp(n, 0, CuspTuple(1, n, 0, (1,) * n), CharacterProduct.full(1))
        want = const(1)
        for t in range(1, n + 1):
            want = want * (1 + K * P ** -t)
        assert e == want
    e = lift_eigenvalue_Tp(2, 0, CuspTuple(1, 2, 0, (1, 1)), CharacterProduct.full(1))
    assert evaluate_eigenvalue(e, 4, 2) == 45


def test_one_step_is_the_twisted_coefficient():
    chi = CharacterProduct.full(30)
    for c in enumerate_cusps(30, 3, 2):
        l1 = c.l(1)
        assert lift_eigenvalue_Tp(3, 2, c, chi) == twisted_coeff_Tp(3, l1, chi) * L
        got = lift_eigenvalue_Tj(3, 2, 2, c, chi)
        a, b, d = twisted_coeffs_Tj(3, 2, l1, chi)
        assert got == a * symbol("L2") + b * L1 + d * L0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_accumulated_character_argument(n):
    """After the steps the character is conj(chi) on l_{n-r}..l_{t-r}, chi elsewhere."""
    chi = CharacterProduct.full(30)
    for c in enumerate_cusps(30, n, 0):
        psi = chi
        for t in range(n, 0, -1):
            psi = character_step(psi, c.l(t))
            flipped = 1
            for i in range(t, n + 1):
                flipped *= c.l(i)
            want = CharacterProduct(30, tuple((q, -1 if flipped % q == 0 else 1) for q in (2, 3, 5)))
            assert psi == want


def test_linear_in_base_eigenvalues():
    chi = CharacterProduct.full(6)
    for c in enumerate_cusps(6, 4, 1):
        for j in range(5):
            e = lift_eigenvalue_Tj(4, 1, j, c, chi)
            assert e.degree_in(["L0", "L1"]) <= 1


def test_j0_chain():
    c = CuspTuple(1, 3, 1, (1, 1))
    e = lift_eigenvalue_Tj(3, 1, 0, c, CharacterProduct.full(1))
    x = const(1)
    assert e == c_std(3, 0, 0, "P", x) * c_std(2, 0, 0, "P", x) * L0


def test_missing_base_index():
    c = CuspTuple(1, 3, 1, (1, 1))
    with pytest.raises(MissingBaseEigenvalue, match="index 0"):
        lift_eigenvalue_Tj(3, 1, 3, c, CharacterProduct.full(1), base={1: "L1"})
    # indices below zero are pruned rather than demanded
    lift_eigenvalue_Tj(3, 1, 3, c, CharacterProduct.full(1), base={0: "L0", 1: "L1"})


def test_bad_prime_and_arity():
    with pytest.raises(BadPrimeError, match="bad prime for eigenvalue evaluation"):
        evaluate_eigenvalue(const(1), 4, 2, N=6)
    with pytest.raises(ValueError):
        lift_eigenvalue_Tp(2, 2, CuspTuple(1, 2, 2, ()), CharacterProduct.full(1))
    with pytest.raises(ValueError):
        lift_eigenvalue_Tp(3, 1, CuspTuple(1, 2, 1, (1,)), CharacterProduct.full(1))


def test_concrete_characters():
    chi5 = DirichletPrimeCharacter(5, 1)
    assert chi5.generator() == 2
    assert chi5.value(2) == RootOfUnity(1, 4)
    assert chi5.value(4) == RootOfUnity(1, 2)
    assert chi5.value(5) is None
    assert chi5.parity() == -1
    quad3 = DirichletPrimeCharacter(3, 1)
    assert [quad3.value(m).value() for m in (1, 2)] == [1, -1]
    e = lift_eigenvalue_Tp(2, 0, CuspTuple(15, 2, 0, (1, 1)), CharacterProduct.full(15))
    v = evaluate_eigenvalue(e, 4, 2, {3: quad3.value(2), 5: chi5.value(2)}, N=15)
    x = -1 * 1j
    want = (1 + x * 16 / 4) * (1 + x * 16 / 2)
    assert abs(v - want) < 1e-9


def test_algebra_variant():
    lam0, lam1 = base_degree1_lambdas_algebra(CharacterProduct.trivial(1))
    assert lam0 == K * P ** -2
    assert lam1 == L ** 2 - (1 + P) * K * P ** -2
