import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from slopelab.errors import DivisionByZero, PrecisionExhausted
from slopelab.finite_field import CONWAY, GF, _is_irreducible_mod_p, _is_primitive
from slopelab.padic import PadicNumber, UnramifiedElement, teichmuller, unramified_extension

primes = st.sampled_from([2, 3, 5, 7])
nonzero = st.builds(Fraction, st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**4))


def test_small_examples():
    s = PadicNumber(7, 3) + PadicNumber(7, 4)
    assert (s.val, s.unit) == (1, 1)
    inv = PadicNumber(7, 7).inverse()
    assert (inv.val, inv.unit) == (-1, 1)


def test_inverse_errors():
    with pytest.raises(DivisionByZero):
        PadicNumber(5, 0).inverse()
    with pytest.raises(PrecisionExhausted):
        PadicNumber.zero_to(5, 10).inverse()


def test_exact_zero_vs_inexact():
    a = PadicNumber(3, 1, prec=5)
    d = a - PadicNumber(3, 1, prec=5)
    assert d.is_zero() and not d.is_exact_zero()
    assert d.valuation() is None
    assert PadicNumber(3, 0).is_exact_zero()


@given(primes, nonzero, nonzero)
def test_valuation_laws(p, x, y):
    a, b = PadicNumber(p, x), PadicNumber(p, y)
    assert (a * b).valuation() == a.valuation() + b.valuation()
    s = a + b
    if a.valuation() != b.valuation():
        assert s.valuation() == min(a.valuation(), b.valuation())
    elif not s.is_zero():
        assert s.valuation() >= a.valuation()


@given(primes, nonzero, nonzero, nonzero)
def test_ring_axioms_against_rationals(p, x, y, z):
    a, b, c = (PadicNumber(p, t, prec=20) for t in (x, y, z))
    assert a * (b + c) == PadicNumber(p, x * (y + z), prec=20)
    assert (a * b) * c == a * (b * c)
    assert a / b == PadicNumber(p, x / y, prec=20)


@given(primes, nonzero)
def test_json_roundtrip(p, x):
    a = PadicNumber(p, x, prec=12)
    assert PadicNumber.from_json(a.to_json()) == a
    assert a.to_json()["prec"] == 12


def test_precision_not_invented():
    a = PadicNumber(5, 1, prec=4)
    b = PadicNumber(5, 1, prec=10)
    assert (a + b).absprec == 4
    assert (a * b).prec == 4


@pytest.mark.parametrize("p,h", sorted(CONWAY))
def test_modulus_table_is_irreducible_and_primitive(p, h):
    f = CONWAY[(p, h)]
    assert _is_irreducible_mod_p(f, p)
    assert _is_primitive(f, p)


def test_omega_squared():
    E = unramified_extension(2, 2, 16)
    assert E.modulus == (1, 1, 1)
    w = E.gen()
    assert w * w == -w - E.one()


def _sympy_mulmod(a, b, modulus, p, n):
    x = sympy.Symbol("x")
    fa = sum(int(c) * x**i for i, c in enumerate(a))
    fb = sum(int(c) * x**i for i, c in enumerate(b))
    fm = sum(int(c) * x**i for i, c in enumerate(modulus))
    r = sympy.Poly(sympy.rem(sympy.expand(fa * fb), fm, x), x)
    coeffs = [int(c) % p**n for c in reversed(r.all_coeffs())]
    return coeffs + [0] * (len(modulus) - 1 - len(coeffs))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 3), (3, 2), (5, 3), (7, 2), (3, 4)]), st.randoms(use_true_random=False))
def test_multiplication_matches_polynomial_oracle(ph, rnd):
    p, h = ph
    n = 10
    E = unramified_extension(p, h, n)
    a = [rnd.randrange(p**n) for _ in range(h)]
    b = [rnd.randrange(p**n) for _ in range(h)]
    prod = E.from_integer_coeffs(a) * E.from_integer_coeffs(b)
    got = [int(c.to_fraction()) % p**n if not c.is_exact_zero() else 0 for c in prod.coefficients()]
    assert got == _sympy_mulmod(a, b, E.modulus, p, n)


@pytest.mark.parametrize("p,h", [(2, 3), (3, 2), (5, 3), (7, 2), (2, 4)])
def test_frobenius(p, h):
    rng = random.Random(p * 100 + h)
    E = unramified_extension(p, h, 16)
    for _ in range(20):
        a, b = E.random_element(rng, (-2, 2)), E.random_element(rng)
        assert a.frobenius(h) == a
        assert (a * b).frobenius() == a.frobenius() * b.frobenius()
        assert (a + b).frobenius() == a.frobenius() + b.frobenius()
        # congruence with the p-power map on integral elements
        assert (b.frobenius() - b**p).valuation() >= 1
    g = E.residue_field.gen()
    assert E.teichmuller(g).frobenius() == E.teichmuller(g**p)


def test_frobenius_fixes_prime_field():
    E = unramified_extension(5, 1, 16)
    a = E(Fraction(3, 25))
    assert a.frobenius() == a


def test_teichmuller():
    t = teichmuller(GF(7)(2), prec=8)
    assert t.residue() == GF(7)(2)
    assert t**6 == unramified_extension(7, 1, 8).one()
    assert t**7 == t
    assert teichmuller(GF(7)(1), prec=8) == unramified_extension(7, 1, 8).one()
    assert teichmuller(GF(7)(0), prec=8).is_exact_zero()
    F = GF(5, 3)
    g = teichmuller(F.gen(), prec=10)
    assert g ** (F.order - 1) == unramified_extension(5, 3, 10).one()


def test_embedding_is_a_field_map():
    small, big = unramified_extension(3, 2, 12), unramified_extension(3, 4, 12)
    e = small.embed_into(big)
    rng = random.Random(1)
    for _ in range(5):
        a, b = small.random_element(rng), small.random_element(rng)
        assert e(a * b) == e(a) * e(b)
        assert e(a + b) == e(a) + e(b)
        assert e(a.frobenius()) == e(a).frobenius()


def test_unramified_json_roundtrip():
    E = unramified_extension(3, 2, 12)
    a = E.random_element(random.Random(3), (-1, 1))
    assert UnramifiedElement.from_json(E, a.to_json()) == a


def test_inverse_in_extension():
    E = unramified_extension(5, 3, 16)
    rng = random.Random(9)
    for _ in range(10):
        a = E.random_element(rng, (-3, 3))
        assert a * a.inverse() == E.one()
