from fractions import Fraction

import pytest
import sympy
from sympy import bernoulli as sympy_bernoulli

from adelab.core.errors import DenominatorNotUnit, InvalidInput, RingMismatch
from adelab.core.scalars import (
    Modulus,
    Residue,
    bernoulli,
    format_rational,
    fractional_bracket,
    legendre_factorial_ord,
    padic_valuation,
    parse_rational,
    pochhammer_rising,
    reduce_mod,
)


def test_reduce_mod_inverts_denominator():
    r = reduce_mod(Fraction(1, 6), 5)
    assert r.value == 1  # 6 ≡ 1 mod 5
    assert reduce_mod(Fraction(-1, 2), 7).value == 3
    assert reduce_mod(Fraction(1, 3), 5, 2).value * 3 % 25 == 1


def test_reduce_mod_rejects_prime_in_denominator():
    with pytest.raises(DenominatorNotUnit):
        reduce_mod(Fraction(1, 10), 5)


def test_reduce_mod_is_a_ring_morphism(rng):
    for _ in range(100):
        p = rng.choice([5, 7, 11, 13])
        k = rng.randint(1, 3)
        a = Fraction(rng.randint(-50, 50), rng.choice([1, 2, 3, 4, 9]))
        b = Fraction(rng.randint(-50, 50), rng.choice([1, 2, 3, 4, 9]))
        ra, rb = reduce_mod(a, p, k), reduce_mod(b, p, k)
        assert reduce_mod(a + b, p, k) == ra + rb
        assert reduce_mod(a * b, p, k) == ra * rb
        assert reduce_mod(a - b, p, k) == ra - rb


def test_residues_of_different_moduli_do_not_mix():
    with pytest.raises(RingMismatch):
        Residue(1, Modulus(5)) + Residue(1, Modulus(7))


def test_residue_inverse():
    m = Modulus(7, 2)
    x = Residue(10, m)
    assert (x * x.inverse()).value == 1
    with pytest.raises(DenominatorNotUnit):
        Residue(14, m).inverse()


def test_padic_valuation():
    assert padic_valuation(Fraction(50, 3), 5) == 2
    assert padic_valuation(Fraction(2, 25), 5) == -2
    assert padic_valuation(0, 5) == float("inf")


@pytest.mark.parametrize("m, p, expected", [(5, 5, 1), (25, 5, 6), (10, 2, 8), (100, 7, 16)])
def test_legendre_factorial_ord(m, p, expected):
    assert legendre_factorial_ord(m, p) == expected


def test_bernoulli_known_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    assert bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_against_sympy():
    for k in range(2, 41, 2):
        b = sympy_bernoulli(k)
        assert bernoulli(k) == Fraction(int(b.p), int(b.q))


def test_fractional_bracket():
    br = fractional_bracket(Fraction(7, 3))
    assert br == (2, Fraction(1, 3), Fraction(4, 9))
    assert fractional_bracket(Fraction(1, 2)).value == 1
    assert br.value == pochhammer_rising(br.fractional_part, br.integer_part)
    with pytest.raises(InvalidInput):
        fractional_bracket(0)


@pytest.mark.parametrize("text, value", [("3", Fraction(3)), ("-1/6", Fraction(-1, 6)), (" 4 / 8 ", Fraction(1, 2))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1/0", "abc", ""])
def test_parse_rational_rejects_inexact(text):
    with pytest.raises(InvalidInput):
        parse_rational(text)


def test_format_rational():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(4) == "4/1"


def test_bracket_is_pochhammer_of_fractional_part(rng):
    seen = 0
    while seen < 200:
        r = Fraction(rng.randint(1, 400), rng.randint(2, 30))
        if r.denominator == 1:
            continue
        seen += 1
        br = fractional_bracket(r)
        assert br.integer_part + br.fractional_part == r
        assert 0 < br.fractional_part < 1
        assert br.value == pochhammer_rising(br.fractional_part, br.integer_part)
        product = Fraction(1)
        for j in range(1, br.integer_part + 1):
            product *= r - j
        assert br.value == product


@pytest.mark.parametrize("k", range(2, 61, 2))
def test_von_staudt_clausen(k):
    total = bernoulli(k) + sum(Fraction(1, p) for p in sympy.primerange(2, k + 2) if k % (p - 1) == 0)
    assert total.denominator == 1


@pytest.mark.parametrize("p", [int(p) for p in sympy.primerange(5, 38)])
def test_kummer_congruences(p):
    for k in range(2, 61, 2):
        if k % (p - 1) == 0:
            continue
        ratio = bernoulli(k) / k
        assert padic_valuation(ratio, p) >= 0
        shifted = k + (p - 1)
        assert reduce_mod(ratio, p) == reduce_mod(bernoulli(shifted) / shifted, p), (p, k)
