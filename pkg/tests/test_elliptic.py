import math
from fractions import Fraction

import pytest

from adelab.core.errors import BadCharacteristic, InvalidInput, SingularCurve
from adelab.services import elliptic_fp
from adelab.services.elliptic_fp import WeierstrassCurve
from adelab.services.modular import T2T3
from adelab.services.scan import primes_upto


def _brute_count(p, t2, t3):
    squares = {}
    for y in range(p):
        squares[y * y % p] = squares.get(y * y % p, 0) + 1
    return 1 + sum(squares.get((4 * x**3 - t2 * x - t3) % p, 0) for x in range(p))


def _random_smooth_curves(rng, count, pmax=97):
    primes = primes_upto(pmax, 5)
    curves = []
    while len(curves) < count:
        p = rng.choice(primes)
        curve = WeierstrassCurve(p, rng.randrange(p), rng.randrange(p))
        if curve.discriminant:
            curves.append(curve)
    return curves


def test_point_count_matches_enumeration(rng):
    for curve in _random_smooth_curves(rng, 100):
        assert elliptic_fp.point_count(curve) == _brute_count(curve.p, curve.t2, curve.t3)


def test_hasse_witt_two_ways_and_trace(rng):
    for curve in _random_smooth_curves(rng, 100):
        hw = elliptic_fp.half_power_coeffs(curve).hasse_witt
        assert elliptic_fp.hasse_witt_recursion(curve.p, curve.cubic()) == hw
        trace = elliptic_fp.trace_of_frobenius(curve)
        assert abs(trace) <= 2 * math.sqrt(curve.p)
        assert (trace - hw) % curve.p == 0


@pytest.mark.parametrize("p", primes_upto(37, 5))
def test_hasse_witt_two_ways_symbolic(p):
    curve = WeierstrassCurve(p)
    assert elliptic_fp.hasse_witt_recursion(p, curve.cubic()) == elliptic_fp.half_power_coeffs(curve).hasse_witt


@pytest.mark.parametrize("p", primes_upto(23, 5))
def test_half_power_coefficients_are_weighted_homogeneous(p):
    coeffs = elliptic_fp.half_power_coeffs(WeierstrassCurve(p))
    assert len(coeffs.coefficients) == 3 * (p - 1) // 2 + 1
    for i, c in enumerate(coeffs.coefficients):
        if not c.is_zero():
            assert c.homogeneous_degree() == 3 * (p - 1) - 2 * i, i
    assert not coeffs.hasse_witt.is_zero()


def test_hasse_witt_at_five_is_a_multiple_of_t2():
    t2, _ = T2T3.reduced(5).gens()
    assert elliptic_fp.half_power_coeffs(WeierstrassCurve(5)).hasse_witt == t2 * 2


@pytest.mark.parametrize("p", [7, 11, 13, 17])
def test_power_sums(p):
    curve = WeierstrassCurve(p, 1, 1) if p != 13 else WeierstrassCurve(p, 2, 5)
    jmax = (p - 1) // 2
    assert elliptic_fp.power_sum_check(curve, jmax)


def test_power_sum_range():
    with pytest.raises(InvalidInput):
        elliptic_fp.power_sum_check(WeierstrassCurve(11, 1, 1), 6)


@pytest.mark.parametrize("p", primes_upto(97, 5))
def test_ab_congruence(p):
    assert elliptic_fp.ab_congruence_check(p)


def test_cartier_matrix():
    curve = WeierstrassCurve(7, 1, 1)
    coeffs = elliptic_fp.half_power_coeffs(curve)
    assert elliptic_fp.cartier_matrix(curve) == [[coeffs.c(6), coeffs.c(5)], [0, 0]]


def test_exact_form_small_case():
    red = elliptic_fp.exact_form_reduce(3)
    t2, t3 = T2T3.gens()
    assert red.a1 == t2 * Fraction(3, 4)
    assert red.a0 == t3 * Fraction(1, 2)
    assert red.verify()


@pytest.mark.parametrize("n", range(2, 12))
def test_exact_form_identity(n):
    assert elliptic_fp.exact_form_reduce(n).verify()


@pytest.mark.parametrize("p", primes_upto(37, 5))
def test_exact_form_congruence(p):
    assert elliptic_fp.exact_form_congruence_check(p)


@pytest.mark.parametrize("p, t2, t3", [(5, 1, 1), (7, 1, 1), (11, 2, 3), (13, 1, 4)])
def test_curve_field_identity(p, t2, t3):
    assert elliptic_fp.hw_field_identity_check(p, WeierstrassCurve(p, t2, t3))


def test_invalid_curves():
    with pytest.raises(BadCharacteristic):
        WeierstrassCurve(3, 1, 1)
    with pytest.raises(InvalidInput):
        WeierstrassCurve(7, 1, None)
    with pytest.raises(SingularCurve):
        elliptic_fp.point_count(WeierstrassCurve(7, 3, 1))
