from fractions import Fraction

import pytest

from adelab.core.errors import BetaOutOfRange, InvalidInput, NotIntegralK
from adelab.services import hodge_periods
from adelab.services.hodge_periods import CodimRow, DeformationIndexSet


def _quartic(*monomials):
    return DeformationIndexSet(2, 4, tuple(monomials))


def test_index_set_validation():
    with pytest.raises(InvalidInput):
        _quartic((1, 1, 1))
    with pytest.raises(InvalidInput):
        _quartic((1, 1, 1, 2))
    with pytest.raises(InvalidInput):
        _quartic((1, 1, 1, 1), (1, 1, 1, 1))
    assert _quartic((1, 1, 1, 1)).ring().names == ("t0",)


def test_single_monomial_series():
    series = hodge_periods.period_series(2, 4, (0, 0, 0, 0), _quartic((1, 1, 1, 1)), 3)
    assert series.k == 1
    assert series.coefficients == {(1,): 1}
    assert hodge_periods.check_period_terms(series)


def test_two_monomial_series_and_denominators():
    series = hodge_periods.period_series(2, 4, (0, 0, 0, 0), _quartic((1, 1, 1, 1), (2, 0, 2, 0)), 3)
    assert series.coefficients[(1, 0)] == 1
    assert series.coefficients[(2, 1)] == Fraction(1, 32)
    assert series.coefficients[(1, 2)] == Fraction(1, 8)
    assert series.coefficients[(0, 3)] == Fraction(3, 32)
    # чётная степень не проходит условие
    assert all(sum(a) % 2 == 1 for a in series.coefficients)
    assert hodge_periods.check_period_terms(series)

    report = hodge_periods.denominator_report(series)
    assert sorted(report) == [0, 1, 2, 3]
    assert report[1] == {}
    assert report[3] == {2: 5}


@pytest.mark.parametrize(
    "monomials",
    [
        [(1, 1, 1, 1)],
        [(1, 1, 1, 1), (2, 0, 2, 0)],
        [(3, 1, 0, 0), (0, 0, 1, 3), (2, 2, 0, 0)],
    ],
)
def test_quartic_specialization(monomials):
    assert hodge_periods.quartic_specialization_check(_quartic(*monomials), 4)


def test_quartic_specialization_needs_quartic_surface():
    with pytest.raises(InvalidInput):
        hodge_periods.quartic_specialization_check(DeformationIndexSet(2, 3, ((1, 1, 1, 0),)), 2)


def test_beta_validation():
    index_set = _quartic((1, 1, 1, 1))
    with pytest.raises(NotIntegralK):
        hodge_periods.period_series(2, 4, (0, 0, 0, 1), index_set, 2)
    with pytest.raises(BetaOutOfRange):
        hodge_periods.period_series(2, 4, (3, 0, 0, 0), index_set, 2)
    with pytest.raises(InvalidInput):
        hodge_periods.period_series(4, 4, (0, 0, 0, 0, 0, 0), index_set, 2)


def test_codim_values():
    assert hodge_periods.codim_VZ(6, 3, 0) == 8
    assert hodge_periods.codim_VZ(8, 3, 1) == 20
    with pytest.raises(InvalidInput):
        hodge_periods.codim_VZ(5, 3, 0)
    with pytest.raises(InvalidInput):
        hodge_periods.codim_C(4, 3, [1, 0, 2])


@pytest.mark.parametrize(
    "k, value", [(3, 8), (4, 20), (5, 39), (6, 66), (7, 102), (8, 148), (9, 205), (10, 274), (11, 356), (12, 452)]
)
def test_cubic_closed_form(k, value):
    assert hodge_periods.cubic_closed_form(k) == value
    assert hodge_periods.codim_VZ(2 * k, 3, k - 3) == value


def test_cubic_table():
    assert hodge_periods.table_repro() == [
        CodimRow(4, 20, 1, 1, 1, 1),
        CodimRow(6, 56, 4, 8, 4, 7),
        CodimRow(8, 120, 10, 45, 10, 19),
        CodimRow(10, 220, 20, 220, 20, 38),
        CodimRow(12, 364, 35, 364, 35, 65),
    ]


@pytest.mark.parametrize(
    "d, beta, branch, t",
    [
        (2, 0, (0, 1), (Fraction(1, 50), Fraction(1, 40))),
        (3, 0, (0, 1), (Fraction(1, 60), Fraction(-1, 50), Fraction(1, 70))),
        (3, 1, (0, 2), (Fraction(-1, 80), Fraction(1, 60), Fraction(1, 90))),
    ],
)
def test_one_dimensional_series_matches_roots(d, beta, branch, t):
    assert hodge_periods.balegh_numeric_check(d, beta, branch, 12, t) < 1e-8


def test_one_dimensional_check_validation():
    t = (Fraction(1, 50), Fraction(1, 40))
    with pytest.raises(BetaOutOfRange):
        hodge_periods.balegh_numeric_check(2, 1, (0, 1), 4, t)
    with pytest.raises(InvalidInput):
        hodge_periods.balegh_numeric_check(2, 0, (1, 1), 4, t)
    with pytest.raises(InvalidInput):
        hodge_periods.balegh_numeric_check(2, 0, (0, 1), 4, t[:1])
