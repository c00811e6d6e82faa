"""Ряды Эйзенштейна, разложение по E4/E6, многочлены A и B, сравнения E_{p±1} и система Рамануджана."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Optional

from sympy import divisor_sigma

from adelab.core.errors import InsufficientPrecision, InvalidInput
from adelab.core.matrix import solve_rational
from adelab.core.poly import PolyRing, SparsePoly
from adelab.core.scalars import bernoulli, require_prime
from adelab.core.series import TruncSeries, evaluate_poly

logger = logging.getLogger(__name__)

Q_RING = PolyRing(("q",))
# Q ~ E4, R ~ E6
QR = PolyRing(("Q", "R"), weights=(4, 6))
T2T3 = PolyRing(("t2", "t3"), weights=(4, 6))
T123 = PolyRing(("t1", "t2", "t3"), weights=(2, 4, 6))

Convention = Literal["a", "e"]

# t = (-E2/12, E4/12, -E6/216) в a-конвенции
RAMANUJAN_INITIAL = (Fraction(-1, 12), Fraction(1, 12), Fraction(-1, 216))
RAMANUJAN_SEED = Fraction(2)


@dataclass(frozen=True)
class QExpansion:
    weight: int
    series: TruncSeries

    @property
    def order(self) -> int:
        return self.series.order

    def coeff(self, n: int) -> Fraction:
        return self.series.coeff(n)


@lru_cache(maxsize=256)
def _eisenstein_coeffs(weight: int, order: int) -> tuple[Fraction, ...]:
    factor = -Fraction(2 * weight) / bernoulli(weight)
    return (Fraction(1),) + tuple(factor * int(divisor_sigma(n, weight - 1)) for n in range(1, order + 1))


def eisenstein_q(weight: int, order: int) -> QExpansion:
    """E_w = 1 - (2w / B_w) sum sigma_{w-1}(n) q^n, w = 2k >= 2."""
    if weight < 2 or weight % 2:
        raise InvalidInput(f"Eisenstein weight must be even and >= 2, got {weight}")
    if order < 0:
        raise InvalidInput("order must be non-negative")
    return QExpansion(weight, TruncSeries.univariate(_eisenstein_coeffs(weight, order)))


def discriminant_q(order: int) -> TruncSeries:
    """Δ = (E4^3 - E6^2) / 1728 = q - 24 q^2 + ..."""
    e4 = eisenstein_q(4, order).series
    e6 = eisenstein_q(6, order).series
    return (e4**3 - e6**2) * Fraction(1, 1728)


def modular_dimension(weight: int) -> int:
    if weight % 2 or weight < 0 or weight == 2:
        return 0
    return weight // 12 + (0 if weight % 12 == 2 else 1)


def _decompose(f: TruncSeries, weight: int) -> SparsePoly:
    if f.is_zero():
        return QR.zero()
    if weight < 0 or weight == 2:
        raise InvalidInput(f"series is not a modular form (nonzero remainder in weight {weight})")
    Q, R = QR.gens()
    if weight == 0:
        if any(n for (n,) in f.terms):
            raise InvalidInput("series is not a modular form (non-constant weight 0 part)")
        return QR.const(f.coeff(0))
    b = 1 if weight % 4 == 2 else 0
    a = (weight - 6 * b) // 4
    f0 = f.coeff(0)
    e4 = eisenstein_q(4, f.order).series
    e6 = eisenstein_q(6, f.order).series
    cusp = f - (e4**a) * (e6**b) * f0
    head = Q**a * R**b * f0
    if cusp.is_zero():
        return head
    if f.order < 1:
        raise InsufficientPrecision(f"q-order exhausted at weight {weight}")
    rest = _decompose(cusp.divide(discriminant_q(f.order)), weight - 12)
    return head + (Q**3 - R**2) * Fraction(1, 1728) * rest


def isobaric_decompose(f: QExpansion) -> SparsePoly:
    """P(Q, R) с P(E4, E6) = f до порядка ряда.

    Шаг: f - f0 E4^a E6^b (b = 1 при w ≡ 2 mod 4) делится на Δ, вес падает на 12.

    Raises:
        InsufficientPrecision: коэффициентов меньше, чем dim M_w.
        InvalidInput: ряд не является модулярной формой веса w.
    """
    w = f.weight
    if w < 4 or w % 2:
        raise InvalidInput(f"weight must be even and >= 4, got {w}")
    if f.order + 1 < modular_dimension(w):
        raise InsufficientPrecision(f"weight {w} needs {modular_dimension(w)} coefficients, got {f.order + 1}")
    poly = _decompose(f.series, w)
    check = isobaric_expand(poly, f.order)
    if not check.agrees_with(f.series):
        raise InvalidInput(f"series is not a modular form of weight {w}")
    return poly


def isobaric_expand(poly: SparsePoly, order: int) -> TruncSeries:
    """P(E4, E6) как q-ряд."""
    return evaluate_poly(poly, [eisenstein_q(4, order).series, eisenstein_q(6, order).series], order)


def _guard_order(weight: int) -> int:
    return modular_dimension(weight) + 1


def eisenstein_decomposition(weight: int) -> SparsePoly:
    return isobaric_decompose(eisenstein_q(weight, _guard_order(weight)))


def numerator_multiplier(weight: int) -> int:
    """НОК знаменателей в разложении E_w по E4, E6 (совпадает с |числителем B_w / w|)."""
    if weight < 4 or weight % 2:
        raise InvalidInput(f"weight must be even and >= 4, got {weight}")
    poly = eisenstein_decomposition(weight)
    return math.lcm(*(Fraction(c).denominator for c in poly.coefficients()))


def _in_t(poly: SparsePoly, convention: Convention) -> SparsePoly:
    t2, t3 = T2T3.gens()
    if convention == "a":
        image = {0: t2 * 12, 1: t3 * -216}
    elif convention == "e":
        image = {0: t2, 1: t3}
    else:
        raise InvalidInput(f"unknown convention {convention!r}")
    return SparsePoly(T2T3, poly.terms).substitute(image)


@lru_cache(maxsize=128)
def ab_polynomials(p: int, convention: Convention = "a") -> tuple[SparsePoly, SparsePoly]:
    """A, B с E_{p-1} = A(E4/12, -E6/216), E_{p+1} = B(E4/12, -E6/216) (a-конвенция).

    В e-конвенции Q -> t2, R -> t3 без масштабирования. Веса: deg A = p - 1, deg B = p + 1.
    """
    require_prime(p)
    if p < 5:
        raise InvalidInput("A and B are defined for p >= 5")
    A = _in_t(eisenstein_decomposition(p - 1), convention)
    B = _in_t(eisenstein_decomposition(p + 1), convention)
    logger.debug("A_%d, B_%d (%s): %d and %d terms", p, p, convention, len(A), len(B))
    return A, B


def lift_to_t123(poly: SparsePoly) -> SparsePoly:
    """Многочлен от (t2, t3) в кольце (t1, t2, t3)."""
    return SparsePoly(PolyRing(T123.names, poly.ring.modulus, T123.weights), {(0, *e): c for e, c in poly.items()})


def ep_congruence_check(p: int, order: int) -> bool:
    """E_{p-1} ≡ 1 и E_{p+1} ≡ E_2 mod p до q^order."""
    require_prime(p)
    if p < 5:
        raise InvalidInput("congruences are stated for p >= 5")
    lower = eisenstein_q(p - 1, order).series - 1
    upper = eisenstein_q(p + 1, order).series - eisenstein_q(2, order).series
    return lower.min_valuation(p) >= 1 and upper.min_valuation(p) >= 1


# --- система Рамануджана ---


def ramanujan_components(convention: Convention = "a") -> tuple[SparsePoly, SparsePoly, SparsePoly]:
    """Компоненты поля Рамануджана над Q.

    a: t = (-E2/12, E4/12, -E6/216), ṫ = -q dt/dq.
    e: t = (E2, E4, E6), ṫ = q dt/dq.
    """
    t1, t2, t3 = T123.gens()
    if convention == "a":
        return (
            t1**2 - t2 * Fraction(1, 12),
            t1 * t2 * 4 - t3 * 6,
            t1 * t3 * 6 - t2**2 * Fraction(1, 3),
        )
    if convention == "e":
        return (
            (t1**2 - t2) * Fraction(1, 12),
            (t1 * t2 - t3) * Fraction(1, 3),
            (t1 * t3 - t2**2) * Fraction(1, 2),
        )
    raise InvalidInput(f"unknown convention {convention!r}")


def ramanujan_q_solution(order: int, t1_shift: Fraction = Fraction(0)) -> tuple[TruncSeries, TruncSeries, TruncSeries]:
    """(-E2/12 + t1_shift, E4/12, -E6/216)."""
    e2 = eisenstein_q(2, order).series
    e4 = eisenstein_q(4, order).series
    e6 = eisenstein_q(6, order).series
    return (e2 * Fraction(-1, 12) + Fraction(t1_shift), e4 * Fraction(1, 12), e6 * Fraction(-1, 216))


def ramanujan_solution_check(order: int, t1_shift: Fraction = Fraction(0)) -> bool:
    """-q dt_i/dq = v_i(t) почленно до q^order для a-конвенции; t1_shift: сдвиг начального t1."""
    if order < 2:
        raise InvalidInput("order must be at least 2")
    t = ramanujan_q_solution(order, t1_shift)
    field = ramanujan_components("a")
    for ti, vi in zip(t, field):
        lhs = -ti.euler(0)
        rhs = evaluate_poly(vi, list(t), order)
        if not lhs.agrees_with(rhs):
            return False
    return True


@dataclass(frozen=True)
class RamanujanSolution:
    series: tuple[TruncSeries, TruncSeries, TruncSeries]
    integrality: dict[int, int | float]

    def matches_eisenstein(self) -> bool:
        expected = ramanujan_q_solution(self.series[0].order)
        return all(a == b for a, b in zip(self.series, expected))


def _jacobian_at(point: tuple[Fraction, ...]) -> list[list[Fraction]]:
    field = ramanujan_components("a")
    return [[Fraction(vi.derivative(j).evaluate(point)) for j in range(3)] for vi in field]


def ramanujan_recursion_solve(
    order: int,
    primes: tuple[int, ...] = (5, 7, 11, 13),
    seed: Optional[Fraction] = None,
) -> RamanujanSolution:
    """Коэффициенты t_n из (J(t_0) + n I) t_n = -[q^n] v(t_0 + ... + t_{n-1} q^{n-1}).

    При n = 1 система вырождена; t_{1,1} задаётся затравкой (2), остальные два неизвестных
    находятся из совместной переопределённой системы.

    Raises:
        SingularStep: вырожденная система на шаге n > 1.
    """
    if order < 1:
        raise InvalidInput("order must be at least 1")
    seed = RAMANUJAN_SEED if seed is None else Fraction(seed)
    field = ramanujan_components("a")
    jac = _jacobian_at(RAMANUJAN_INITIAL)
    coeffs: list[list[Fraction]] = [list(RAMANUJAN_INITIAL)]
    for n in range(1, order + 1):
        known = [TruncSeries(Q_RING, n, {(m,): coeffs[m][i] for m in range(n)}) for i in range(3)]
        rhs = [-evaluate_poly(vi, known, n).coeff(n) for vi in field]
        lhs = [[jac[i][j] + (n if i == j else 0) for j in range(3)] for i in range(3)]
        if n == 1:
            # столбец t1 переносится вправо
            reduced = [[row[1], row[2]] for row in lhs]
            shifted = [r - row[0] * seed for r, row in zip(rhs, lhs)]
            t2n, t3n = solve_rational(reduced, shifted, step=n)
            coeffs.append([seed, t2n, t3n])
        else:
            coeffs.append(solve_rational(lhs, rhs, step=n))
    series = tuple(TruncSeries(Q_RING, order, {(m,): coeffs[m][i] for m in range(order + 1)}) for i in range(3))
    integrality = {p: min(s.min_valuation(p) for s in series) for p in primes}
    return RamanujanSolution(series, integrality)  # type: ignore[arg-type]
