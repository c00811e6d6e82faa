"""Ряды Тейлора алгебраических функций с сертификатом роста знаменателей и кольцо [a]_n."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from sympy import primefactors

from adelab.core.errors import InvalidInput, NotOnCurve, SingularBranch
from adelab.core.poly import Exponent, PolyRing, SparsePoly
from adelab.core.series import TruncSeries, evaluate_poly

logger = logging.getLogger(__name__)


@dataclass
class AlgebraicSeriesCertificate:
    """Ветвь y(z) с P(z, y(z)) = 0, y(z0) = y0, и показатели e_n: Δ^{e_n} y_n целые.

    Переменные ряда: сдвинутые u_i = z_i - z0_i; одна переменная называется как в P, если z0 = 0.
    """

    poly: SparsePoly
    z0: tuple[int, ...]
    y0: int
    delta: int
    order: int
    coefficients: dict[Exponent, Fraction] = field(default_factory=dict)
    exponents: dict[Exponent, Optional[int]] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        """Для всех n с |n| >= 1 найден показатель e_n <= 2|n| - 1."""
        return all(e is not None for e in self.exponents.values())

    def coeff(self, n: int | Exponent) -> Fraction:
        if isinstance(n, int):
            n = (n,)
        return self.coefficients.get(tuple(n), Fraction(0))

    def series(self) -> TruncSeries:
        return TruncSeries(_series_ring(self.poly, self.z0), self.order, self.coefficients)

    def residual(self) -> TruncSeries:
        """P(z0 + u, y(u)) до степени order; для верного разложения нулевой."""
        shifted = _shift_point(self.poly, self.z0)
        ring = _series_ring(self.poly, self.z0)
        values = [TruncSeries.gen(ring, self.order, name) for name in ring.names]
        values.append(self.series())
        return evaluate_poly(_rename(shifted, ring), values, self.order)


def _series_ring(poly: SparsePoly, z0: Sequence[int]) -> PolyRing:
    names = poly.ring.names[:-1]
    if any(z0):
        names = ("u",) if len(names) == 1 else tuple(f"u{i + 1}" for i in range(len(names)))
    return PolyRing(names)


def _rename(poly: SparsePoly, ring: PolyRing) -> SparsePoly:
    """Тот же многочлен в кольце с переменными ряда и y на последнем месте."""
    return SparsePoly(PolyRing(ring.names + poly.ring.names[-1:]), poly.terms)


def _shift_point(poly: SparsePoly, z0: Sequence[int]) -> SparsePoly:
    if not any(z0):
        return poly
    gens = poly.ring.gens()
    return poly.substitute({i: gens[i] + c for i, c in enumerate(z0) if c})


def _check_input(poly: SparsePoly, z0: Sequence[int], y0: int) -> int:
    if poly.ring.nvars < 2:
        raise InvalidInput("P must depend on the expansion variables and y")
    if len(z0) != poly.ring.nvars - 1:
        raise InvalidInput(f"expansion point needs {poly.ring.nvars - 1} coordinates")
    if any(Fraction(c).denominator != 1 for c in poly.coefficients()):
        raise InvalidInput("P must have integer coefficients")
    point = [*z0, y0]
    if poly.evaluate(point) != 0:
        raise NotOnCurve(f"P({', '.join(map(str, point))}) != 0")
    delta = poly.derivative(poly.ring.nvars - 1).evaluate(point)
    if delta == 0:
        raise SingularBranch("dP/dy vanishes at the expansion point")
    return int(delta)


def _certified_exponent(c: Fraction, delta: int, degree: int) -> Optional[int]:
    """Наименьшее e <= 2*degree - 1 с целым Δ^e c; None, если такого нет."""
    value = Fraction(c)
    for e in range(2 * degree):
        if value.denominator == 1:
            return e
        value *= delta
    return None


def _expand(poly: SparsePoly, z0: Sequence[int], y0: int, order: int) -> AlgebraicSeriesCertificate:
    delta = _check_input(poly, z0, y0)
    z0 = tuple(int(c) for c in z0)
    ring = _series_ring(poly, z0)
    shifted = _rename(_shift_point(poly, z0), ring)
    nvars = ring.nvars
    gens = [TruncSeries.gen(ring, order, name) for name in ring.names]
    cert = AlgebraicSeriesCertificate(poly, z0, int(y0), delta, order)
    cert.coefficients[(0,) * nvars] = Fraction(y0)
    for degree in range(1, order + 1):
        # P(z0+u, Y_{<d} + Y_d) = P(z0+u, Y_{<d}) + Δ Y_d + O(deg d+1)
        y = TruncSeries(ring, degree, cert.coefficients)
        value = evaluate_poly(shifted, [g.truncate(degree) for g in gens] + [y], degree)
        for exp, c in value.homogeneous_part(degree).items():
            yn = -Fraction(c) / delta
            if yn:
                cert.coefficients[exp] = yn
        for exp in _multi_indices(nvars, degree):
            cert.exponents[exp] = _certified_exponent(cert.coeff(exp), delta, degree)
    if not cert.certified:
        logger.warning("certificate Δ^(2n-1) failed for %s at %s", poly.to_text(), z0)
    return cert


def _multi_indices(nvars: int, degree: int):
    for exp in product(range(degree + 1), repeat=nvars):
        if sum(exp) == degree:
            yield exp


def taylor_algebraic(poly: SparsePoly, z0: int, y0: int, order: int) -> AlgebraicSeriesCertificate:
    """Разложение ветви y(z) в точке z0: y_n = -[u^n] P(z0 + u, y_0 + ... + y_{n-1} u^{n-1}) / Δ.

    Args:
        poly: P(z, y) с целыми коэффициентами.
        z0: целая точка разложения.
        y0: значение ветви, выбирает её.
        order: степень усечения.

    Returns:
        Коэффициенты y_n и показатели e_n <= 2n - 1 с целыми Δ^{e_n} y_n.
    """
    if poly.ring.nvars != 2:
        raise InvalidInput("taylor_algebraic expects P(z, y)")
    return _expand(poly, (z0,), y0, order)


def taylor_algebraic_multi(
    poly: SparsePoly, z0: Sequence[int], y0: int, order: int
) -> AlgebraicSeriesCertificate:
    """То же для P(z_1, ..., z_a, y); граница Δ^{2|n|-1} по полной степени мультииндекса."""
    return _expand(poly, z0, y0, order)


@dataclass(frozen=True)
class BinomRingReport:
    a: Fraction
    values: tuple[Fraction, ...]
    denominators: tuple[int, ...]
    prime_support: frozenset[int]

    @property
    def within_denominator_of_a(self) -> bool:
        return self.prime_support <= frozenset(primefactors(self.a.denominator))


def binom_ring_denominators(a: Fraction, kmax: int) -> BinomRingReport:
    """[a]_k = a(a-1)...(a-k+1)/k! для k = 0..kmax и простые в знаменателях."""
    a = Fraction(a)
    if a <= 0:
        raise InvalidInput("a must be a positive rational")
    values = []
    value = Fraction(1)
    for k in range(kmax + 1):
        if k:
            value = value * (a - k + 1) / k
        values.append(value)
    dens = tuple(v.denominator for v in values)
    support = frozenset(int(p) for p in primefactors(math.lcm(*dens)))
    return BinomRingReport(a, tuple(values), dens, support)
