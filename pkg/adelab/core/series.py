"""Усечённые степенные ряды от одной или нескольких переменных (усечение по полной степени)."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

from adelab.core.errors import RingMismatch, SingularPoint
from adelab.core.poly import Coeff, Exponent, PolyRing, SparsePoly, grlex_key
from adelab.core.scalars import format_rational, padic_valuation, residue_int


class TruncSeries:
    """Ряд с мономами полной степени <= order; результат операций снова усечён."""

    __slots__ = ("ring", "order", "_terms")

    def __init__(self, ring: PolyRing, order: int, terms: Mapping[Exponent, Coeff]):
        self.ring = ring
        self.order = order
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if sum(e) > order:
                continue
            c = ring.coerce(c)
            if c:
                clean[e] = c
        self._terms = clean

    @classmethod
    def from_poly(cls, poly: SparsePoly, order: int) -> TruncSeries:
        return cls(poly.ring, order, poly.terms)

    @classmethod
    def zero(cls, ring: PolyRing, order: int) -> TruncSeries:
        return cls(ring, order, {})

    @classmethod
    def const(cls, ring: PolyRing, order: int, c: Coeff) -> TruncSeries:
        return cls(ring, order, {(0,) * ring.nvars: c})

    @classmethod
    def gen(cls, ring: PolyRing, order: int, name: str) -> TruncSeries:
        return cls.from_poly(ring.gen(name), order)

    @classmethod
    def univariate(cls, coeffs: Sequence[Coeff], name: str = "q", modulus: int | None = None) -> TruncSeries:
        """Ряд sum c_n q^n из списка коэффициентов; порядок усечения len(coeffs) - 1."""
        ring = PolyRing((name,), modulus)
        return cls(ring, len(coeffs) - 1, {(n,): c for n, c in enumerate(coeffs)})

    # --- доступ ---

    @property
    def terms(self) -> Mapping[Exponent, Coeff]:
        return self._terms

    def items(self):
        return self._terms.items()

    def coeff(self, exp: Exponent | int) -> Coeff:
        if isinstance(exp, int):
            exp = (exp,)
        return self._terms.get(tuple(exp), self.ring.coerce(0))

    def coefficients(self) -> list[Coeff]:
        """Коэффициенты одномерного ряда q^0..q^order."""
        return [self.coeff((n,)) for n in range(self.order + 1)]

    def is_zero(self) -> bool:
        return not self._terms

    def valuation(self) -> int | float:
        """Наименьшая полная степень ненулевого монома."""
        return min((sum(e) for e in self._terms), default=math.inf)

    def homogeneous_part(self, degree: int) -> dict[Exponent, Coeff]:
        return {e: c for e, c in self._terms.items() if sum(e) == degree}

    def to_poly(self) -> SparsePoly:
        return SparsePoly(self.ring, self._terms)

    # --- арифметика ---

    def _other(self, other: TruncSeries | Coeff) -> TruncSeries:
        if isinstance(other, TruncSeries):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        return TruncSeries.const(self.ring, self.order, other)

    def truncate(self, order: int) -> TruncSeries:
        return TruncSeries(self.ring, min(order, self.order), self._terms)

    def __add__(self, other: TruncSeries | Coeff) -> TruncSeries:
        other = self._other(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return TruncSeries(self.ring, min(self.order, other.order), out)

    __radd__ = __add__

    def __neg__(self) -> TruncSeries:
        return TruncSeries(self.ring, self.order, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: TruncSeries | Coeff) -> TruncSeries:
        return self + (-self._other(other))

    def __rsub__(self, other: Coeff) -> TruncSeries:
        return (-self) + other

    def __mul__(self, other: TruncSeries | Coeff) -> TruncSeries:
        if not isinstance(other, TruncSeries):
            c = self.ring.coerce(other)
            return TruncSeries(self.ring, self.order, {e: a * c for e, a in self._terms.items()})
        other = self._other(other)
        order = min(self.order, other.order)
        out: dict[Exponent, Coeff] = {}
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            for e2, c2 in other._terms.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return TruncSeries(self.ring, order, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> TruncSeries:
        result = TruncSeries.const(self.ring, self.order, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.ring == other.ring and self.order == other.order and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def agrees_with(self, other: TruncSeries, order: int | None = None) -> bool:
        """Совпадение коэффициентов до общей степени усечения."""
        n = min(self.order, other.order) if order is None else order
        return self.truncate(n)._terms == other.truncate(n)._terms

    def derivative(self, var: int | str = 0) -> TruncSeries:
        """Производная; точна до степени order - 1, поэтому порядок уменьшается на 1."""
        i = self.ring.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return TruncSeries(self.ring, self.order - 1, out)

    def euler(self, var: int | str = 0) -> TruncSeries:
        """x d/dx; порядок не меняется."""
        i = self.ring.index(var) if isinstance(var, str) else var
        return TruncSeries(self.ring, self.order, {e: c * e[i] for e, c in self._terms.items()})

    def inverse(self) -> TruncSeries:
        """1/f при обратимом свободном члене: sum (-x)^k, x = (f - c0)/c0."""
        c0 = self.coeff((0,) * self.ring.nvars)
        if not c0:
            raise SingularPoint("series with zero constant term is not invertible")
        inv0 = Fraction(1) / c0 if self.ring.modulus is None else pow(int(c0), -1, self.ring.modulus)
        x = (self - c0) * inv0
        result = TruncSeries.const(self.ring, self.order, 1)
        term = result
        for _ in range(self.order):
            term = term * (-x)
            if term.is_zero():
                break
            result = result + term
        return result * inv0

    def divide(self, other: TruncSeries) -> TruncSeries:
        """Одномерное деление f/g, где g = q^s * (обратимый ряд); порядок результата order - s."""
        other = self._other(other)
        s = other.valuation()
        if s == math.inf:
            raise SingularPoint("division by the zero series")
        for e in self._terms:
            if e[0] < s:
                raise SingularPoint(f"numerator has terms below q^{s}")
        order = min(self.order, other.order) - s
        num = TruncSeries(self.ring, order, {(e[0] - s,): c for e, c in self._terms.items()})
        den = TruncSeries(self.ring, order, {(e[0] - s,): c for e, c in other._terms.items()})
        return num * den.inverse()

    # --- смена кольца и отчёты ---

    def reduce(self, p: int, k: int = 1) -> TruncSeries:
        m = p**k
        ring = self.ring.reduced(m)
        return TruncSeries(ring, self.order, {e: residue_int(c, m, p) for e, c in self._terms.items()})

    def min_valuation(self, p: int) -> int | float:
        return min((padic_valuation(c, p) for c in self._terms.values()), default=math.inf)

    def sorted_terms(self) -> list[tuple[Exponent, Coeff]]:
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]))

    def to_text(self) -> str:
        parts = []
        for e, c in self.sorted_terms():
            coef = format_rational(c) if self.ring.modulus is None else str(c)
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k)
            parts.append(f"{coef}*{mono}" if mono else coef)
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.order + 1})"

    def __repr__(self) -> str:
        return f"TruncSeries({self.to_text()})"


def evaluate_poly(poly: SparsePoly, values: Sequence[TruncSeries], order: int) -> TruncSeries:
    """P(s_1, ..., s_n) для рядов s_i; степени рядов кешируются."""
    if not values:
        raise ValueError("no series to substitute")
    ring = values[0].ring
    cache: dict[tuple[int, int], TruncSeries] = {}

    def power(i: int, k: int) -> TruncSeries:
        if (i, k) not in cache:
            cache[(i, k)] = values[i].truncate(order) ** k
        return cache[(i, k)]

    result = TruncSeries.zero(ring, order)
    for e, c in poly.items():
        term = TruncSeries.const(ring, order, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        result = result + term
    return result
