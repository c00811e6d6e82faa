"""Разреженные многочлены от нескольких переменных над Q или Z/m.

Мономы хранятся словарём «вектор показателей -> коэффициент», нулевые коэффициенты не хранятся.
Порядок мономов: градуированный лексикографический (grlex) по объявленному порядку переменных.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

from adelab.core.errors import DivisionByZeroPoly, RingMismatch
from adelab.core.scalars import format_rational, residue_int

Exponent = tuple[int, ...]
Coeff = Union[int, Fraction]


def grlex_key(exp: Exponent) -> tuple[int, Exponent]:
    return (sum(exp), exp)


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class PolyRing:
    """Кольцо многочленов: имена переменных, модуль (None: рациональные коэффициенты), веса."""

    names: tuple[str, ...]
    modulus: int | None = None
    weights: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(self.weights))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def coerce(self, c: Coeff) -> Coeff:
        if self.modulus is None:
            return Fraction(c)
        if isinstance(c, Fraction):
            return residue_int(c, self.modulus)
        return int(c) % self.modulus

    def zero(self) -> SparsePoly:
        return SparsePoly(self, {})

    def one(self) -> SparsePoly:
        return self.const(1)

    def const(self, c: Coeff) -> SparsePoly:
        return SparsePoly(self, {(0,) * self.nvars: c})

    def gen(self, name: str) -> SparsePoly:
        i = self.index(name)
        exp = tuple(1 if j == i else 0 for j in range(self.nvars))
        return SparsePoly(self, {exp: 1})

    def gens(self) -> tuple[SparsePoly, ...]:
        return tuple(self.gen(n) for n in self.names)

    def monomial(self, exp: Exponent, c: Coeff = 1) -> SparsePoly:
        return SparsePoly(self, {tuple(exp): c})

    def index(self, name: str) -> int:
        return self.names.index(name)

    def reduced(self, m: int) -> PolyRing:
        return PolyRing(self.names, m, self.weights)

    def rational(self) -> PolyRing:
        return PolyRing(self.names, None, self.weights)

    def with_weights(self, weights: Sequence[int]) -> PolyRing:
        return PolyRing(self.names, self.modulus, tuple(weights))


class DivisionResult(NamedTuple):
    quotient: SparsePoly
    remainder: SparsePoly

    @property
    def exact(self) -> bool:
        return self.remainder.is_zero()


class SparsePoly:
    """Неизменяемый многочлен; арифметика только внутри одного кольца."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, Coeff]):
        self.ring = ring
        clean: dict[Exponent, Coeff] = {}
        n = ring.nvars
        for exp, c in terms.items():
            exp = tuple(exp)
            if len(exp) != n:
                raise RingMismatch(f"exponent {exp} in a ring with {n} variables")
            c = ring.coerce(c)
            if c:
                clean[exp] = c
        self._terms = clean

    @classmethod
    def _raw(cls, ring: PolyRing, terms: dict[Exponent, Coeff]) -> SparsePoly:
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        return obj

    # --- доступ ---

    @property
    def terms(self) -> Mapping[Exponent, Coeff]:
        return self._terms

    def items(self) -> Iterator[tuple[Exponent, Coeff]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, exp: Exponent) -> Coeff:
        return self._terms.get(tuple(exp), self.ring.coerce(0))

    def constant_term(self) -> Coeff:
        return self.coeff((0,) * self.ring.nvars)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree(self, var: int | str) -> int:
        i = self._var(var)
        return max((e[i] for e in self._terms), default=-1)

    def sorted_terms(self) -> list[tuple[Exponent, Coeff]]:
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exponent, Coeff]:
        if not self._terms:
            raise DivisionByZeroPoly("zero polynomial has no leading term")
        exp = max(self._terms, key=grlex_key)
        return exp, self._terms[exp]

    def _var(self, var: int | str) -> int:
        return self.ring.index(var) if isinstance(var, str) else var

    # --- арифметика ---

    def _check(self, other: SparsePoly) -> None:
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _lift_operand(self, other: SparsePoly | Coeff) -> SparsePoly:
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        return self.ring.const(other)

    def _normalized(self, terms: dict[Exponent, Coeff]) -> SparsePoly:
        m = self.ring.modulus
        if m is None:
            return SparsePoly._raw(self.ring, {e: c for e, c in terms.items() if c})
        out = {}
        for e, c in terms.items():
            c %= m
            if c:
                out[e] = c
        return SparsePoly._raw(self.ring, out)

    def __add__(self, other: SparsePoly | Coeff) -> SparsePoly:
        other = self._lift_operand(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return self._normalized(out)

    __radd__ = __add__

    def __neg__(self) -> SparsePoly:
        return self._normalized({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: SparsePoly | Coeff) -> SparsePoly:
        return self + (-self._lift_operand(other))

    def __rsub__(self, other: Coeff) -> SparsePoly:
        return (-self) + other

    def __mul__(self, other: SparsePoly | Coeff) -> SparsePoly:
        if not isinstance(other, SparsePoly):
            c = self.ring.coerce(other)
            return self._normalized({e: a * c for e, a in self._terms.items()})
        self._check(other)
        if len(other) < len(self):
            big, small = self._terms, other._terms
        else:
            big, small = other._terms, self._terms
        out: dict[Exponent, Coeff] = {}
        for e2, c2 in small.items():
            for e1, c1 in big.items():
                e = _add_exp(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return self._normalized(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> SparsePoly:
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SparsePoly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def scale_exponents(self, var: int | str, s: int) -> SparsePoly:
        """Подстановка x_var -> x_var^s."""
        i = self._var(var)
        out = {}
        for e, c in self._terms.items():
            e2 = list(e)
            e2[i] *= s
            out[tuple(e2)] = c
        return SparsePoly._raw(self.ring, out)

    def shift(self, exp: Exponent) -> SparsePoly:
        """Умножение на моном x^exp."""
        return SparsePoly._raw(self.ring, {_add_exp(e, exp): c for e, c in self._terms.items()})

    # --- анализ ---

    def derivative(self, var: int | str) -> SparsePoly:
        i = self._var(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return self._normalized(out)

    def evaluate(self, point: Sequence[Coeff]) -> Coeff:
        values = [self.ring.coerce(v) for v in point]
        m = self.ring.modulus
        total: Coeff = 0
        for e, c in self._terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = t * (pow(v, k, m) if m else v**k)
            total += t
        return self.ring.coerce(total)

    def substitute(self, mapping: Mapping[int | str, SparsePoly]) -> SparsePoly:
        """Одновременная подстановка переменных многочленами того же кольца."""
        subs = {self._var(k): v for k, v in mapping.items()}
        for v in subs.values():
            self._check(v)
        powers: dict[tuple[int, int], SparsePoly] = {}

        def power(i: int, k: int) -> SparsePoly:
            key = (i, k)
            if key not in powers:
                powers[key] = subs[i] ** k
            return powers[key]

        result = self.ring.zero()
        for e, c in self._terms.items():
            rest = tuple(0 if i in subs else k for i, k in enumerate(e))
            term = self.ring.monomial(rest, c)
            for i in subs:
                if e[i]:
                    term = term * power(i, e[i])
            result = result + term
        return result

    def coefficient(self, var: int | str, power: int) -> SparsePoly:
        """Коэффициент при x_var^power как многочлен того же кольца (без x_var)."""
        i = self._var(var)
        out = {}
        for e, c in self._terms.items():
            if e[i] == power:
                e2 = list(e)
                e2[i] = 0
                out[tuple(e2)] = c
        return SparsePoly._raw(self.ring, out)

    def weighted_degree(self, exp: Exponent, weights: Sequence[int] | None = None) -> int:
        w = weights or self.ring.weights or (1,) * self.ring.nvars
        return sum(a * b for a, b in zip(w, exp))

    def homogeneous_degree(self, weights: Sequence[int] | None = None) -> int | None:
        """Взвешенная степень, если многочлен взвешенно-однороден; иначе None."""
        degrees = {self.weighted_degree(e, weights) for e in self._terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    # --- смена кольца ---

    def reduce(self, p: int, k: int = 1) -> SparsePoly:
        """Редукция коэффициентов в Z/p^k (DenominatorNotUnit, если p делит знаменатель)."""
        m = p**k
        ring = self.ring.reduced(m)
        out = {}
        for e, c in self._terms.items():
            r = residue_int(c, m, p)
            if r:
                out[e] = r
        return SparsePoly._raw(ring, out)

    def lift(self) -> SparsePoly:
        """Вычеты как целые 0..m-1 над Q."""
        ring = self.ring.rational()
        return SparsePoly._raw(ring, {e: Fraction(c) for e, c in self._terms.items()})

    def coefficients(self) -> Iterable[Coeff]:
        return self._terms.values()

    def denominators(self) -> set[int]:
        return {Fraction(c).denominator for c in self._terms.values()}

    # --- текст ---

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            coef = format_rational(c) if self.ring.modulus is None else str(c)
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            parts.append(f"{coef}*{mono}" if mono else coef)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SparsePoly({self.to_text()})"


def poly_divide_exact(f: SparsePoly, g: SparsePoly) -> DivisionResult:
    """Деление на один делитель в порядке grlex: f = q*g + r, ни один моном r не делится на LT(g).

    Один делитель образует базис Грёбнера своего главного идеала, поэтому r = 0 ровно тогда, когда g | f.
    Над Z/p^k старший коэффициент g должен быть обратим.
    """
    if g.is_zero():
        raise DivisionByZeroPoly("division by the zero polynomial")
    f._check(g)
    ring = f.ring
    m = ring.modulus
    lead_exp, lead_c = g.leading_term()
    inv = (1 / Fraction(lead_c)) if m is None else pow(int(lead_c), -1, m)
    q: dict[Exponent, Coeff] = {}
    r: dict[Exponent, Coeff] = {}
    work = dict(f.terms)
    while work:
        exp = max(work, key=grlex_key)
        c = work[exp]
        if all(a >= b for a, b in zip(exp, lead_exp)):
            t_exp = tuple(a - b for a, b in zip(exp, lead_exp))
            t_c = c * inv if m is None else c * inv % m
            q[t_exp] = q.get(t_exp, 0) + t_c
            for ge, gc in g.items():
                e = _add_exp(ge, t_exp)
                v = work.get(e, 0) - t_c * gc
                if m is not None:
                    v %= m
                if v:
                    work[e] = v
                else:
                    work.pop(e, None)
        else:
            r[exp] = c
            del work[exp]
    return DivisionResult(SparsePoly(ring, q), SparsePoly(ring, r))
