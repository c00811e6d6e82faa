"""Точные скаляры: рациональные числа (Fraction) и вычеты в Z/p^k с модулем-дескриптором."""
from __future__ import annotations

import logging
import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from sympy import isprime

from adelab.core.errors import DenominatorNotUnit, InvalidInput, RingMismatch

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


@dataclass(frozen=True, slots=True)
class Modulus:
    """Дескриптор кольца Z/p^k."""

    p: int
    k: int = 1

    @property
    def value(self) -> int:
        return self.p**self.k

    def __str__(self) -> str:
        return f"{self.p}^{self.k}" if self.k > 1 else str(self.p)


@dataclass(frozen=True, slots=True)
class Residue:
    """Элемент Z/p^k; 0 <= value < p^k."""

    value: int
    modulus: Modulus

    def __post_init__(self) -> None:
        m = self.modulus.value
        if not 0 <= self.value < m:
            object.__setattr__(self, "value", self.value % m)

    def _other(self, other: Residue | int) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise RingMismatch(f"Z/{self.modulus} against Z/{other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Residue | int) -> Residue:
        return Residue(self.value + self._other(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other: Residue | int) -> Residue:
        return Residue(self.value - self._other(other), self.modulus)

    def __rsub__(self, other: int) -> Residue:
        return Residue(other - self.value, self.modulus)

    def __mul__(self, other: Residue | int) -> Residue:
        return Residue(self.value * self._other(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> Residue:
        return Residue(-self.value, self.modulus)

    def __pow__(self, e: int) -> Residue:
        return Residue(pow(self.value, e, self.modulus.value), self.modulus)

    def inverse(self) -> Residue:
        if math.gcd(self.value, self.modulus.p) != 1:
            raise DenominatorNotUnit(self.value, self.modulus.p)
        return Residue(pow(self.value, -1, self.modulus.value), self.modulus)

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


def require_prime(p: int) -> None:
    if not isprime(p):
        raise InvalidInput(f"{p} is not prime")


def residue_int(x: Scalar, m: int, p: int | None = None) -> int:
    """Рациональное x в Z/m как целое 0..m-1; p: простое, по которому проверяется знаменатель."""
    x = Fraction(x)
    den = x.denominator
    if den == 1:
        return x.numerator % m
    if math.gcd(den, m) != 1:
        raise DenominatorNotUnit(x, p if p is not None else _smallest_factor(m))
    return x.numerator * pow(den, -1, m) % m


def _smallest_factor(m: int) -> int:
    f = 2
    while f * f <= m:
        if m % f == 0:
            return f
        f += 1
    return m


def reduce_mod(x: Scalar, p: int, k: int = 1) -> Residue:
    """Редукция рационального числа в Z/p^k.

    Raises:
        DenominatorNotUnit: p делит знаменатель (простое кольца для вызывающей стороны).
    """
    modulus = Modulus(p, k)
    return Residue(residue_int(x, modulus.value, p), modulus)


def padic_valuation(x: Scalar, p: int) -> int | float:
    """ord_p(x); math.inf для нуля."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return math.inf
    return _ord(x.numerator, p) - _ord(x.denominator, p)


def _ord(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def legendre_factorial_ord(m: int, p: int) -> int:
    """ord_p(m!) по формуле Лежандра."""
    total, q = 0, p
    while q <= m:
        total += m // q
        q *= p
    return total


_bernoulli_table: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(k: int) -> Fraction:
    """B_k из рекурсии sum_{j<=k} C(k+1, j) B_j = 0, B_0 = 1 (так B_1 = -1/2).

    Таблица кешируется до максимального запрошенного индекса.
    """
    if k < 0:
        raise InvalidInput("bernoulli index must be non-negative")
    if k < len(_bernoulli_table):
        return _bernoulli_table[k]
    with _bernoulli_lock:
        table = _bernoulli_table
        for n in range(len(table), k + 1):
            if n > 1 and n % 2 == 1:
                table.append(Fraction(0))
                continue
            acc = sum((math.comb(n + 1, j) * table[j] for j in range(n)), Fraction(0))
            table.append(-acc / (n + 1))
        return table[k]


def pochhammer_rising(x: Scalar, m: int) -> Fraction:
    """(x)_m = x(x+1)...(x+m-1), (x)_0 = 1."""
    x = Fraction(x)
    out = Fraction(1)
    for i in range(m):
        out *= x + i
    return out


class Bracket(NamedTuple):
    integer_part: int
    fractional_part: Fraction
    value: Fraction


def fractional_bracket(r: Scalar) -> Bracket:
    """[r], {r} и <r> = (r-1)(r-2)...({r}) = ({r})_{[r]}; для 0 < r < 1 значение 1."""
    r = Fraction(r)
    if r <= 0:
        raise InvalidInput(f"bracket needs a positive rational, got {r}")
    ip = math.floor(r)
    fp = r - ip
    value = Fraction(1)
    for j in range(1, ip + 1):
        value *= r - j
    # тождество с возрастающим факториалом
    assert value == pochhammer_rising(fp, ip)
    return Bracket(ip, fp, value)


def parse_rational(text: str) -> Fraction:
    """'a/b' или целое. Десятичные дроби не принимаются."""
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise InvalidInput(f"not an exact rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise InvalidInput(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Scalar) -> str:
    """Каноническая запись 'num/den'."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
