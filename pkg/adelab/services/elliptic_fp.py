"""Эллиптические кривые y^2 = 4x^3 - t2 x - t3 над F_p: коэффициенты f^{(p-1)/2}, инвариант Хассе-Витта,
подсчёт точек, степенные суммы, матрица Картье и редукция x^n dx/y к базису dx/y, x dx/y.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from adelab.core.errors import BadCharacteristic, DenominatorNotUnit, InvalidInput, SingularCurve
from adelab.core.poly import PolyRing, SparsePoly
from adelab.core.scalars import require_prime
from adelab.services.modular import T2T3, ab_polynomials

logger = logging.getLogger(__name__)

XT = PolyRing(("x", "t2", "t3"), weights=(2, 4, 6))

Coefficient = Union[int, SparsePoly]


@dataclass(frozen=True)
class WeierstrassCurve:
    """Численный режим: t2, t3 заданы вычетами; символьный: t2 = t3 = None (кольцо F_p[t2, t3])."""

    p: int
    t2: Optional[int] = None
    t3: Optional[int] = None

    def __post_init__(self) -> None:
        require_prime(self.p)
        if self.p in (2, 3):
            raise BadCharacteristic("characteristic 2 and 3 are excluded")
        if (self.t2 is None) != (self.t3 is None):
            raise InvalidInput("give both t2 and t3 or neither")
        if self.t2 is not None:
            object.__setattr__(self, "t2", self.t2 % self.p)
            object.__setattr__(self, "t3", self.t3 % self.p)

    @property
    def numeric(self) -> bool:
        return self.t2 is not None

    @property
    def discriminant(self) -> int:
        return (27 * self.t3**2 - self.t2**3) % self.p

    def require_smooth(self) -> None:
        if not self.numeric:
            raise InvalidInput("a numeric curve is required")
        if self.discriminant == 0:
            raise SingularCurve(f"27*t3^2 - t2^3 vanishes mod {self.p}")

    def cubic(self) -> SparsePoly:
        """P(x) = 4x^3 - t2 x - t3 над F_p (в символьном режиме над F_p[t2, t3])."""
        if self.numeric:
            ring = PolyRing(("x",), self.p)
            (x,) = ring.gens()
            return x**3 * 4 - x * self.t2 - self.t3
        ring = XT.reduced(self.p)
        x, t2, t3 = ring.gens()
        return x**3 * 4 - t2 * x - t3

    def cubic_values(self) -> list[int]:
        return [(4 * x**3 - self.t2 * x - self.t3) % self.p for x in range(self.p)]


@dataclass(frozen=True)
class HalfPowerCoeffs:
    curve: WeierstrassCurve
    coefficients: tuple[Coefficient, ...]

    def c(self, i: int) -> Coefficient:
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return 0 if self.curve.numeric else _t_ring(self.curve.p).zero()

    @property
    def hasse_witt(self) -> Coefficient:
        return self.c(self.curve.p - 1)


def _t_ring(p: int) -> PolyRing:
    return T2T3.reduced(p)


def _x_coefficient(poly: SparsePoly, power: int, p: int) -> Coefficient:
    if poly.ring.nvars == 1:
        return int(poly.coeff((power,)))
    part = poly.coefficient(0, power)
    return SparsePoly(_t_ring(p), {e[1:]: c for e, c in part.items()})


def half_power_coeffs(curve: WeierstrassCurve) -> HalfPowerCoeffs:
    """c_i = [x^i] P(x)^{(p-1)/2}, i = 0..3(p-1)/2; степень считается повторным возведением в квадрат."""
    p = curve.p
    power = curve.cubic() ** ((p - 1) // 2)
    top = 3 * (p - 1) // 2
    return HalfPowerCoeffs(curve, tuple(_x_coefficient(power, i, p) for i in range(top + 1)))


def hasse_witt_recursion(p: int, cubic: SparsePoly) -> Coefficient:
    """[x] V_{p-1}, где V_0 = x, V_{2n+2} = P V_{2n}'' + (1/2) P' V_{2n}'."""
    require_prime(p)
    if p in (2, 3):
        raise BadCharacteristic("characteristic 2 and 3 are excluded")
    if cubic.ring.modulus != p:
        cubic = cubic.reduce(p)
    x = cubic.ring.gen(cubic.ring.names[0])
    half_dp = cubic.derivative(0) * Fraction(1, 2)
    v = x
    for _ in range((p - 1) // 2):
        v = cubic * v.derivative(0).derivative(0) + half_dp * v.derivative(0)
    return _x_coefficient(v, 1, p)


def point_count(curve: WeierstrassCurve) -> int:
    """#E(F_p) = 1 + sum_x (1 + chi(P(x))), chi: квадратичный характер по критерию Эйлера."""
    curve.require_smooth()
    p = curve.p
    half = (p - 1) // 2
    total = 1
    for value in curve.cubic_values():
        if value == 0:
            total += 1
        elif pow(value, half, p) == 1:
            total += 2
    return total


def trace_of_frobenius(curve: WeierstrassCurve) -> int:
    return curve.p + 1 - point_count(curve)


def power_sum_check(curve: WeierstrassCurve, jmax: int) -> bool:
    """sum_{P != O} x(P)^{j-1} ≡ -c_{p-j} mod p для j = 1..jmax, j - 1 < (p-1)/2."""
    curve.require_smooth()
    p = curve.p
    if jmax < 1 or jmax - 1 >= (p - 1) // 2:
        raise InvalidInput(f"j must satisfy 1 <= j and j - 1 < {(p - 1) // 2}")
    half = (p - 1) // 2
    mult = [1 if v == 0 else (2 if pow(v, half, p) == 1 else 0) for v in curve.cubic_values()]
    coeffs = half_power_coeffs(curve)
    for j in range(1, jmax + 1):
        lhs = sum(m * pow(x, j - 1, p) for x, m in enumerate(mult)) % p
        if lhs != (-coeffs.c(p - j)) % p:
            logger.info("power sum fails at p=%d j=%d", p, j)
            return False
    return True


def ab_congruence_check(p: int) -> bool:
    """c_{p-1} ≡ A и c_{p-2} ≡ B/12 в F_p[t2, t3]."""
    coeffs = half_power_coeffs(WeierstrassCurve(p))
    A, B = ab_polynomials(p)
    try:
        a_mod = A.reduce(p)
        b_mod = (B * Fraction(1, 12)).reduce(p)
    except DenominatorNotUnit:
        return False
    return coeffs.c(p - 1) == a_mod and coeffs.c(p - 2) == b_mod


def cartier_matrix(curve: WeierstrassCurve) -> list[list[int]]:
    """Матрица Картье на (dx/y, x dx/y): [[c_{p-1}, c_{p-2}], [0, 0]]."""
    curve.require_smooth()
    coeffs = half_power_coeffs(curve)
    p = curve.p
    return [[int(coeffs.c(p - 1)), int(coeffs.c(p - 2))], [0, 0]]


# --- точные формы ---


@dataclass(frozen=True)
class ExactFormReduction:
    n: int
    a0: SparsePoly
    a1: SparsePoly
    q: SparsePoly

    def verify(self) -> bool:
        """(2n-1) x^n = A0 + A1 x + (1/2) P' Q + P Q' в Q[x, t2, t3]."""
        x, t2, t3 = XT.gens()
        P = x**3 * 4 - t2 * x - t3
        lhs = x**self.n * (2 * self.n - 1)
        rhs = _to_xt(self.a0) + _to_xt(self.a1) * x + P.derivative(0) * Fraction(1, 2) * self.q + P * self.q.derivative(0)
        return lhs == rhs


def _to_xt(poly: SparsePoly) -> SparsePoly:
    return SparsePoly(XT, {(0, *e): c for e, c in poly.items()})


def _to_t(poly: SparsePoly) -> SparsePoly:
    return SparsePoly(T2T3, {e[1:]: c for e, c in poly.items()})


def exact_form_reduce(n: int) -> ExactFormReduction:
    """(2n-1) x^n dx/y = A0 dx/y + A1 x dx/y + d(yQ) над Q(t2, t3).

    Старший член c x^i заменяется на c (i-3/2)/(4i-2) t2 x^{i-2} + c (i-2)/(4i-2) t3 x^{i-3},
    к Q добавляется c/(4i-2) x^{i-2}.
    """
    if n < 2:
        raise InvalidInput("n must be at least 2")
    x, t2, t3 = XT.gens()
    work = x**n
    exact = XT.zero()
    while work.degree(0) > 1:
        i = work.degree(0)
        c = work.coefficient(0, i)
        step = Fraction(1, 4 * i - 2)
        work = work - c.shift((i, 0, 0))
        work = work + c * t2 * (step * (i - Fraction(3, 2))) * x ** (i - 2)
        if i > 2:
            work = work + c * t3 * (step * (i - 2)) * x ** (i - 3)
        exact = exact + c * step * x ** (i - 2)
    scale = 2 * n - 1
    a0 = _to_t(work.coefficient(0, 0) * scale)
    a1 = _to_t(work.coefficient(0, 1) * scale)
    return ExactFormReduction(n, a0, a1, exact * scale)


def exact_form_congruence_check(p: int) -> bool:
    """При n = (p+1)/2: A1 ≡ A и A0 ≡ -B/12 mod p."""
    require_prime(p)
    if p < 5:
        raise BadCharacteristic("characteristic 2 and 3 are excluded")
    red = exact_form_reduce((p + 1) // 2)
    A, B = ab_polynomials(p)
    try:
        return red.a1.reduce(p) == A.reduce(p) and red.a0.reduce(p) == (B * Fraction(-1, 12)).reduce(p)
    except DenominatorNotUnit:
        logger.info("p=%d appears in a denominator of A0 or A1", p)
        return False


# --- поле на кривой ---


def _trim(a: np.ndarray) -> np.ndarray:
    a = np.trim_zeros(a, "b")
    return a if len(a) else np.zeros(1, dtype=np.int64)


def _add(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros(max(len(a), len(b)), dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] += b
    return _trim(out % p)


def _mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return _trim(np.convolve(a, b) % p)


def _der(a: np.ndarray, p: int) -> np.ndarray:
    if len(a) < 2:
        return np.zeros(1, dtype=np.int64)
    return _trim(a[1:] * np.arange(1, len(a), dtype=np.int64) % p)


def hw_field_identity_check(p: int, curve: WeierstrassCurve) -> bool:
    """v^p = HW·v для v = y d/dx + (1/2) P' d/dy на кривой.

    Элемент координатного кольца задан парой (a(x), b(x)) для a + b y; v(a + b y) = (P b' + (1/2) P' b) + a' y.
    """
    if curve.p != p:
        raise InvalidInput("curve is defined over another prime")
    curve.require_smooth()
    P = np.array([(-curve.t3) % p, (-curve.t2) % p, 0, 4], dtype=np.int64)
    half = pow(2, -1, p)
    half_dp = _der(P, p) * half % p
    hw = int(half_power_coeffs(curve).hasse_witt) % p

    def apply(elem: tuple[np.ndarray, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
        a, b = elem
        return _add(_mul(P, _der(b, p), p), _mul(half_dp, b, p), p), _der(a, p)

    zero = np.zeros(1, dtype=np.int64)
    for start in ((np.array([0, 1], dtype=np.int64), zero), (zero, np.array([1], dtype=np.int64))):
        first = apply(start)
        elem = first
        for _ in range(p - 1):
            elem = apply(elem)
        for got, want in zip(elem, first):
            if not np.array_equal(_trim(got), _trim(want * hw % p)):
                logger.info("v^p != HW*v on y^2 = 4x^3 - %d x - %d over F_%d", curve.t2, curve.t3, p)
                return False
    return True
