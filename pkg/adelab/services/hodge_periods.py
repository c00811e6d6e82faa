"""Ряды Тейлора периодов по линейным циклам деформированной гиперповерхности Ферма,
формулы коразмерностей локусов Ходжа и численная проверка ряда для одномерного случая.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

import mpmath
from sympy import factorint

from adelab.core.errors import BetaOutOfRange, InvalidInput, NewtonDivergence, NotIntegralK
from adelab.core.poly import PolyRing
from adelab.core.scalars import fractional_bracket
from adelab.core.series import TruncSeries

logger = logging.getLogger(__name__)

NEWTON_TOL = 1e-14
BALEGH_TOL = 1e-8


@dataclass(frozen=True)
class DeformationIndexSet:
    """Мономы деформации x^α, sum α_i = d, в n+2 переменных."""

    n: int
    d: int
    monomials: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        mons = tuple(tuple(int(a) for a in m) for m in self.monomials)
        for m in mons:
            if len(m) != self.n + 2:
                raise InvalidInput(f"monomial {m} must have {self.n + 2} exponents")
            if any(a < 0 for a in m) or sum(m) != self.d:
                raise InvalidInput(f"monomial {m} does not have degree {self.d}")
        if len(set(mons)) != len(mons):
            raise InvalidInput("duplicate deformation monomials")
        object.__setattr__(self, "monomials", mons)

    def __len__(self) -> int:
        return len(self.monomials)

    def ring(self) -> PolyRing:
        return PolyRing(tuple(f"t{i}" for i in range(len(self.monomials))))


@dataclass
class PeriodSeries:
    index_set: DeformationIndexSet
    beta: tuple[int, ...]
    k: int
    trunc: int
    coefficients: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    def to_series(self) -> TruncSeries:
        return TruncSeries(self.index_set.ring(), self.trunc, self.coefficients)

    def by_degree(self) -> dict[int, dict[tuple[int, ...], Fraction]]:
        out: dict[int, dict[tuple[int, ...], Fraction]] = {m: {} for m in range(self.trunc + 1)}
        for a, c in self.coefficients.items():
            out[sum(a)][a] = c
        return out


def bounded_compositions(parts: int, total: int) -> Iterator[tuple[int, ...]]:
    """Все a in N0^parts с sum a <= total, в лексикографическом порядке."""
    if parts == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in bounded_compositions(parts - 1, total - first):
            yield (first, *rest)


def _checked_beta(n: int, d: int, beta: Sequence[int]) -> tuple[tuple[int, ...], int]:
    if n % 2 or n < 0:
        raise InvalidInput("n must be even and non-negative")
    beta = tuple(int(b) for b in beta)
    if len(beta) != n + 2:
        raise InvalidInput(f"beta must have {n + 2} entries")
    if any(b < 0 or b > d - 2 for b in beta):
        raise BetaOutOfRange(f"entries of beta must lie in [0, {d - 2}]")
    total = sum(b + 1 for b in beta)
    if total % d:
        raise NotIntegralK(f"sum(beta_i + 1)/d = {Fraction(total, d)} is not an integer")
    return beta, total // d


def _shifted_beta(beta: Sequence[int], monomials: Sequence[Sequence[int]], a: Sequence[int]) -> list[int]:
    out = list(beta)
    for count, alpha in zip(a, monomials):
        if count:
            for i, e in enumerate(alpha):
                out[i] += count * e
    return out


def passes_condition(shifted: Sequence[int], d: int) -> bool:
    """{x_{2e}} + {x_{2e+1}} = 1 для x_i = (β̌_i + 1)/d; ни одно β̌_i + 1 не делится на d."""
    xs = [Fraction(b + 1, d) for b in shifted]
    if any(x.denominator == 1 for x in xs):
        return False
    for e in range(0, len(xs), 2):
        if (xs[e] - math.floor(xs[e])) + (xs[e + 1] - math.floor(xs[e + 1])) != 1:
            return False
    return True


def _multi_factorial(a: Sequence[int]) -> int:
    out = 1
    for v in a:
        out *= math.factorial(v)
    return out


def period_series(n: int, d: int, beta: Sequence[int], index_set: DeformationIndexSet, trunc: int) -> PeriodSeries:
    """Ряд sum (-1)^E D / a! t^a по a с sum a <= trunc.

    x_i = (β̌_i + 1)/d, β̌ = β + sum a_α α; D = prod ({x_i})_{[x_i]}, E = sum_e [x_{2e}].
    """
    if index_set.n != n or index_set.d != d:
        raise InvalidInput("index set was built for another (n, d)")
    beta, k = _checked_beta(n, d, beta)
    out = PeriodSeries(index_set, beta, k, trunc)
    for a in bounded_compositions(len(index_set), trunc):
        shifted = _shifted_beta(beta, index_set.monomials, a)
        if not passes_condition(shifted, d):
            continue
        D = Fraction(1)
        E = 0
        for i, b in enumerate(shifted):
            bracket = fractional_bracket(Fraction(b + 1, d))
            D *= bracket.value
            if i % 2 == 0:
                E += bracket.integer_part
        coeff = (-1) ** E * D / _multi_factorial(a)
        if coeff:
            out.coefficients[a] = coeff
    logger.debug("period series n=%d d=%d: %d terms up to degree %d", n, d, len(out.coefficients), trunc)
    return out


def check_period_terms(series: PeriodSeries) -> bool:
    """Повторная проверка условия для каждого сохранённого члена."""
    d = series.index_set.d
    return all(
        passes_condition(_shifted_beta(series.beta, series.index_set.monomials, a), d)
        for a in series.coefficients
    )


def _bracket_value(r: Fraction) -> Fraction:
    return fractional_bracket(r).value


def quartic_specialization_check(index_set: DeformationIndexSet, trunc: int) -> bool:
    """Сравнение с отдельной записью для квартик (n=2, d=4, β=0):
    β = (sum a_α α + (1,1,1,1))/4, β_i ∉ Z, β_0+β_1, β_2+β_3 ∈ Z,
    коэффициент (-1)^{[β_0]+[β_2]} <β_0><β_1><β_2><β_3> / prod a!.
    """
    if index_set.n != 2 or index_set.d != 4:
        raise InvalidInput("quartic specialization needs n=2, d=4")
    series = period_series(2, 4, (0, 0, 0, 0), index_set, trunc)
    expected: dict[tuple[int, ...], Fraction] = {}
    for a in bounded_compositions(len(index_set), trunc):
        num = [1, 1, 1, 1]
        for count, alpha in zip(a, index_set.monomials):
            for i in range(4):
                num[i] += count * alpha[i]
        b = [Fraction(v, 4) for v in num]
        if any(x.denominator == 1 for x in b):
            continue
        if (b[0] + b[1]).denominator != 1 or (b[2] + b[3]).denominator != 1:
            continue
        sign = -1 if (math.floor(b[0]) + math.floor(b[2])) % 2 else 1
        value = sign * _bracket_value(b[0]) * _bracket_value(b[1]) * _bracket_value(b[2]) * _bracket_value(b[3])
        value /= _multi_factorial(a)
        if value:
            expected[a] = value
    return expected == series.coefficients


def denominator_report(series: PeriodSeries) -> dict[int, dict[int, int]]:
    """Степень -> разложение НОК знаменателей коэффициентов этой степени."""
    report = {}
    for degree, terms in series.by_degree().items():
        lcm = math.lcm(*(c.denominator for c in terms.values())) if terms else 1
        report[degree] = {int(p): int(e) for p, e in factorint(lcm).items()}
    return report


# --- коразмерности ---


def codim_C(n: int, d: int, a: Sequence[int]) -> int:
    """C(n+1+d, n+1) - sum_k (-1)^{k-1} sum_{k-подмножества с суммой <= d} C(n+1+d-сумма, n+1)."""
    if any(int(x) <= 0 for x in a):
        raise InvalidInput("the sequence must consist of positive integers")
    a = [int(x) for x in a]
    total = math.comb(n + 1 + d, n + 1)
    # каждое a_i >= 1, так что подмножества с суммой <= d имеют не больше d элементов
    for k in range(1, min(len(a), d) + 1):
        inner = sum(math.comb(n + 1 + d - sum(c), n + 1) for c in combinations(a, k) if sum(c) <= d)
        total -= (-1) ** (k - 1) * inner
    return total


def codim_VZ(n: int, d: int, m: int) -> int:
    """2 C_{1^{n/2+1}, (d-1)^{n/2+1}} - C_{1^{n-m+1}, (d-1)^{m+1}}."""
    if n % 2:
        raise InvalidInput("n must be even")
    half = n // 2
    if not -1 <= m <= half - 1:
        raise InvalidInput(f"m must satisfy -1 <= m <= {half - 1}")
    first = codim_C(n, d, [1] * (half + 1) + [d - 1] * (half + 1))
    second = codim_C(n, d, [1] * (n - m + 1) + [d - 1] * (m + 1))
    return 2 * first - second


def cubic_closed_form(k: int) -> Fraction:
    return Fraction(k**3, 6) + Fraction(3 * k**2, 2) - Fraction(14 * k, 3) + 4


@dataclass(frozen=True)
class CodimRow:
    n: int
    dim_t: int
    minimal: int
    maximal: int
    linear: int
    mixed: int


TABLE_NS = (4, 6, 8, 10, 12)


def table_repro() -> list[CodimRow]:
    """Коразмерности компонент локуса Ходжа для кубических гиперповерхностей, n = 4..12."""
    rows = []
    for n in TABLE_NS:
        half = n // 2
        rows.append(
            CodimRow(
                n=n,
                dim_t=math.comb(n + 2, 3),
                minimal=math.comb(half + 1, 3),
                maximal=math.comb(n + 2, min(3, half - 2)),
                linear=codim_C(n, 3, [1] * (half + 1) + [2] * (half + 1)),
                mixed=codim_VZ(n, 3, half - 3) - 1,
            )
        )
    return rows


# --- численная проверка ---


def _root(d: int, k: int) -> mpmath.mpc:
    return mpmath.exp(1j * mpmath.pi * (2 * k + 1) / d)


def _newton(coeffs: Sequence, start, max_iter: int = 100):
    """Корень многочлена (коэффициенты от старшего) методом Ньютона от start."""
    deriv = [c * (len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
    x = start
    for _ in range(max_iter):
        fx = mpmath.polyval(coeffs, x)
        dfx = mpmath.polyval(deriv, x)
        if dfx == 0:
            break
        step = fx / dfx
        x -= step
        if abs(step) < NEWTON_TOL:
            return x
    raise NewtonDivergence(f"Newton iteration from {start} did not converge")


def balegh_series_value(d: int, beta: int, branch: tuple[int, int], t: Sequence[Fraction], trunc: int):
    """Сумма ряда по a in N0^d, |a| <= trunc, для f = x^d + 1 + sum t_i x^{d-i}.

    Член: (-1)^{|a|} <(d-1-β+sum i a_i)/d> <(β+1+sum (d-i) a_i)/d> p_a t^a / a!,
    p_a = -(ζ_2^e - ζ_1^e)/d, e = (β+1+sum (d-i) a_i) mod d; члены с d | (β+1-sum i a_i) опускаются.
    """
    z1, z2 = _root(d, branch[0]), _root(d, branch[1])
    total = mpmath.mpc(0)
    tv = [mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator for x in t]
    for a in bounded_compositions(d, trunc):
        weighted = sum((i + 1) * ai for i, ai in enumerate(a))
        dual = sum((d - i - 1) * ai for i, ai in enumerate(a))
        if (beta + 1 - weighted) % d == 0:
            continue
        D = _bracket_value(Fraction(d - 1 - beta + weighted, d)) * _bracket_value(Fraction(beta + 1 + dual, d))
        e = (beta + 1 + dual) % d
        p_a = -(z2**e - z1**e) / d
        mono = mpmath.mpf(1)
        for x, ai in zip(tv, a):
            if ai:
                mono *= x**ai
        sign = -1 if sum(a) % 2 else 1
        total += sign * mpmath.mpf(D.numerator) / D.denominator * p_a * mono / _multi_factorial(a)
    return total


def balegh_direct_value(d: int, beta: int, branch: tuple[int, int], t: Sequence[Fraction]):
    """x_2^β / f'(x_2) - x_1^β / f'(x_1) для корней x_k около ζ_k."""
    tv = [mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator for x in t]
    coeffs = [mpmath.mpf(1)] + tv[: d - 1] + [1 + tv[d - 1]]
    deriv = [c * (d - i) for i, c in enumerate(coeffs[:-1])]
    x1 = _newton(coeffs, _root(d, branch[0]))
    x2 = _newton(coeffs, _root(d, branch[1]))
    if abs(x1 - x2) < 1e-6:
        raise NewtonDivergence("both branches converged to the same root")
    return x2**beta / mpmath.polyval(deriv, x2) - x1**beta / mpmath.polyval(deriv, x1)


def balegh_numeric_check(
    d: int,
    beta: int,
    branch: tuple[int, int],
    trunc: int,
    t: Sequence[Fraction],
    tol: float = BALEGH_TOL,
) -> float:
    """|ряд - прямое вычисление|; предупреждение в логе, если больше tol."""
    if d < 2:
        raise InvalidInput("d must be at least 2")
    if not 0 <= beta <= d - 2:
        raise BetaOutOfRange(f"beta must lie in [0, {d - 2}]")
    if len(t) != d:
        raise InvalidInput(f"t must have {d} entries")
    if branch[0] == branch[1] or not all(0 <= k < d for k in branch):
        raise InvalidInput(f"branch indices must be distinct and in [0, {d - 1}]")
    with mpmath.workdps(30):
        series = balegh_series_value(d, beta, branch, t, trunc)
        direct = balegh_direct_value(d, beta, branch, t)
        residual = float(abs(series - direct))
    if residual > tol:
        logger.warning("series and direct value differ by %.3e (d=%d, beta=%d)", residual, d, beta)
    return residual
