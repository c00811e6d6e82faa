"""Линейные системы dy/dz = A y над Q(z): очищенные итерации, p- и m_{p,k}-кривизна, сканы простых,
плотность, формальные решения, матрица U и проверка pull-back.

Система хранится как (Δ, B_1 = Δ·A). Итерации A_{m+1} = A_m' + A_m A после умножения на Δ^{m+1}
дают B_{m+1} = Δ B_m' - m Δ' B_m + B_m B_1 с B_m = Δ^m A_m.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import partial
from typing import Optional, Sequence, Union

import numpy as np
from sympy import factorint, primefactors

from adelab.core import dense
from adelab.core.errors import (
    DenominatorNotUnit,
    EmptyScan,
    InvalidInput,
    PreconditionFailed,
    SingularPoint,
    ZeroLeadingCoefficient,
)
from adelab.core.matrix import PolyMatrix
from adelab.core.poly import PolyRing, SparsePoly
from adelab.core.scalars import legendre_factorial_ord, require_prime, residue_int
from adelab.core.series import TruncSeries
from adelab.services.scan import primes_upto, run_scan

logger = logging.getLogger(__name__)

Z = PolyRing(("z",))

PolyLike = Union[SparsePoly, int, Fraction]


class Curvature(str, Enum):
    RING = "RingPrime"
    ZERO = "Zero"
    NONZERO = "NonZero"


class PrimeClass(str, Enum):
    RING = "RingPrime"
    GOOD = "Good"
    BAD = "Bad"


_AS_CURVATURE = {PrimeClass.RING: Curvature.RING, PrimeClass.GOOD: Curvature.ZERO, PrimeClass.BAD: Curvature.NONZERO}


@dataclass(frozen=True)
class OdeSystem:
    """dy/dz = A y, хранится как Δ и B_1 = Δ·A с многочленными элементами.

    Для систем ранга 1 над Z[√d] (quadratic_d задан) b1 хранит коэффициент при √d.
    """

    delta: SparsePoly
    b1: PolyMatrix
    ring_primes: frozenset[int]
    scalar: Optional[tuple[SparsePoly, ...]] = None
    quadratic_d: Optional[int] = None
    label: str = ""

    @property
    def rank(self) -> int:
        return self.b1.shape[0]


@dataclass(frozen=True)
class PrimeRecord:
    p: int
    status: PrimeClass
    m: int
    k: int


@dataclass
class PrimeScanReport:
    label: str
    pmax: int
    k: int
    records: list[PrimeRecord]
    truncated: bool = False
    elapsed_ms: float = 0.0

    def _with(self, status: PrimeClass) -> list[int]:
        return [r.p for r in self.records if r.status == status]

    def good(self) -> list[int]:
        return self._with(PrimeClass.GOOD)

    def bad(self) -> list[int]:
        return self._with(PrimeClass.BAD)

    def ring(self) -> list[int]:
        return self._with(PrimeClass.RING)

    @property
    def primes(self) -> list[int]:
        return [r.p for r in self.records]


@dataclass
class ClearedIterates:
    base: OdeSystem
    iterates: list[PolyMatrix] = field(default_factory=list)

    def at(self, m: int) -> PolyMatrix:
        """B_m, m >= 1."""
        return self.iterates[m - 1]


# --- построение систем ---


def _as_poly(c: PolyLike) -> SparsePoly:
    if isinstance(c, SparsePoly):
        if c.ring.names != Z.names or c.ring.modulus is not None:
            return SparsePoly(Z, c.terms)
        return c
    return Z.const(c)


def _ring_primes(delta: SparsePoly, entries: Sequence[SparsePoly]) -> frozenset[int]:
    primes: set[int] = set()
    for poly in (delta, *entries):
        for den in poly.denominators():
            primes.update(primefactors(den))
    _, lead = delta.leading_term()
    lead = Fraction(lead)
    primes.update(primefactors(abs(lead.numerator)))
    primes.update(primefactors(lead.denominator))
    return frozenset(int(p) for p in primes)


def from_scalar(coeffs: Sequence[PolyLike], label: str = "") -> OdeSystem:
    """c_r y^(r) + ... + c_1 y' + c_0 y = 0 -> система-компаньон с вектором (y, y', ..., y^(r-1)).

    Δ = c_r, над диагональю стоит Δ, последняя строка B_1 равна (-c_0, ..., -c_{r-1}).
    """
    polys = [_as_poly(c) for c in coeffs]
    if len(polys) < 2:
        raise InvalidInput("a scalar equation needs at least c_0 and c_1")
    delta = polys[-1]
    if delta.is_zero():
        raise ZeroLeadingCoefficient("leading coefficient c_r is zero")
    r = len(polys) - 1
    rows = [[Z.zero() for _ in range(r)] for _ in range(r)]
    for i in range(r - 1):
        rows[i][i + 1] = delta
    for j in range(r):
        rows[r - 1][j] = -polys[j]
    entries = [e for row in rows for e in row]
    return OdeSystem(
        delta=delta,
        b1=PolyMatrix(rows),
        ring_primes=_ring_primes(delta, entries),
        scalar=tuple(polys),
        label=label,
    )


def lame(n: Fraction, B: Fraction, g2: Fraction, g3: Fraction) -> OdeSystem:
    """P y'' + (1/2) P' y' - (n(n+1) z + B) y = 0, P = 4z^3 - g2 z - g3."""
    n, B, g2, g3 = (Fraction(v) for v in (n, B, g2, g3))
    if 27 * g3**2 - g2**3 == 0:
        logger.warning("Lame(%s, %s, %s, %s): 27*g3^2 - g2^3 vanishes, P has a repeated root", n, B, g2, g3)
    (z,) = Z.gens()
    P = 4 * z**3 - g2 * z - g3
    c0 = -(n * (n + 1)) * z - B
    c1 = P.derivative(0) * Fraction(1, 2)
    return from_scalar((c0, c1, P), label=f"lame({n},{B},{g2},{g3})")


def hypergeometric(a: Fraction, b: Fraction, c: Fraction) -> OdeSystem:
    """z(1-z) y'' + (c - (a+b+1) z) y' - ab y = 0."""
    a, b, c = (Fraction(v) for v in (a, b, c))
    (z,) = Z.gens()
    return from_scalar(
        (Z.const(-a * b), c - (a + b + 1) * z, z - z**2),
        label=f"hypergeometric({a},{b},{c})",
    )


def rank_one_quadratic(d: int) -> OdeSystem:
    """y' = (√d / z) y над Z[√d]; Δ = z."""
    d = int(d)
    if d in (0, 1) or any(e > 1 for e in factorint(abs(d)).values()):
        raise InvalidInput(f"d = {d} is not a squarefree integer different from 0, 1")
    (z,) = Z.gens()
    return OdeSystem(
        delta=z,
        b1=PolyMatrix([[Z.one()]]),
        ring_primes=frozenset(int(p) for p in primefactors(abs(2 * d))),
        quadratic_d=d,
        label=f"quadratic({d})",
    )


# --- кривизна ---


def mpk(p: int, k: int) -> int:
    """Наименьшее m с ord_p(m!) >= k. Порядок растёт только на кратных p."""
    if k <= 0:
        raise InvalidInput("k must be positive")
    m = p
    while legendre_factorial_ord(m, p) < k:
        m += p
    return m


def _dense_system(sys: OdeSystem, p: int, k: int) -> tuple[np.ndarray, dense.DenseMatrix]:
    m = p**k
    dtype = dense.pick_dtype(m, (sys.rank + 2) * (sys.delta.total_degree() + 1))
    delta = dense.univariate_dense(sys.delta, m, p, dtype)
    b1 = [[dense.univariate_dense(e, m, p, dtype) for e in row] for row in sys.b1.rows]
    return delta, b1


def _quadratic_vanishes(d: int, p: int, k: int, m: int) -> bool:
    """Убывающий факториал a(a-1)...(a-m+1), a = √d, в Z[√d]/p^k; пары (x, y) = x + y√d."""
    mod = p**k
    x, y = 1, 0
    for j in range(m):
        x, y = (-j * x + d * y) % mod, (x - j * y) % mod
        if x == 0 and y == 0:
            return True
    return False


def _classify(sys: OdeSystem, k: int, p: int) -> PrimeRecord:
    m = mpk(p, k)
    if p in sys.ring_primes:
        return PrimeRecord(p, PrimeClass.RING, m, k)
    if sys.quadratic_d is not None:
        zero = _quadratic_vanishes(sys.quadratic_d, p, k, m)
    else:
        delta, b1 = _dense_system(sys, p, k)
        last = None
        for last in dense.cleared_iterates_mod(delta, b1, m, p**k):
            pass
        zero = dense.matrix_is_zero(last)
    status = PrimeClass.GOOD if zero else PrimeClass.BAD
    logger.debug("%s p=%d k=%d m=%d: %s", sys.label, p, k, m, status.value)
    return PrimeRecord(p, status, m, k)


def curvature_test(sys: OdeSystem, p: int, k: int = 1) -> Curvature:
    """m_{p,k}-кривизна: B_m mod p^k для m = m_{p,k}; Zero, если все элементы делятся на p^k."""
    require_prime(p)
    status = _classify(sys, k, p).status
    return _AS_CURVATURE[status]


def bad_prime_scan(
    sys: OdeSystem,
    pmax: int,
    k: int = 1,
    maxbad: Optional[int] = None,
    workers: int = 1,
    chunksize: int = 1,
) -> PrimeScanReport:
    """Классификация всех простых <= pmax; при maxbad остановка, как только плохих больше maxbad."""
    if pmax < 2:
        raise InvalidInput("pmax must be at least 2")
    started = time.perf_counter()
    bad_seen = 0

    def stop(record: PrimeRecord) -> bool:
        nonlocal bad_seen
        if maxbad is None:
            return False
        if record.status == PrimeClass.BAD:
            bad_seen += 1
        return bad_seen > maxbad

    records, truncated = run_scan(
        partial(_classify, sys, k),
        primes_upto(pmax),
        workers=workers,
        stop=stop,
        chunksize=chunksize,
        label=sys.label or "pcurv",
    )
    return PrimeScanReport(
        label=sys.label,
        pmax=pmax,
        k=k,
        records=records,
        truncated=truncated,
        elapsed_ms=(time.perf_counter() - started) * 1000,
    )


def curvature_density(sys: OdeSystem, pmax: int, workers: int = 1) -> Fraction:
    """#Good / (#Good + #Bad) среди p <= pmax; простые кольца не учитываются."""
    report = bad_prime_scan(sys, pmax, 1, workers=workers)
    return density_of(report)


def density_of(report: PrimeScanReport) -> Fraction:
    if report.truncated:
        raise InvalidInput("a truncated scan cannot feed a density estimate")
    good, bad = len(report.good()), len(report.bad())
    if good + bad == 0:
        raise EmptyScan(f"no classifiable prime up to {report.pmax}")
    return Fraction(good, good + bad)


def single_solution_test(
    sys: OdeSystem,
    p: int,
    k: int,
    z0: Fraction,
    y0: Sequence[Fraction],
) -> Curvature:
    """A_m(z0) y0 ≡ 0 mod p^k, m = m_{p,k}: необходимое условие алгебраичности одного решения.

    Проверяется на очищенной итерации: B_m(z0) y0 при обратимом Δ(z0).
    """
    require_prime(p)
    if sys.quadratic_d is not None:
        raise InvalidInput("single-solution test needs a system over Q")
    if len(y0) != sys.rank:
        raise InvalidInput(f"initial vector must have {sys.rank} entries")
    mod = p**k
    if p in sys.ring_primes:
        return Curvature.RING
    try:
        z0r = residue_int(z0, mod, p)
        y0r = [residue_int(v, mod, p) for v in y0]
    except DenominatorNotUnit:
        return Curvature.RING
    if residue_int(sys.delta.evaluate([z0]), p, p) == 0:
        return Curvature.RING
    m = mpk(p, k)
    delta, b1 = _dense_system(sys, p, k)
    last = None
    for last in dense.cleared_iterates_mod(delta, b1, m, mod):
        pass
    for row in last:
        acc = 0
        for entry, y in zip(row, y0r):
            acc += _eval_mod(entry, z0r, mod) * y
        if acc % mod:
            return Curvature.NONZERO
    return Curvature.ZERO


def _eval_mod(arr: np.ndarray, x: int, mod: int) -> int:
    acc = 0
    for c in reversed(arr.tolist()):
        acc = (acc * x + int(c)) % mod
    return acc


def cleared_iterates(sys: OdeSystem, count: int) -> ClearedIterates:
    """B_1..B_count точно над Q."""
    if sys.quadratic_d is not None:
        raise InvalidInput("exact iterates are built for systems over Q")
    d = sys.delta
    dd = d.derivative(0)
    current = sys.b1
    out = ClearedIterates(sys, [current])
    for m in range(1, count):
        current = current.derivative(0).scale(d) - current.scale(dd * m) + current @ sys.b1
        out.iterates.append(current)
    return out


# --- формальные решения ---


def _shifted(poly: SparsePoly, z0: Fraction, ring: PolyRing, order: int) -> TruncSeries:
    """poly(z0 + u) как ряд по u."""
    (z,) = Z.gens()
    moved = _as_poly(poly).substitute({0: z + z0})
    return TruncSeries(ring, order, moved.terms)


def _series_ring(z0: Fraction) -> PolyRing:
    return PolyRing(("z",) if z0 == 0 else ("u",))


def local_matrix(sys: OdeSystem, z0: Fraction, order: int) -> list[list[TruncSeries]]:
    """Разложение A = B_1/Δ в точке z0 до степени order."""
    z0 = Fraction(z0)
    if sys.delta.evaluate([z0]) == 0:
        raise SingularPoint(f"Δ vanishes at z0 = {z0}")
    ring = _series_ring(z0)
    inv = _shifted(sys.delta, z0, ring, order).inverse()
    return [[_shifted(e, z0, ring, order) * inv for e in row] for row in sys.b1.rows]


def dsolve_formal(sys: OdeSystem, z0: Fraction, y0: Sequence[Fraction], order: int) -> list[TruncSeries]:
    """Решение с y(z0) = y0: n y_n = sum_{i+j=n-1} A_i y_j."""
    if sys.quadratic_d is not None:
        raise InvalidInput("formal solutions are built for systems over Q")
    if len(y0) != sys.rank:
        raise InvalidInput(f"initial vector must have {sys.rank} entries")
    z0 = Fraction(z0)
    a = local_matrix(sys, z0, order)
    n = sys.rank
    a_coef = [[[a[i][j].coeff(t) for t in range(order + 1)] for j in range(n)] for i in range(n)]
    ys = [[Fraction(v) for v in y0]]
    for deg in range(1, order + 1):
        nxt = []
        for i in range(n):
            acc = Fraction(0)
            for t in range(deg):
                yj = ys[deg - 1 - t]
                for j in range(n):
                    acc += a_coef[i][j][t] * yj[j]
            nxt.append(acc / deg)
        ys.append(nxt)
    ring = _series_ring(z0)
    return [TruncSeries(ring, order, {(deg,): ys[deg][i] for deg in range(order + 1)}) for i in range(n)]


def ode_residual(sys: OdeSystem, z0: Fraction, ys: Sequence[TruncSeries]) -> list[TruncSeries]:
    """Δ y' - B_1 y в окрестности z0; для решения все ряды нулевые до степени order - 1."""
    z0 = Fraction(z0)
    ring = ys[0].ring
    order = ys[0].order
    delta = _shifted(sys.delta, z0, ring, order)
    out = []
    for i, row in enumerate(sys.b1.rows):
        acc = delta * ys[i].derivative(0)
        for j, e in enumerate(row):
            acc = acc - _shifted(e, z0, ring, order) * ys[j]
        out.append(acc.truncate(order - 1))
    return out


def p_integrality_report(series: TruncSeries, primes: Sequence[int]) -> dict[int, Union[int, float]]:
    """Минимальная p-адическая оценка коэффициентов (inf для нулевого ряда)."""
    return {p: series.min_valuation(p) for p in primes}


# --- матрица U ---


def _pmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.convolve(a, b) % p


def _padd(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] += b
    return out % p


def _pderiv(a: np.ndarray, p: int) -> np.ndarray:
    if len(a) == 1:
        return np.zeros(1, dtype=np.int64)
    return (a[1:] * np.arange(1, len(a), dtype=np.int64)) % p


def frobenius_U_check(sys: OdeSystem, p: int, z0: Fraction) -> bool:
    """U = sum_{m<p} (-1)^m (z-z0)^m A_m / m! удовлетворяет U' = -U A над F_p.

    С Ũ = Δ^{p-1} U проверяется многочленное тождество Ũ'Δ - (p-1)Δ'Ũ + Ũ B_1 ≡ 0 mod p.
    """
    require_prime(p)
    verdict = curvature_test(sys, p, 1)
    if verdict != Curvature.ZERO:
        raise PreconditionFailed(f"p-curvature at p={p} is {verdict.value}, not Zero")
    try:
        z0p = residue_int(z0, p, p)
    except DenominatorNotUnit as exc:
        raise PreconditionFailed(f"z0 = {z0} is not {p}-integral") from exc
    delta, b1 = _dense_system(sys, p, 1)
    if _eval_mod(delta, z0p, p) == 0:
        raise PreconditionFailed(f"Δ(z0) ≡ 0 mod {p}")
    n = sys.rank
    iterates = [
        [[np.trim_zeros(x, "b") if np.any(x) else np.zeros(1, dtype=np.int64) for x in row] for row in mat]
        for mat in dense.cleared_iterates_mod(delta, b1, p - 1, p)
    ] if p > 2 else [b1]
    identity = [[np.array([int(i == j)], dtype=np.int64) for j in range(n)] for i in range(n)]
    mats = [identity] + iterates[: p - 1]
    shift = np.array([(-z0p) % p, 1], dtype=np.int64)
    u = [[np.zeros(1, dtype=np.int64) for _ in range(n)] for _ in range(n)]
    zpow = np.array([1], dtype=np.int64)
    delta_pows = [np.array([1], dtype=np.int64)]
    for _ in range(p - 1):
        delta_pows.append(_pmul(delta_pows[-1], delta, p))
    fact = 1
    for m in range(p):
        if m:
            fact = fact * m % p
            zpow = _pmul(zpow, shift, p)
        coef = (-1) ** m * pow(fact, -1, p) % p
        weight = _pmul(zpow, delta_pows[p - 1 - m], p) * coef % p
        for i in range(n):
            for j in range(n):
                u[i][j] = _padd(u[i][j], _pmul(weight, mats[m][i][j], p), p)
    ddelta = _pderiv(delta, p)
    for i in range(n):
        for j in range(n):
            lhs = _pmul(_pderiv(u[i][j], p), delta, p)
            lhs = _padd(lhs, _pmul(ddelta, u[i][j], p) * ((1 - p) % p) % p, p)
            for t in range(n):
                lhs = _padd(lhs, _pmul(u[i][t], b1[t][j], p), p)
            if np.any(lhs):
                logger.info("U-check failed at p=%d entry (%d, %d)", p, i, j)
                return False
    return True


# --- pull-back ---


def pullback_check(target: OdeSystem, source: Sequence[PolyLike], s: int) -> bool:
    """Оператор s2(w)u'' + s1(w)u' + s0(w)u при w = z^s, y(z) = u(z^s), равен c·z^j·(целевой оператор).

    y' = s z^{s-1} u', y'' = s(s-1) z^{s-2} u' + s^2 z^{2s-2} u''; после умножения на s^2 z^{2s-1}:
    L2 = z s2(z^s), L1 = s z^s s1(z^s) - (s-1) s2(z^s), L0 = s^2 z^{2s-1} s0(z^s).
    """
    if target.scalar is None or len(target.scalar) != 3 or len(source) != 3:
        raise InvalidInput("pull-back check compares two second-order scalar operators")
    if s < 1:
        raise InvalidInput("s must be a positive integer")
    s0, s1, s2 = (_as_poly(c).scale_exponents(0, s) for c in source)
    L2 = s2.shift((1,))
    L1 = s1.shift((s,)) * s - s2 * (s - 1)
    L0 = s0.shift((2 * s - 1,)) * (s * s)
    c0, c1, c2 = target.scalar
    if L2.is_zero() or c2.is_zero():
        return False
    (e_l, a_l) = L2.leading_term()
    (e_c, a_c) = c2.leading_term()
    j = e_l[0] - e_c[0]
    if j < 0:
        return False
    factor = Z.monomial((j,), Fraction(a_l) / Fraction(a_c))
    return L2 == factor * c2 and L1 == factor * c1 and L0 == factor * c0
