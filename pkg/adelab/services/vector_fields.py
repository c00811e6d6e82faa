"""Полиномиальные векторные поля над Q и F_p: степени Фробениуса v^p, p-замкнутость, первые интегралы,
принадлежность главному идеалу, тождество для поля Рамануджана и линеаризация в характеристике p.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import partial
from typing import Mapping, Optional, Sequence

import numpy as np
from sympy import primefactors

from adelab.core import dense
from adelab.core.errors import (
    BadLinearPart,
    DenominatorNotUnit,
    InvalidInput,
    NotIdempotent,
    UnknownName,
)
from adelab.core.matrix import matmul_mod, matpow_mod
from adelab.core.poly import PolyRing, SparsePoly, poly_divide_exact
from adelab.core.scalars import require_prime, residue_int
from adelab.core.series import TruncSeries
from adelab.services.modular import T123, ab_polynomials, lift_to_t123, ramanujan_components
from adelab.services.scan import primes_upto, run_scan

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Derivation:
    """v = sum v_i d/dx_i; компоненты v_i = v(x_i) в кольце ring."""

    ring: PolyRing
    components: tuple[SparsePoly, ...]
    label: str = ""

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if len(comps) != self.ring.nvars:
            raise InvalidInput(f"{len(comps)} components for {self.ring.nvars} variables")
        if any(c.ring != self.ring for c in comps):
            raise InvalidInput("components must live in the declared ring")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_components(cls, components: Sequence[SparsePoly], label: str = "") -> Derivation:
        return cls(components[0].ring, tuple(components), label)

    @property
    def modulus(self) -> Optional[int]:
        return self.ring.modulus

    def apply(self, f: SparsePoly) -> SparsePoly:
        out = self.ring.zero()
        for i, c in enumerate(self.components):
            if c:
                out = out + c * f.derivative(i)
        return out

    def __call__(self, f: SparsePoly) -> SparsePoly:
        return self.apply(f)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring == other.ring and self.components == other.components

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: Derivation) -> Derivation:
        return Derivation(self.ring, tuple(a + b for a, b in zip(self.components, other.components)))

    def scale(self, c) -> Derivation:
        return Derivation(self.ring, tuple(v * c for v in self.components), self.label)

    def ring_primes(self) -> frozenset[int]:
        primes: set[int] = set()
        for comp in self.components:
            for den in comp.denominators():
                primes.update(primefactors(den))
        return frozenset(int(p) for p in primes)

    def reduce(self, p: int) -> Derivation:
        return Derivation(self.ring.reduced(p), tuple(c.reduce(p) for c in self.components), self.label)

    def degree(self) -> int:
        return max((c.total_degree() for c in self.components), default=0)

    def iterate(self, f: SparsePoly, k: int) -> SparsePoly:
        """v^k(f) разреженно."""
        for _ in range(k):
            f = self.apply(f)
        return f

    def to_text(self) -> list[str]:
        return [c.to_text() for c in self.components]


# --- каталог ---


def _ring(names: Sequence[str]) -> PolyRing:
    return PolyRing(tuple(names))


def _lorenz(params: Mapping[str, Fraction]) -> Derivation:
    sigma = Fraction(params.get("sigma", 10))
    rho = Fraction(params.get("rho", 28))
    beta = Fraction(params.get("beta", Fraction(8, 3)))
    ring = _ring(("x", "y", "z"))
    x, y, z = ring.gens()
    return Derivation(
        ring,
        ((y - x) * sigma, x * (rho - z) - y, x * y - z * beta),
        f"lorenz({sigma},{rho},{beta})",
    )


def _modular4(params: Mapping[str, Fraction]) -> Derivation:
    ring = _ring(("x2", "x3", "y2", "y3"))
    x2, x3, y2, y3 = ring.gens()
    return Derivation(
        ring,
        (
            x2 * 2 - x3 * 6 + (x2 - y2) * x2 * Fraction(1, 6),
            x3 * 3 - x2**2 * Fraction(1, 3) + (x2 - y2) * x3 * Fraction(1, 4),
            -(y2 * 2 - y3 * 6 + (y2 - x2) * y2 * Fraction(1, 6)),
            -(y3 * 3 - y2**2 * Fraction(1, 3) + (y2 - x2) * y3 * Fraction(1, 4)),
        ),
        "modular4",
    )


def _limitcycle(params: Mapping[str, Fraction]) -> Derivation:
    ring = _ring(("x", "y"))
    x, y = ring.gens()
    return Derivation(ring, (y * 2 + x**2 * Fraction(1, 2), x**2 * 3 - 3 + y * Fraction(9, 10)), "limitcycle")


def _ramanujan(convention: str):
    def build(params: Mapping[str, Fraction]) -> Derivation:
        return Derivation(T123, ramanujan_components(convention), f"ramanujan-{convention}")

    return build


CATALOG = {
    "ramanujan-a": _ramanujan("a"),
    "ramanujan-e": _ramanujan("e"),
    "lorenz": _lorenz,
    "modular4": _modular4,
    "limitcycle": _limitcycle,
}


def catalog(name: str, params: Optional[Mapping[str, Fraction]] = None) -> Derivation:
    """Поле из каталога по имени (без учёта регистра); у lorenz параметры sigma, rho, beta."""
    builder = CATALOG.get(name.strip().lower())
    if builder is None:
        raise UnknownName(f"unknown vector field {name!r}; known: {', '.join(sorted(CATALOG))}")
    return builder(params or {})


# --- v^p ---


def _over_fp(v: Derivation, p: int) -> Derivation:
    if v.modulus == p:
        return v
    if v.modulus is not None:
        raise InvalidInput(f"field is defined modulo {v.modulus}, not {p}")
    return v.reduce(p)


def _frobenius_dense(v: Derivation, p: int) -> tuple[list[np.ndarray], int]:
    """Плотные массивы v^p(x_i) и размер куба."""
    D = v.degree()
    step = max(D - 1, 0)
    size = 1 + p * step + D + 2
    terms = dense.field_terms(v.components)
    out = []
    for i in range(v.ring.nvars):
        arr = dense.to_dense(v.ring.gen(v.ring.names[i]), size)
        deg = 1
        for _ in range(p):
            arr = dense.apply_field(arr, terms, p, deg)
            deg += step
            if not np.any(arr):
                break
        out.append(arr)
    return out, size


def frobenius_power(v: Derivation, p: int) -> Derivation:
    """v^p: p-кратное применение v к каждой координате над F_p."""
    require_prime(p)
    v = _over_fp(v, p)
    arrays, _ = _frobenius_dense(v, p)
    return Derivation(v.ring, tuple(dense.from_dense(a, v.ring) for a in arrays), f"{v.label}^{p}")


class Collinearity(str, Enum):
    RING = "RingPrime"
    COLLINEAR = "Collinear"
    NOT_COLLINEAR = "NotCollinear"


@dataclass(frozen=True)
class Witness:
    i: int
    j: int
    minor: Optional[SparsePoly] = None
    value: Optional[int] = None

    def describe(self) -> str:
        if self.minor is not None:
            exp, c = self.minor.leading_term()
            lead = SparsePoly(self.minor.ring, {exp: c}).to_text()
            return f"({self.i},{self.j}): {len(self.minor)} terms, leading {lead}"
        return f"({self.i},{self.j}): {self.value}"


@dataclass(frozen=True)
class CollinearityReport:
    p: int
    status: Collinearity
    witness: Optional[Witness] = None


def is_pclosed(v: Derivation, p: int, point: Optional[Sequence[Fraction]] = None) -> CollinearityReport:
    """Миноры v_i w_j - v_j w_i, w = v^p: тождественно или в точке; первый ненулевой минор служит свидетелем."""
    require_prime(p)
    if v.modulus is None and p in v.ring_primes():
        return CollinearityReport(p, Collinearity.RING)
    vp = _over_fp(v, p)
    arrays, size = _frobenius_dense(vp, p)
    n = vp.ring.nvars
    if point is not None:
        try:
            at = [residue_int(c, p, p) for c in point]
        except DenominatorNotUnit:
            return CollinearityReport(p, Collinearity.RING)
        vals_v = [int(c.evaluate(at)) for c in vp.components]
        vals_w = [dense.evaluate_dense(a, at, p) for a in arrays]
        for i in range(n):
            for j in range(i + 1, n):
                m = (vals_v[i] * vals_w[j] - vals_v[j] * vals_w[i]) % p
                if m:
                    return CollinearityReport(p, Collinearity.NOT_COLLINEAR, Witness(i, j, value=m))
        return CollinearityReport(p, Collinearity.COLLINEAR)
    terms = dense.field_terms(vp.components)
    deg = 1 + p * max(vp.degree() - 1, 0)
    for i in range(n):
        for j in range(i + 1, n):
            minor = (dense.multiply_sparse(arrays[j], terms[i], p, deg) - dense.multiply_sparse(arrays[i], terms[j], p, deg)) % p
            if np.any(minor):
                witness = Witness(i, j, minor=dense.from_dense(minor, vp.ring))
                logger.debug("%s p=%d: minor %s", v.label, p, witness.describe())
                return CollinearityReport(p, Collinearity.NOT_COLLINEAR, witness)
    return CollinearityReport(p, Collinearity.COLLINEAR)


def collinearity_minors(v: Derivation, w: Derivation) -> dict[tuple[int, int], SparsePoly]:
    """Все миноры v_i w_j - v_j w_i, i != j; разреженный вариант того, что проверяет is_pclosed."""
    if v.ring != w.ring:
        raise InvalidInput("fields live in different rings")
    n = v.ring.nvars
    return {
        (i, j): v.components[i] * w.components[j] - v.components[j] * w.components[i]
        for i in range(n)
        for j in range(n)
        if i != j
    }


def pclosed_scan(v: Derivation, pmax: int, workers: int = 1, chunksize: int = 1) -> list[CollinearityReport]:
    if pmax < 2:
        raise InvalidInput("pmax must be at least 2")
    reports, _ = run_scan(partial(is_pclosed, v), primes_upto(pmax), workers=workers, chunksize=chunksize, label=v.label or "pclosed")
    return reports


def first_integral_check(v: Derivation, f: SparsePoly) -> bool:
    """v(f) = 0 тождественно."""
    if f.ring != v.ring:
        if v.modulus is not None and f.ring.modulus is None:
            f = f.reduce(v.modulus)
        else:
            raise InvalidInput("f and v live in different rings")
    return v.apply(f).is_zero()


def ramanujan_first_integral(p: int, convention: str = "e") -> SparsePoly:
    """e: B - t1 A (e-конвенция A, B); a: B + 12 t1 A (a-конвенция). Над F_p."""
    A, B = (lift_to_t123(x) for x in ab_polynomials(p, convention))
    t1 = T123.gen("t1")
    f = B - t1 * A if convention == "e" else B + t1 * A * 12
    return f.reduce(p)


class Membership(str, Enum):
    DIVISIBLE = "Divisible"
    REMAINDER = "Remainder"


@dataclass(frozen=True)
class MembershipResult:
    status: Membership
    reduced: SparsePoly
    remainder: SparsePoly


def reduce_by_principal(
    f: SparsePoly,
    eliminations: Sequence[tuple[str | int, SparsePoly]],
    g: SparsePoly,
) -> MembershipResult:
    """Подстановки x -> r(остальные) по очереди, затем деление на g."""
    for var, repl in eliminations:
        f = f.substitute({var: repl})
    result = poly_divide_exact(f, g)
    status = Membership.DIVISIBLE if result.exact else Membership.REMAINDER
    return MembershipResult(status, f, result.remainder)


def ramanujan_ideal_membership(f: SparsePoly, p: int) -> MembershipResult:
    """f ∈ <A - 1, B + 12 t1> над F_p (a-конвенция): t1 -> -B/12, затем деление на A - 1."""
    A, B = (lift_to_t123(x).reduce(p) for x in ab_polynomials(p, "a"))
    return reduce_by_principal(f, [("t1", B * Fraction(-1, 12))], A - 1)


def bianchini_check(p: int) -> bool:
    """v^p = A^2 v - (B/12 + t1 A)^2 d/dt1 + A (B/12 + t1 A) h, h = 2t1 d/dt1 + 4t2 d/dt2 + 6t3 d/dt3.

    Тождество записано для поля с обратным знаком времени: v = -ramanujan-a.
    Для самого каталожного поля знаки при f и h меняются местами.
    """
    require_prime(p)
    if p in (2, 3):
        raise InvalidInput("the identity is stated for p != 2, 3")
    v = catalog("ramanujan-a").reduce(p).scale(-1)
    w = frobenius_power(v, p)
    A, B = (lift_to_t123(x).reduce(p) for x in ab_polynomials(p, "a"))
    ring = v.ring
    t1, t2, t3 = ring.gens()
    s = B * Fraction(1, 12) + t1 * A
    h = (t1 * 2, t2 * 4, t3 * 6)
    f = (ring.one(), ring.zero(), ring.zero())
    for i in range(3):
        rhs = A * A * v.components[i] - s * s * f[i] + A * s * h[i]
        if w.components[i] != rhs:
            logger.info("Bianchini identity fails at p=%d, component %d", p, i)
            return False
    return True


# --- линеаризация ---


def _trunc(poly: SparsePoly, order: int) -> SparsePoly:
    return SparsePoly(poly.ring, {e: c for e, c in poly.items() if sum(e) <= order})


def linearize_1d(a: TruncSeries, lam: int, order: int) -> TruncSeries:
    """f = -sum_{i=1}^{p-1} (λ^{-1} v)^i q для v = a(q) d/dq; v(f) = λ f и f = q + O(q^2).

    Raises:
        BadLinearPart: λ = 0 или a ≠ λ q + O(q^2).
        NotIdempotent: v^p(q) ≠ v(q) до степени order.
    """
    p = a.ring.modulus
    if p is None:
        raise InvalidInput("a must be a series over F_p")
    require_prime(p)
    lam %= p
    if lam == 0:
        raise BadLinearPart("λ must be a nonzero residue")
    if a.coeff(0) != 0 or a.coeff(1) != lam:
        raise BadLinearPart(f"a is not {lam}*q + O(q^2)")
    field = Derivation(PolyRing(a.ring.names, p), (_trunc(a.to_poly(), order),))
    return TruncSeries.from_poly(_linearize(field, [[lam]], order)[0], order)


def _linearize(v: Derivation, A: list[list[int]], order: int) -> list[SparsePoly]:
    p = v.modulus
    n = v.ring.nvars

    def step(f: SparsePoly) -> SparsePoly:
        return _trunc(v.apply(f), order)

    gens = v.ring.gens()
    # iterates[k][i] = v^k(x_i)
    iterates = [list(gens)]
    for _ in range(p):
        iterates.append([step(f) for f in iterates[-1]])
    if any(a != b for a, b in zip(iterates[p], iterates[1])):
        raise NotIdempotent(f"v^{p} != v up to degree {order}")
    f = [v.ring.zero() for _ in range(n)]
    power = [[int(i == j) for j in range(n)] for i in range(n)]
    for k in range(p - 1):
        src = iterates[p - 1 - k]
        for i in range(n):
            for j in range(n):
                if power[i][j]:
                    f[i] = f[i] - src[j] * power[i][j]
        power = matmul_mod(power, A, p)
    for i in range(n):
        lhs = step(f[i])
        rhs = v.ring.zero()
        for j in range(n):
            if A[i][j]:
                rhs = rhs + f[j] * A[i][j]
        if lhs != _trunc(rhs, order):
            raise NotIdempotent(f"v(f_{i}) != (A f)_{i} up to degree {order}")
        linear = {e: c for e, c in f[i].items() if sum(e) == 1}
        if linear != {tuple(int(k == i) for k in range(n)): 1}:
            raise NotIdempotent(f"linear part of f_{i} is not x_{i}")
    return f


def linear_part(v: Derivation) -> list[list[int]]:
    n = v.ring.nvars
    return [
        [int(v.components[i].coeff(tuple(int(k == j) for k in range(n)))) for j in range(n)]
        for i in range(n)
    ]


def linearize_nd(v: Derivation, A: Sequence[Sequence[int]], order: int) -> list[SparsePoly]:
    """f = -(v^{p-1} x + A v^{p-2} x + ... + A^{p-2} v x); v(f) = A f, линейная часть f тождественна.

    Raises:
        BadLinearPart: A^{p-1} ≠ I или линейная часть v не равна A x.
        NotIdempotent: v^p ≠ v до степени order.
    """
    p = v.modulus
    if p is None:
        raise InvalidInput("v must be defined over F_p")
    require_prime(p)
    n = v.ring.nvars
    A = [[int(c) % p for c in row] for row in A]
    if len(A) != n or any(len(r) != n for r in A):
        raise InvalidInput(f"A must be {n}x{n}")
    if matpow_mod(A, p - 1, p) != [[int(i == j) for j in range(n)] for i in range(n)]:
        raise BadLinearPart("A^(p-1) is not the identity")
    if any(c.constant_term() for c in v.components) or linear_part(v) != A:
        raise BadLinearPart("linear part of v is not A x")
    return _linearize(v, A, order)
