"""Небольшие матрицы: PolyMatrix над кольцом многочленов и точное решение линейных систем над Q."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from adelab.core.errors import RingMismatch, SingularStep
from adelab.core.poly import PolyRing, SparsePoly


class PolyMatrix:
    """Прямоугольная матрица многочленов одного кольца."""

    __slots__ = ("ring", "rows")

    def __init__(self, rows: Sequence[Sequence[SparsePoly]]):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged matrix")
        ring = rows[0][0].ring
        if any(e.ring != ring for r in rows for e in r):
            raise RingMismatch("matrix entries from different rings")
        self.ring = ring
        self.rows = rows

    @classmethod
    def zeros(cls, ring: PolyRing, n: int, m: int | None = None) -> PolyMatrix:
        return cls([[ring.zero() for _ in range(m or n)] for _ in range(n)])

    @classmethod
    def identity(cls, ring: PolyRing, n: int) -> PolyMatrix:
        return cls([[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij: tuple[int, int]) -> SparsePoly:
        i, j = ij
        return self.rows[i][j]

    def map(self, fn: Callable[[SparsePoly], SparsePoly]) -> PolyMatrix:
        return PolyMatrix([[fn(e) for e in r] for r in self.rows])

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        return PolyMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        return PolyMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> PolyMatrix:
        return self.map(lambda e: -e)

    def scale(self, c: SparsePoly | int | Fraction) -> PolyMatrix:
        return self.map(lambda e: e * c)

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = self.ring.zero()
                for t in range(k):
                    acc = acc + self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def derivative(self, var: int | str = 0) -> PolyMatrix:
        return self.map(lambda e: e.derivative(var))

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def reduce(self, p: int, k: int = 1) -> PolyMatrix:
        return self.map(lambda e: e.reduce(p, k))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.rows == other.rows

    __hash__ = None  # type: ignore[assignment]

    def to_text(self) -> list[list[str]]:
        return [[e.to_text() for e in r] for r in self.rows]


def solve_rational(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], step: int = 0) -> list[Fraction]:
    """Решение M x = b над Q методом Гаусса.

    Допускается переопределённая совместная система; при неполном ранге или несовместности выбрасывается SingularStep.
    """
    rows = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(matrix, rhs)]
    ncols = len(matrix[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if len(pivots) < ncols:
        raise SingularStep(step)
    if any(row[-1] != 0 for row in rows[r:]):
        raise SingularStep(step, f"inconsistent linear system at order {step}")
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x


def matmul_mod(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    return [
        [sum(a[i][t] * b[t][j] for t in range(len(b))) % p for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def matpow_mod(a: Sequence[Sequence[int]], e: int, p: int) -> list[list[int]]:
    n = len(a)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = [[v % p for v in r] for r in a]
    while e:
        if e & 1:
            result = matmul_mod(result, base, p)
        e >>= 1
        if e:
            base = matmul_mod(base, base, p)
    return result
