"""Плотные ядра на numpy: многочленные матрицы над Z/m[z] и поля над F_p[x_1..x_n].

Значения всегда приведены по модулю; при угрозе переполнения int64 используется dtype=object.
"""
from __future__ import annotations

import logging
from typing import Iterator, Sequence

import numpy as np

from adelab.core.poly import Exponent, PolyRing, SparsePoly
from adelab.core.scalars import residue_int

logger = logging.getLogger(__name__)

_INT64_LIMIT = 2**63 - 1

DenseMatrix = list[list[np.ndarray]]


def pick_dtype(m: int, products: int):
    """int64, если сумма `products` произведений вычетов по модулю m не переполняет int64."""
    return np.int64 if products * (m - 1) * (m - 1) < _INT64_LIMIT else object


def univariate_dense(poly: SparsePoly, m: int, p: int, dtype=np.int64) -> np.ndarray:
    """Коэффициенты многочлена от одной переменной в Z/m (младшие степени первыми)."""
    deg = max(poly.total_degree(), 0)
    out = np.zeros(deg + 1, dtype=dtype)
    for (e,), c in poly.items():
        out[e] = residue_int(c, m, p)
    return out


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Свёртка длинного a с коротким b; работает и для dtype=object."""
    out = np.zeros(len(a) + len(b) - 1, dtype=a.dtype)
    for i, bi in enumerate(b):
        if bi:
            out[i : i + len(a)] += a * bi
    return out


def _derivative(a: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros_like(a)
    if len(a) > 1:
        idx = np.array(range(1, len(a)), dtype=a.dtype)
        out[:-1] = (a[1:] * idx) % m
    return out


def _pad(a: np.ndarray, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=a.dtype)
    out[: len(a)] = a[:length]
    return out


def cleared_iterates_mod(
    delta: np.ndarray,
    b1: DenseMatrix,
    count: int,
    m: int,
) -> Iterator[DenseMatrix]:
    """B_1, ..., B_count по модулю m по рекурсии B_{j+1} = Δ B_j' - j Δ' B_j + B_j B_1.

    deg B_j <= j * e, где e = наибольшая степень среди Δ и элементов B_1, так что массивы
    фиксированной длины count * e + 1 не теряют коэффициентов.
    """
    n = len(b1)
    e = max(len(delta) - 1, max(len(x) - 1 for row in b1 for x in row), 1)
    length = count * e + 1
    dtype = pick_dtype(m, (n + 2) * (e + 1))
    delta = delta.astype(dtype) % m
    ddelta = _derivative(delta, m)
    b1 = [[x.astype(dtype) % m for x in row] for row in b1]
    current = [[_pad(x, length) for x in row] for row in b1]
    yield current
    for j in range(1, count):
        jd = (ddelta * (j % m)) % m
        nxt = []
        for i in range(n):
            row = []
            for k in range(n):
                acc = _convolve(_derivative(current[i][k], m), delta)[:length]
                acc = acc - _convolve(current[i][k], jd)[:length]
                for t in range(n):
                    acc = acc + _convolve(current[i][t], b1[t][k])[:length]
                row.append(acc % m)
            nxt.append(row)
        current = nxt
        yield current


def matrix_is_zero(mat: DenseMatrix) -> bool:
    return all(not np.any(x) for row in mat for x in row)


# --- многомерные массивы над F_p для дифференцирований ---

FieldTerms = list[list[tuple[Exponent, int]]]


def field_terms(components: Sequence[SparsePoly]) -> FieldTerms:
    return [[(e, int(c)) for e, c in comp.items()] for comp in components]


def to_dense(poly: SparsePoly, size: int) -> np.ndarray:
    arr = np.zeros((size,) * poly.ring.nvars, dtype=np.int64)
    for e, c in poly.items():
        arr[e] = int(c)
    return arr


def from_dense(arr: np.ndarray, ring: PolyRing) -> SparsePoly:
    nz = np.nonzero(arr)
    values = arr[nz]
    return SparsePoly(ring, {tuple(int(i) for i in idx): int(v) for *idx, v in zip(*nz, values)})


def apply_field(arr: np.ndarray, terms: FieldTerms, p: int, degree: int) -> np.ndarray:
    """v(F) = sum_i v_i dF/dx_i над F_p; degree: верхняя оценка полной степени F.

    Работает внутри куба [0, degree]^n; размер массива должен вмещать degree + deg(v).
    """
    n = arr.ndim
    size = arr.shape[0]
    box = min(degree + 1, size)
    out = np.zeros_like(arr)
    if box < 2:
        return out
    idx = np.arange(size, dtype=np.int64)
    for i, comp in enumerate(terms):
        if not comp:
            continue
        src = [slice(0, box)] * n
        src[i] = slice(1, box)
        shape = [1] * n
        shape[i] = box - 1
        grad = (arr[tuple(src)] * idx[1:box].reshape(shape)) % p
        if not np.any(grad):
            continue
        for exp, c in comp:
            dst = tuple(slice(exp[j], exp[j] + grad.shape[j]) for j in range(n))
            out[dst] += c * grad
        out %= p
    return out


def multiply_sparse(arr: np.ndarray, terms: list[tuple[Exponent, int]], p: int, degree: int) -> np.ndarray:
    """F * g для разреженного g над F_p."""
    n = arr.ndim
    box = min(degree + 1, arr.shape[0])
    src = arr[(slice(0, box),) * n]
    out = np.zeros_like(arr)
    for exp, c in terms:
        dst = tuple(slice(exp[j], exp[j] + box) for j in range(n))
        out[dst] += c * src
    return out % p


def evaluate_dense(arr: np.ndarray, point: Sequence[int], p: int) -> int:
    """Значение многочлена в точке над F_p (свёртка по осям, начиная с последней)."""
    size = arr.shape[0]
    value = arr
    for x in reversed(point):
        powers = np.ones(size, dtype=np.int64)
        for k in range(1, size):
            powers[k] = powers[k - 1] * x % p
        value = (value @ powers) % p
    return int(value)
