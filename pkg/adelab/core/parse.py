"""Разбор многочленов и параметров из текста (CLI, HTTP)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from adelab.core.errors import InvalidInput
from adelab.core.poly import PolyRing, SparsePoly
from adelab.core.scalars import parse_rational

_TRANSFORMS = standard_transformations + (convert_xor,)


def parse_poly(text: str, ring: PolyRing) -> SparsePoly:
    """Многочлен с точными коэффициентами: '4*z^3 - 1/12*z + 7'. Десятичные дроби отклоняются."""
    symbols = {name: sympy.Symbol(name) for name in ring.names}
    try:
        expr = parse_expr(str(text), local_dict=symbols, transformations=_TRANSFORMS, evaluate=True)
    except (SyntaxError, TypeError, ValueError, sympy.SympifyError) as exc:
        raise InvalidInput(f"cannot parse polynomial {text!r}") from exc
    if expr.has(sympy.Float):
        raise InvalidInput(f"decimal coefficients are not exact: {text!r}")
    gens = [symbols[n] for n in ring.names]
    try:
        poly = sympy.Poly(expr, *gens, domain=sympy.QQ)
    except sympy.PolynomialError as exc:
        raise InvalidInput(f"{text!r} is not a polynomial in {', '.join(ring.names)}") from exc
    terms = {tuple(int(e) for e in monom): Fraction(int(c.p), int(c.q)) for monom, c in poly.terms()}
    return SparsePoly(ring, terms)


def parse_params(text: str) -> dict[str, Fraction]:
    """'n=1/6,B=0,g2=0,g3=1' -> словарь рациональных чисел."""
    out: dict[str, Fraction] = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise InvalidInput(f"expected name=value, got {item!r}")
        name, value = item.split("=", 1)
        out[name.strip()] = parse_rational(value)
    return out


def parse_vector(text: str) -> list[Fraction]:
    """'1,0,-1/2' -> список рациональных чисел."""
    if not str(text).strip():
        return []
    return [parse_rational(v) for v in str(text).split(",")]


def parse_int_vector(text: str) -> tuple[int, ...]:
    values = parse_vector(text)
    if any(v.denominator != 1 for v in values):
        raise InvalidInput(f"expected integers, got {text!r}")
    return tuple(int(v) for v in values)


def parse_monomial_lines(lines: Sequence[str]) -> list[tuple[int, ...]]:
    """Векторы показателей по одному в строке; пустые строки и '#' пропускаются."""
    out = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(parse_int_vector(line))
    return out
