"""Построение систем и полей из текстовых параметров (общие для CLI и HTTP)."""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from adelab.core.errors import InvalidInput
from adelab.core.parse import parse_monomial_lines, parse_params, parse_poly
from adelab.core.poly import PolyRing
from adelab.services import hodge_periods, linear_ode, vector_fields

ODE_KINDS = ("lame", "hyp", "quadratic", "scalar")


def _require(params: dict[str, Fraction], *names: str) -> list[Fraction]:
    missing = [n for n in names if n not in params]
    if missing:
        raise InvalidInput(f"missing parameters: {', '.join(missing)}")
    return [params[n] for n in names]


def build_ode(kind: str, params_text: str = "", coeffs_text: Optional[str] = None) -> linear_ode.OdeSystem:
    """lame (n,B,g2,g3), hyp (a,b,c), quadratic (d) или scalar ('c0;c1;...;cr' от z)."""
    params = parse_params(params_text or "")
    if kind == "lame":
        return linear_ode.lame(*_require(params, "n", "B", "g2", "g3"))
    if kind == "hyp":
        return linear_ode.hypergeometric(*_require(params, "a", "b", "c"))
    if kind == "quadratic":
        (d,) = _require(params, "d")
        if d.denominator != 1:
            raise InvalidInput("d must be an integer")
        return linear_ode.rank_one_quadratic(int(d))
    if kind == "scalar":
        if not coeffs_text:
            raise InvalidInput("coefficients are required for a scalar equation")
        return linear_ode.from_scalar(parse_poly_list(coeffs_text), label="scalar")
    raise InvalidInput(f"unknown equation kind {kind!r}")


def parse_poly_list(text: str, ring: PolyRing = linear_ode.Z) -> list:
    return [parse_poly(c, ring) for c in text.split(";")]


def build_field(
    catalog_name: Optional[str],
    params_text: str = "",
    components: Optional[str] = None,
    variables: Optional[str] = None,
) -> vector_fields.Derivation:
    """Поле из каталога или по компонентам 'v1;v2;...' с переменными 'x,y,...'."""
    if catalog_name:
        return vector_fields.catalog(catalog_name, parse_params(params_text or ""))
    if not components or not variables:
        raise InvalidInput("give a catalog name or both components and variables")
    ring = PolyRing(tuple(v.strip() for v in variables.split(",")))
    return vector_fields.Derivation(ring, tuple(parse_poly_list(components, ring)), "custom")


def read_monomials(path: str) -> list[tuple[int, ...]]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InvalidInput(f"cannot read monomial file {path}: {exc.strerror}") from exc
    return parse_monomial_lines(lines)


def build_index_set(
    monomials: Sequence[Sequence[int]], n: Optional[int] = None, d: Optional[int] = None
) -> hodge_periods.DeformationIndexSet:
    """(n, d) берутся из первого монома, если не заданы."""
    if n is None or d is None:
        if not monomials:
            raise InvalidInput("n and d are required without deformation monomials")
        n, d = len(monomials[0]) - 2, sum(monomials[0])
    return hodge_periods.DeformationIndexSet(n, d, tuple(tuple(m) for m in monomials))
