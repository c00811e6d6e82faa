"""Пересчёт опубликованных таблиц простых и коразмерностей и сверка с эталонными файлами."""
from __future__ import annotations

import difflib
import logging
from fractions import Fraction
from pathlib import Path
from typing import Callable

from adelab.core.errors import UnknownTable
from adelab.services import elliptic_fp, hodge_periods, linear_ode, vector_fields
from adelab.services.scan import primes_upto

logger = logging.getLogger(__name__)

# (n, B, g2, g3) алгебраических уравнений Ламе над Q
LAME_FINITE_MONODROMY = (
    ("1/4", "0", "0", "1"),
    ("3/4", "3/8", "-168", "622"),
    ("1/6", "0", "1", "0"),
    ("5/6", "0", "1", "0"),
    ("1/6", "1/6", "60", "90"),
    ("1/10", "0", "0", "1"),
    ("3/10", "3/100", "3", "5/4"),
    ("7/10", "0", "0", "1"),
    ("7/4", "0", "0", "1"),
)


def _lame_line(params: tuple[str, ...], pmax: int, workers: int) -> str:
    system = linear_ode.lame(*(Fraction(x) for x in params))
    report = linear_ode.bad_prime_scan(system, pmax, workers=workers)
    return f"{','.join(params)}: {' '.join(str(p) for p in report.bad())}".rstrip()


def _lame_table(workers: int) -> list[str]:
    return [_lame_line(params, 100, workers) for params in LAME_FINITE_MONODROMY]


def _lame_single(n: str, pmax: int) -> Callable[[int], list[str]]:
    return lambda workers: [_lame_line((n, "0", "0", "1"), pmax, workers)]


def _hyp_half(workers: int) -> list[str]:
    system = linear_ode.hypergeometric(Fraction(1, 2), Fraction(1, 2), Fraction(1))
    report = linear_ode.bad_prime_scan(system, 100, workers=workers)
    return [
        f"ring: {' '.join(str(p) for p in report.ring())}",
        f"bad: {' '.join(str(p) for p in report.bad())}",
        f"good: {' '.join(str(p) for p in report.good())}".rstrip(),
    ]


def _pclosed(name: str, pmax: int) -> Callable[[int], list[str]]:
    def run(workers: int) -> list[str]:
        field = vector_fields.catalog(name)
        return [f"{r.p}: {r.status.value}" for r in vector_fields.pclosed_scan(field, pmax, workers=workers)]

    return run


def _ab_congruence(workers: int) -> list[str]:
    return [f"{p}: {str(elliptic_fp.ab_congruence_check(p)).lower()}" for p in primes_upto(100, 5)]


def _powersum(workers: int) -> list[str]:
    curve = elliptic_fp.WeierstrassCurve(11, 1, 1)
    return [f"j={j}: {str(elliptic_fp.power_sum_check(curve, j)).lower()}" for j in range(1, 6)]


def _cubic_table(workers: int) -> list[str]:
    lines = ["n dimT min max L M"]
    for row in hodge_periods.table_repro():
        lines.append(f"{row.n} {row.dim_t} {row.minimal} {row.maximal} {row.linear} {row.mixed}")
    lines.append(f"codim_VZ(6,3,0) {hodge_periods.codim_VZ(6, 3, 0)}")
    lines.append(f"codim_VZ(8,3,1) {hodge_periods.codim_VZ(8, 3, 1)}")
    for k in range(3, 13):
        closed = hodge_periods.cubic_closed_form(k)
        lines.append(f"closed({k}) {closed} {hodge_periods.codim_VZ(2 * k, 3, k - 3)}")
    return lines


def _mpk_grid(workers: int) -> list[str]:
    return [f"{p} {linear_ode.mpk(p, 1)} {linear_ode.mpk(p, 2)}" for p in primes_upto(50)]


REPRO_TABLES: dict[str, Callable[[int], list[str]]] = {
    "lame-table4-badprimes": _lame_table,
    "lame-12-89": _lame_single("12/89", 150),
    "lame-5-87": _lame_single("5/87", 150),
    "lame-4-65": _lame_single("4/65", 150),
    "hyp-half": _hyp_half,
    "ramanujan-pclosed": _pclosed("ramanujan-e", 50),
    "modular4-pclosed": _pclosed("modular4", 50),
    "limitcycle-p3": _pclosed("limitcycle", 100),
    "ab-congruence-100": _ab_congruence,
    "powersum-11": _powersum,
    "cubic-codim-table": _cubic_table,
    "mpk-grid": _mpk_grid,
}


def read_golden(path: Path) -> list[str]:
    """Строки эталона без комментариев '#' и пустых строк."""
    lines = path.read_text(encoding="utf-8").splitlines()
    return [line.rstrip() for line in lines if line.strip() and not line.lstrip().startswith("#")]


def recompute(table_id: str, workers: int = 1) -> list[str]:
    try:
        producer = REPRO_TABLES[table_id]
    except KeyError:
        raise UnknownTable(f"unknown table {table_id!r}; known: {', '.join(sorted(REPRO_TABLES))}") from None
    logger.info("recomputing %s", table_id)
    return producer(workers)


def repro(table_id: str, golden_dir: Path, workers: int = 1) -> tuple[bool, str]:
    """Пересчитать таблицу и сравнить с golden_dir/<id>.txt; второй элемент: unified diff (пустой при совпадении)."""
    if table_id not in REPRO_TABLES:
        raise UnknownTable(f"unknown table {table_id!r}; known: {', '.join(sorted(REPRO_TABLES))}")
    path = Path(golden_dir) / f"{table_id}.txt"
    if not path.is_file():
        raise UnknownTable(f"golden file {path} is missing")
    expected = read_golden(path)
    actual = recompute(table_id, workers)
    if expected == actual:
        return True, ""
    diff = difflib.unified_diff(expected, actual, fromfile=str(path), tofile=f"{table_id} (recomputed)", lineterm="")
    return False, "\n".join(diff) + "\n"


def known_tables() -> list[str]:
    return sorted(REPRO_TABLES)
