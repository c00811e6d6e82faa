"""Отчёты: конфигурация запуска, конверт результата и сериализация в json/csv/text."""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from adelab import __version__
from adelab.core.poly import SparsePoly
from adelab.core.scalars import format_rational
from adelab.core.series import TruncSeries

OutputFormat = Literal["json", "csv", "text"]


class ScanConfig(BaseModel):
    command: str
    params: dict[str, str] = Field(default_factory=dict)
    pmax: Optional[int] = None
    k: Optional[int] = None
    trunc: Optional[int] = None
    workers: int = Field(default=1, ge=1)
    output: OutputFormat = "json"

    @field_validator("pmax")
    @classmethod
    def _pmax_at_least_two(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 2:
            raise ValueError("pmax must be at least 2")
        return v


class ReportEnvelope(BaseModel):
    tool: str = "adelab"
    version: str = __version__
    command: str
    params: dict[str, Any] = Field(default_factory=dict)
    result: Any = None
    wall_ms: Optional[float] = None

    @classmethod
    def from_config(cls, config: ScanConfig, result: Any, wall_ms: Optional[float] = None) -> ReportEnvelope:
        # число воркеров и формат не входят в эхо: вывод не зависит от них
        params = dict(config.params)
        for key in ("pmax", "k", "trunc"):
            value = getattr(config, key)
            if value is not None:
                params[key] = value
        return cls(command=config.command, params=params, result=to_jsonable(result), wall_ms=wall_ms)


def to_jsonable(value: Any) -> Any:
    """Рациональные числа -> 'num/den', многочлены и ряды -> текст в фиксированном порядке мономов."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        return "inf" if math.isinf(value) else value
    if isinstance(value, (SparsePoly, TruncSeries)):
        return value.to_text()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def emit_json(envelope: ReportEnvelope) -> str:
    data = envelope.model_dump(exclude_none=True)
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


CSV_HEADER = ("p", "status", "m", "k")


def emit_csv(envelope: ReportEnvelope) -> str:
    """Построчно по простым, если в результате есть records; иначе пары ключ/значение."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    result = envelope.result
    if isinstance(result, dict) and isinstance(result.get("records"), list):
        writer.writerow(CSV_HEADER)
        for row in result["records"]:
            writer.writerow([row.get(col, "") for col in CSV_HEADER])
    else:
        writer.writerow(("key", "value"))
        for key, value in _flatten(result):
            writer.writerow((key, value))
    return buf.getvalue()


def _flatten(value: Any, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(value, dict):
        out = []
        for k in sorted(value):
            out.extend(_flatten(value[k], f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            return [(prefix, " ".join(str(v) for v in value))]
        out = []
        for i, v in enumerate(value):
            out.extend(_flatten(v, f"{prefix}[{i}]"))
        return out
    return [(prefix or "value", "" if value is None else str(value).lower() if isinstance(value, bool) else str(value))]


def emit_text(envelope: ReportEnvelope) -> str:
    lines = [f"{envelope.command}"]
    for key, value in sorted(envelope.params.items()):
        lines.append(f"  {key} = {value}")
    result = envelope.result
    if isinstance(result, dict) and isinstance(result.get("records"), list):
        cols = [c for c in CSV_HEADER if any(c in r for r in result["records"])]
        extra = sorted({k for r in result["records"] for k in r} - set(cols))
        cols += extra
        lines.append("  ".join(f"{c:>12}" for c in cols))
        for row in result["records"]:
            lines.append("  ".join(f"{str(row.get(c, '')):>12}" for c in cols))
        rest = {k: v for k, v in result.items() if k != "records"}
        for key, value in _flatten(rest):
            lines.append(f"{key}: {value}")
    else:
        for key, value in _flatten(result):
            lines.append(f"{key}: {value}")
    if envelope.wall_ms is not None:
        lines.append(f"wall_ms: {envelope.wall_ms:.1f}")
    return "\n".join(lines) + "\n"


def emit(envelope: ReportEnvelope, fmt: OutputFormat) -> str:
    if fmt == "json":
        return emit_json(envelope)
    if fmt == "csv":
        return emit_csv(envelope)
    return emit_text(envelope)


# --- payload по типам результатов (общие для CLI и HTTP) ---


def exponent_key(exp: tuple[int, ...]) -> str:
    return ",".join(str(e) for e in exp)


def prime_record_payload(record) -> dict[str, Any]:
    return {"p": record.p, "status": record.status.value, "m": record.m, "k": record.k}


def prime_scan_payload(report) -> dict[str, Any]:
    """PrimeScanReport: списки простых по классам и построчные записи в порядке возрастания p."""
    return {
        "label": report.label,
        "pmax": report.pmax,
        "k": report.k,
        "truncated": report.truncated,
        "ring": report.ring(),
        "good": report.good(),
        "bad": report.bad(),
        "records": [prime_record_payload(r) for r in report.records],
    }


def collinearity_payload(reports) -> dict[str, Any]:
    records = []
    for r in reports:
        row: dict[str, Any] = {"p": r.p, "status": r.status.value}
        if r.witness is not None:
            row["witness"] = r.witness.describe()
        records.append(row)
    return {"records": records}


def series_payload(series) -> dict[str, Any]:
    """Ряд: текст и коэффициенты по ключам 'e1,e2,...'."""
    return {
        "order": series.order,
        "text": series.to_text(),
        "coefficients": {exponent_key(e): c for e, c in series.sorted_terms()},
    }


def period_series_payload(series) -> dict[str, Any]:
    return {
        "k": series.k,
        "beta": list(series.beta),
        "trunc": series.trunc,
        "terms": len(series.coefficients),
        "coefficients": {exponent_key(a): c for a, c in sorted(series.coefficients.items())},
    }


def algebraic_payload(cert) -> dict[str, Any]:
    return {
        "delta": cert.delta,
        "order": cert.order,
        "certified": cert.certified,
        "series": cert.series().to_text(),
        "coefficients": {exponent_key(e): c for e, c in sorted(cert.coefficients.items())},
        "exponents": {exponent_key(e): v for e, v in sorted(cert.exponents.items())},
    }


def binom_payload(report) -> dict[str, Any]:
    return {
        "a": report.a,
        "values": list(report.values),
        "denominators": list(report.denominators),
        "prime_support": sorted(report.prime_support),
        "within_denominator_of_a": report.within_denominator_of_a,
    }


def codim_rows_payload(rows) -> dict[str, Any]:
    return {
        "rows": [
            {"n": r.n, "dimT": r.dim_t, "min": r.minimal, "max": r.maximal, "L": r.linear, "M": r.mixed}
            for r in rows
        ]
    }
