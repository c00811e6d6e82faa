"""GET /api/hodge/codim, table; POST /api/hodge/series."""
from typing import List, Optional

from fastapi import APIRouter, Query
from pydantic import BaseModel, Field

from adelab.api.deps import make_report
from adelab.core.errors import InvalidInput
from adelab.core.parse import parse_int_vector
from adelab.reports import ReportEnvelope, codim_rows_payload, period_series_payload
from adelab.services import hodge_periods
from adelab.services.builders import build_index_set

router = APIRouter(prefix="/api", tags=["hodge"])


class PeriodSeriesRequest(BaseModel):
    n: Optional[int] = None
    d: Optional[int] = None
    beta: List[int]
    monomials: List[List[int]] = Field(default_factory=list)
    trunc: int = Field(default=3, ge=0, le=12)


@router.get("/hodge/codim", response_model=ReportEnvelope, response_model_exclude_none=True)
def codim(
    n: int = Query(..., ge=0),
    d: int = Query(..., ge=2),
    m: Optional[int] = None,
    seq: Optional[str] = None,
) -> ReportEnvelope:
    """codim_VZ(n, d, m) или codim_C(n, d, seq), seq = '1,1,2,2'."""
    if seq:
        value = hodge_periods.codim_C(n, d, parse_int_vector(seq))
    elif m is not None:
        value = hodge_periods.codim_VZ(n, d, m)
    else:
        raise InvalidInput("give m or seq")
    return make_report("hodge codim", {"n": n, "d": d, "m": m, "seq": seq}, {"n": n, "d": d, "codim": value})


@router.get("/hodge/table", response_model=ReportEnvelope, response_model_exclude_none=True)
def table() -> ReportEnvelope:
    return make_report("hodge table", {}, codim_rows_payload(hodge_periods.table_repro()))


@router.post("/hodge/series", response_model=ReportEnvelope, response_model_exclude_none=True)
def series(body: PeriodSeriesRequest) -> ReportEnvelope:
    index_set = build_index_set(body.monomials, body.n, body.d)
    result = hodge_periods.period_series(index_set.n, index_set.d, body.beta, index_set, body.trunc)
    payload = period_series_payload(result)
    payload["terms_check"] = hodge_periods.check_period_terms(result)
    return make_report("hodge series", body, payload)
