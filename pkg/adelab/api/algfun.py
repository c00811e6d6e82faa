"""POST /api/algfun/taylor, GET /api/algfun/binomring."""
from typing import List

from fastapi import APIRouter, Query
from pydantic import BaseModel, Field

from adelab.api.deps import make_report
from adelab.core.parse import parse_poly
from adelab.core.poly import PolyRing
from adelab.core.scalars import parse_rational
from adelab.reports import ReportEnvelope, algebraic_payload, binom_payload
from adelab.services import algfun

router = APIRouter(prefix="/api", tags=["algfun"])


class TaylorRequest(BaseModel):
    poly: str  # "y^2 - 1 - z"
    vars: str = "z,y"  # последняя переменная y
    z0: List[int] = Field(default_factory=lambda: [0])
    y0: int
    order: int = Field(default=8, ge=0, le=40)


@router.post("/algfun/taylor", response_model=ReportEnvelope, response_model_exclude_none=True)
def taylor(body: TaylorRequest) -> ReportEnvelope:
    names = tuple(v.strip() for v in body.vars.split(","))
    poly = parse_poly(body.poly, PolyRing(names))
    if len(names) == 2 and len(body.z0) == 1:
        cert = algfun.taylor_algebraic(poly, body.z0[0], body.y0, body.order)
    else:
        cert = algfun.taylor_algebraic_multi(poly, body.z0, body.y0, body.order)
    return make_report("algfun taylor", body, algebraic_payload(cert))


@router.get("/algfun/binomring", response_model=ReportEnvelope, response_model_exclude_none=True)
def binomring(a: str = Query(...), kmax: int = Query(10, ge=0, le=500)) -> ReportEnvelope:
    report = algfun.binom_ring_denominators(parse_rational(a), kmax)
    return make_report("algfun binomring", {"a": a, "kmax": kmax}, binom_payload(report))
