"""POST /api/vf/pclosed, bianchini: коллинеарность v^p и v."""
from typing import Annotated, Optional

from fastapi import APIRouter, Depends
from pydantic import BaseModel, Field

from adelab.api.deps import get_settings, make_report, workers
from adelab.config import Settings
from adelab.core.errors import InvalidInput
from adelab.core.parse import parse_vector
from adelab.reports import ReportEnvelope, collinearity_payload
from adelab.services import vector_fields
from adelab.services.builders import build_field

router = APIRouter(prefix="/api", tags=["vf"])


class PClosedRequest(BaseModel):
    catalog: Optional[str] = None
    params: str = ""
    field: Optional[str] = None  # "v1;v2"
    vars: Optional[str] = None  # "x,y"
    p: Optional[int] = Field(default=None, ge=2)
    pmax: Optional[int] = Field(default=None, ge=2)
    point: Optional[str] = None


class BianchiniRequest(BaseModel):
    p: int = Field(ge=5)


@router.post("/vf/pclosed", response_model=ReportEnvelope, response_model_exclude_none=True)
def pclosed(body: PClosedRequest, settings: Annotated[Settings, Depends(get_settings)]) -> ReportEnvelope:
    """Один простой (p, опционально в точке) или скан до pmax."""
    v = build_field(body.catalog, body.params, body.field, body.vars)
    if body.p is not None:
        point = parse_vector(body.point) if body.point else None
        reports = [vector_fields.is_pclosed(v, body.p, point)]
    elif body.pmax is not None:
        reports = vector_fields.pclosed_scan(v, body.pmax, workers=workers(settings), chunksize=settings.scan_chunksize)
    else:
        raise InvalidInput("give p or pmax")
    result = collinearity_payload(reports)
    result["label"] = v.label
    result["ring"] = sorted(v.ring_primes())
    return make_report("vf pclosed", body, result)


@router.post("/vf/bianchini", response_model=ReportEnvelope, response_model_exclude_none=True)
def bianchini(body: BianchiniRequest) -> ReportEnvelope:
    return make_report("vf bianchini", body, {"p": body.p, "holds": vector_fields.bianchini_check(body.p)})
