"""POST /api/pcurv/test, scan, density: p-кривизна линейных систем."""
from typing import Annotated, Literal, Optional

from fastapi import APIRouter, Depends
from pydantic import BaseModel, Field

from adelab.api.deps import get_settings, make_report, workers
from adelab.config import Settings
from adelab.reports import ReportEnvelope, prime_scan_payload
from adelab.services import linear_ode
from adelab.services.builders import build_ode

router = APIRouter(prefix="/api", tags=["pcurv"])


class OdeRequest(BaseModel):
    ode: Literal["lame", "hyp", "quadratic", "scalar"]
    params: str = ""  # "n=1/6,B=0,g2=0,g3=1"
    coeffs: Optional[str] = None  # только для scalar: "c0;c1;c2"


class CurvatureTestRequest(OdeRequest):
    p: int = Field(ge=2)
    k: int = Field(default=1, ge=1)


class ScanRequest(OdeRequest):
    pmax: int = Field(ge=2)
    k: int = Field(default=1, ge=1)
    maxbad: Optional[int] = Field(default=None, ge=0)


class DensityRequest(OdeRequest):
    pmax: int = Field(ge=2)


@router.post("/pcurv/test", response_model=ReportEnvelope, response_model_exclude_none=True)
def curvature_test(body: CurvatureTestRequest) -> ReportEnvelope:
    """m_{p,k}-кривизна в одном простом: RingPrime, Zero или NonZero."""
    system = build_ode(body.ode, body.params, body.coeffs)
    status = linear_ode.curvature_test(system, body.p, body.k)
    result = {"label": system.label, "p": body.p, "k": body.k, "m": linear_ode.mpk(body.p, body.k), "status": status.value}
    return make_report("pcurv test", body, result)


@router.post("/pcurv/scan", response_model=ReportEnvelope, response_model_exclude_none=True)
def scan(body: ScanRequest, settings: Annotated[Settings, Depends(get_settings)]) -> ReportEnvelope:
    system = build_ode(body.ode, body.params, body.coeffs)
    report = linear_ode.bad_prime_scan(
        system, body.pmax, body.k, maxbad=body.maxbad, workers=workers(settings), chunksize=settings.scan_chunksize
    )
    return make_report("pcurv scan", body, prime_scan_payload(report))


@router.post("/pcurv/density", response_model=ReportEnvelope, response_model_exclude_none=True)
def density(body: DensityRequest, settings: Annotated[Settings, Depends(get_settings)]) -> ReportEnvelope:
    system = build_ode(body.ode, body.params, body.coeffs)
    report = linear_ode.bad_prime_scan(system, body.pmax, 1, workers=workers(settings), chunksize=settings.scan_chunksize)
    result = {
        "label": system.label,
        "density": linear_ode.density_of(report),
        "good": len(report.good()),
        "bad": len(report.bad()),
        "ring": report.ring(),
    }
    return make_report("pcurv density", body, result)
