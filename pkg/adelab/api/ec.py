"""GET /api/ec/hw, count, cartier: кривая y^2 = 4x^3 - t2 x - t3 над F_p."""
from typing import Optional

from fastapi import APIRouter, Query

from adelab.api.deps import make_report
from adelab.reports import ReportEnvelope
from adelab.services import elliptic_fp

router = APIRouter(prefix="/api", tags=["ec"])


@router.get("/ec/hw", response_model=ReportEnvelope, response_model_exclude_none=True)
def hasse_witt(p: int = Query(..., ge=5), t2: Optional[int] = None, t3: Optional[int] = None) -> ReportEnvelope:
    """Хассе-Витт двумя способами; без t2, t3 получается многочлен от (t2, t3)."""
    curve = elliptic_fp.WeierstrassCurve(p, t2, t3)
    via_power = elliptic_fp.half_power_coeffs(curve).hasse_witt
    via_recursion = elliptic_fp.hasse_witt_recursion(p, curve.cubic())
    result = {"p": p, "half_power": via_power, "recursion": via_recursion, "agree": via_power == via_recursion}
    return make_report("ec hw", {"p": p, "t2": t2, "t3": t3}, result)


@router.get("/ec/count", response_model=ReportEnvelope, response_model_exclude_none=True)
def count(p: int = Query(..., ge=5), t2: int = Query(...), t3: int = Query(...)) -> ReportEnvelope:
    curve = elliptic_fp.WeierstrassCurve(p, t2, t3)
    points = elliptic_fp.point_count(curve)
    hw = int(elliptic_fp.half_power_coeffs(curve).hasse_witt)
    result = {"p": p, "points": points, "trace": p + 1 - points, "hasse_witt": hw}
    return make_report("ec count", {"p": p, "t2": t2, "t3": t3}, result)


@router.get("/ec/cartier", response_model=ReportEnvelope, response_model_exclude_none=True)
def cartier(p: int = Query(..., ge=5), t2: int = Query(...), t3: int = Query(...)) -> ReportEnvelope:
    matrix = elliptic_fp.cartier_matrix(elliptic_fp.WeierstrassCurve(p, t2, t3))
    return make_report("ec cartier", {"p": p, "t2": t2, "t3": t3}, {"p": p, "matrix": matrix})
