"""GET /api/mf/eisenstein, ab, numerator."""
from typing import Literal

from fastapi import APIRouter, Query

from adelab.api.deps import make_report
from adelab.core.scalars import bernoulli
from adelab.reports import ReportEnvelope
from adelab.services import modular

router = APIRouter(prefix="/api", tags=["mf"])


@router.get("/mf/eisenstein", response_model=ReportEnvelope, response_model_exclude_none=True)
def eisenstein(weight: int = Query(..., ge=2), order: int = Query(10, ge=0, le=500)) -> ReportEnvelope:
    e = modular.eisenstein_q(weight, order)
    result = {"weight": weight, "coefficients": list(e.series.coefficients())}
    if weight >= 4:
        result["decomposition"] = modular.eisenstein_decomposition(weight)
    return make_report("mf eisenstein", {"weight": weight, "order": order}, result)


@router.get("/mf/ab", response_model=ReportEnvelope, response_model_exclude_none=True)
def ab(p: int = Query(..., ge=5), convention: Literal["a", "e"] = "a") -> ReportEnvelope:
    A, B = modular.ab_polynomials(p, convention)
    return make_report("mf ab", {"p": p, "convention": convention}, {"p": p, "convention": convention, "A": A, "B": B})


@router.get("/mf/numerator", response_model=ReportEnvelope, response_model_exclude_none=True)
def numerator(weight: int = Query(..., ge=4)) -> ReportEnvelope:
    multiplier = modular.numerator_multiplier(weight)
    expected = abs((bernoulli(weight) / weight).numerator)
    result = {"weight": weight, "multiplier": multiplier, "bernoulli_numerator": expected}
    return make_report("mf numerator", {"weight": weight}, result)
