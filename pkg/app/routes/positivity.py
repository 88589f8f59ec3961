"""
Total Positivity API Routes
"""

from fastapi import APIRouter, Query

from app.config import get_settings
from app.routes.errors import translate_errors
from app.services.verification_service import hankel_claim, run_claim, tp_claim

router = APIRouter(tags=["Total Positivity"])

MAX_TP_SIZE = 30
MAX_HANKEL_SIZE = 6


@router.get("/tp/{kind}", response_model=dict)
@translate_errors
def total_positivity(
    kind: str,
    r: int = Query(2, ge=1),
    size: int = Query(10, ge=1, le=MAX_TP_SIZE),
    reversed: bool = False,
):
    """Neville-elimination total-positivity test of the leading block"""
    spec = tp_claim(kind, r, size, reversed, get_settings().minor_search_limit)
    return run_claim(spec).model_dump(mode="json")


@router.get("/hankel/{kind}", response_model=dict)
@translate_errors
def hankel_positivity(
    kind: str,
    r: int = Query(2, ge=1),
    size: int = Query(3, ge=1, le=MAX_HANKEL_SIZE),
    minor_order: int = Query(3, ge=1, le=MAX_HANKEL_SIZE),
):
    """Coefficientwise Hankel total positivity of the row polynomials"""
    spec = hankel_claim(kind, r, size, minor_order, get_settings().minor_search_limit)
    return run_claim(spec).model_dump(mode="json")
