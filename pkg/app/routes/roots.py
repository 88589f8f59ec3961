"""
Root Analysis API Routes
"""

from typing import Optional

from fastapi import APIRouter, Query

from app.config import get_settings
from app.routes.errors import translate_errors
from app.services.poly_analysis import certify_roots
from app.services.verification_service import roots_claims, run_claim

router = APIRouter(tags=["Roots"])

MAX_N = 40


@router.get("/roots/{kind}", response_model=list)
@translate_errors
def root_claims(
    kind: str,
    r: int = Query(2, ge=1),
    n_max: int = Query(10, ge=1, le=MAX_N),
    precision_bits: Optional[int] = Query(None, ge=64),
):
    """Real-rootedness certificates for r ≤ 2, nonreal-zero evidence above"""
    bits = precision_bits or get_settings().precision_bits
    return [run_claim(spec).model_dump(mode="json") for spec in roots_claims(kind, r, n_max, bits)]


@router.get("/roots/{family}/certificates", response_model=list)
@translate_errors
def root_certificates(family: str, n_max: int = Query(10, ge=1, le=MAX_N)):
    """Exact certificates for cycle2, subset2 or orderedPhylo"""
    return [cert.model_dump(mode="json") for cert in certify_roots(family, n_max)]
