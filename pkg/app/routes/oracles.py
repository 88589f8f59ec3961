"""
Combinatorial Oracle API Routes
"""

from fastapi import APIRouter, Query

from app.models.combinatorics import PhyloFlavor
from app.routes.errors import translate_errors
from app.services.combinatorial_oracles import INTERPRETATIONS, check_interpretation

router = APIRouter(tags=["Oracles"])


@router.get("/oracle", response_model=list)
def list_interpretations():
    return INTERPRETATIONS


@router.get("/oracle/{name}", response_model=dict)
@translate_errors
def run_oracle(
    name: str,
    n_max: int = Query(4, ge=0, le=5),
    r: int = Query(2, ge=1),
    flavor: PhyloFlavor = PhyloFlavor.CYCLIC,
):
    """Brute-force counts next to the triangle rows they should reproduce"""
    check = check_interpretation(name, n_max, r, flavor)
    return {**check.model_dump(mode="json"), "passed": check.passed}
