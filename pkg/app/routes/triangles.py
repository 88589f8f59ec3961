"""
Triangle API Routes
"""

from fastapi import APIRouter, Query

from app.routes.errors import translate_errors
from app.services.triangle_engine import TriangleService

router = APIRouter(tags=["Triangles"])

triangle_service = TriangleService()

MAX_ROWS = 200


@router.get("/triangles", response_model=list)
def list_kinds():
    """Triangle kinds accepted by every endpoint"""
    return TriangleService.KINDS


@router.get("/triangles/{kind}", response_model=dict)
@translate_errors
def get_triangle(
    kind: str,
    r: int = Query(2, ge=1),
    n_max: int = Query(8, ge=0, le=MAX_ROWS),
    reversed: bool = False,
):
    """Rows 0..n_max of a triangle"""
    T = triangle_service.triangle_for(kind, r, n_max, reversed=reversed)
    return {**T.to_json(), "label": T.label, "reversed": reversed}
