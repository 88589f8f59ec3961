"""
Route Error Translation
Maps domain errors onto HTTP status codes
"""

import functools
import logging

from fastapi import HTTPException

from app.services.exceptions import GuardExceededError, WorkbenchError

logger = logging.getLogger(__name__)


def translate_errors(f):
    """400 for usage errors, 422 for tripped resource guards"""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except GuardExceededError as e:
            logger.warning(f"Guard tripped in {f.__name__}: {e}")
            raise HTTPException(status_code=422, detail=str(e))
        except (WorkbenchError, ValueError) as e:
            raise HTTPException(status_code=400, detail=str(e))

    return wrapper
