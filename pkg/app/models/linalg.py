"""
Linear Algebra Models
Exact integer / polynomial matrices and total-positivity reports
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field, model_validator

from app.models.polynomial import IntPolynomial
from app.services.exceptions import SizeMismatchError


def _check_rectangular(rows: Sequence[Sequence]) -> None:
    if rows and any(len(row) != len(rows[0]) for row in rows):
        raise SizeMismatchError("Matrix rows have different lengths")


@dataclass(frozen=True)
class ExactMatrix:
    """m×n matrix of arbitrary-precision integers"""

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        _check_rectangular(self.entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ExactMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, size: int) -> "ExactMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.entries))) if self.entries else self

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> List[List[int]]:
        return [[self.entries[i][j] for j in cols] for i in rows]

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class PolyMatrix:
    """m×n matrix with IntPolynomial entries"""

    entries: Tuple[Tuple[IntPolynomial, ...], ...]

    def __post_init__(self):
        _check_rectangular(self.entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[IntPolynomial]]) -> "PolyMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    def __getitem__(self, index: Tuple[int, int]) -> IntPolynomial:
        i, j = index
        return self.entries[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> List[List[IntPolynomial]]:
        return [[self.entries[i][j] for j in cols] for i in rows]

    def swap_rows(self, a: int, b: int) -> "PolyMatrix":
        rows = list(self.entries)
        rows[a], rows[b] = rows[b], rows[a]
        return PolyMatrix(tuple(rows))

    def evaluate(self, x: int) -> ExactMatrix:
        return ExactMatrix.from_rows([[p.evaluate(x) for p in row] for row in self.entries])


class TPVerdict(str, Enum):
    TOTALLY_POSITIVE = "TotallyPositive"
    NOT_TP = "NotTP"


class TPMethod(str, Enum):
    NEVILLE = "Neville"
    MINORS = "Minors"


class MinorWitness(BaseModel):
    """A minor given by sorted row and column index sets of the original matrix"""
    rows: List[int]
    cols: List[int]
    # integer minor, or polynomial minor as coefficients constant term first
    value: Union[int, List[int]]

    @property
    def order(self) -> int:
        return len(self.rows)

    @property
    def is_negative(self) -> bool:
        if isinstance(self.value, list):
            return any(c < 0 for c in self.value)
        return self.value < 0


class TPReport(BaseModel):
    verdict: TPVerdict
    method: TPMethod
    witness: Optional[MinorWitness] = None
    max_order_checked: int = Field(ge=0)
    caps: Dict[str, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_witness(self) -> "TPReport":
        if self.verdict == TPVerdict.NOT_TP:
            if self.witness is None:
                raise ValueError("NotTP report requires a witness")
            if not self.witness.is_negative:
                raise ValueError("Witness minor is not negative")
        return self

    @property
    def is_tp(self) -> bool:
        return self.verdict == TPVerdict.TOTALLY_POSITIVE
