"""
Triangle Models
Lower-triangular integer arrays and the coefficient records of their recurrences
"""

from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


class TriangleKind(str, Enum):
    """Families of triangular arrays"""
    STIRLING_CYCLE = "StirlingCycle"
    STIRLING_SUBSET = "StirlingSubset"
    ASSOC_CYCLE = "AssocCycle"
    ASSOC_SUBSET = "AssocSubset"
    EULERIAN = "Eulerian"
    QUASI_EULERIAN_CYCLE = "QuasiEulerianCycle"
    QUASI_EULERIAN_SUBSET = "QuasiEulerianSubset"
    ORDERED_PHYLO = "OrderedPhylo"
    GENERIC = "Generic"


NONNEGATIVE_KINDS = {
    TriangleKind.STIRLING_CYCLE,
    TriangleKind.STIRLING_SUBSET,
    TriangleKind.EULERIAN,
    TriangleKind.ORDERED_PHYLO,
}


def stirling_diagonal(cycle: bool, r: int, n: int) -> int:
    """(rn)!/(r^n n!) for cycle numbers, (rn)!/((r!)^n n!) for subset numbers"""
    base = r if cycle else factorial(r)
    return factorial(r * n) // (base ** n * factorial(n))


class Triangle(BaseModel):
    """
    Jagged lower-triangular array: row n holds T(n,0..n).

    Entries beyond the diagonal are implicit zeros and are only materialized
    by `leading()`.
    """
    model_config = ConfigDict(frozen=True)

    kind: TriangleKind = TriangleKind.GENERIC
    order: int = Field(default=1, ge=1)
    rows: List[List[int]]
    is_reversed: bool = False
    label: Optional[str] = None

    @model_validator(mode="after")
    def check_shape(self) -> "Triangle":
        if not self.rows:
            raise ValueError("Triangle must have at least row 0")
        for n, row in enumerate(self.rows):
            if len(row) != n + 1:
                raise ValueError(f"Row {n} has {len(row)} entries, expected {n + 1}")
        if self.rows[0][0] != 1:
            raise ValueError(f"T(0,0) must be 1, got {self.rows[0][0]}")

        if self.kind in NONNEGATIVE_KINDS:
            for n, row in enumerate(self.rows):
                if any(v < 0 for v in row):
                    raise ValueError(f"Negative entry in row {n} of a {self.kind.value} triangle")

        if self.kind in (TriangleKind.STIRLING_CYCLE, TriangleKind.STIRLING_SUBSET) and not self.is_reversed:
            cycle = self.kind == TriangleKind.STIRLING_CYCLE
            for n, row in enumerate(self.rows):
                if n >= 1 and row[0] != 0:
                    raise ValueError(f"T({n},0) must vanish, got {row[0]}")
                expected = stirling_diagonal(cycle, self.order, n)
                if row[n] != expected:
                    raise ValueError(f"Diagonal T({n},{n}) = {row[n]}, expected {expected}")
        return self

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def entry(self, n: int, k: int) -> int:
        if 0 <= n < len(self.rows) and 0 <= k <= n:
            return self.rows[n][k]
        return 0

    def row(self, n: int) -> List[int]:
        if not 0 <= n < len(self.rows):
            raise ValueError(f"Row {n} out of range 0..{self.n_max}")
        return list(self.rows[n])

    def row_sum(self, n: int) -> int:
        return sum(self.row(n))

    def column(self, k: int) -> List[int]:
        return [self.entry(n, k) for n in range(len(self.rows))]

    def leading(self, size: int) -> List[List[int]]:
        """Square top-left size×size block with the implicit zeros filled in"""
        if size > len(self.rows):
            raise ValueError(f"Requested {size}x{size} block of a triangle with {len(self.rows)} rows")
        return [[self.entry(i, j) for j in range(size)] for i in range(size)]

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "r": self.order, "rows": [list(row) for row in self.rows]}


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise ValueError(f"Cannot interpret {value!r} as an exact rational")


class GkpCoefficients(BaseModel):
    """
    A(n,k) = (alpha*n + beta*k + gamma) A(n-1,k) + (alpha_p*n + beta_p*k + gamma_p) A(n-1,k-1)
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    alpha_p: Fraction
    beta_p: Fraction
    gamma_p: Fraction

    @field_validator("alpha", "beta", "gamma", "alpha_p", "beta_p", "gamma_p", mode="before")
    @classmethod
    def coerce_rational(cls, v):
        return _to_fraction(v)

    @field_serializer("alpha", "beta", "gamma", "alpha_p", "beta_p", "gamma_p")
    def serialize_rational(self, v: Fraction) -> str:
        return str(v)

    @classmethod
    def of(cls, alpha, beta, gamma, alpha_p, beta_p, gamma_p) -> "GkpCoefficients":
        return cls(alpha=alpha, beta=beta, gamma=gamma, alpha_p=alpha_p, beta_p=beta_p, gamma_p=gamma_p)

    def as_tuple(self) -> tuple:
        return (self.alpha, self.beta, self.gamma, self.alpha_p, self.beta_p, self.gamma_p)

    def same_row(self, n: int, k: int) -> Fraction:
        return self.alpha * n + self.beta * k + self.gamma

    def previous_column(self, n: int, k: int) -> Fraction:
        return self.alpha_p * n + self.beta_p * k + self.gamma_p


class ThreeTermRecurrence(BaseModel):
    """
    C(n,k) = linear.same_row(n,k) C(n-1,k) + linear.previous_column(n,k) C(n-1,k-1)
             + lam (k+1) C(n-1,k+1)
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    linear: GkpCoefficients
    lam: Fraction
    xi: Fraction

    @field_validator("lam", "xi", mode="before")
    @classmethod
    def coerce_rational(cls, v):
        return _to_fraction(v)

    @field_serializer("lam", "xi")
    def serialize_rational(self, v: Fraction) -> str:
        return str(v)

    @property
    def is_two_term(self) -> bool:
        return self.lam == 0
