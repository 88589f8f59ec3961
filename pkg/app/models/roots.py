"""
Root Analysis Models
Exact real-rootedness certificates, log-concavity reports and numeric root clouds
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


class Sign(str, Enum):
    NEGATIVE = "negative"
    ZERO = "zero"
    POSITIVE = "positive"

    @classmethod
    def of(cls, value) -> "Sign":
        if value < 0:
            return cls.NEGATIVE
        if value > 0:
            return cls.POSITIVE
        return cls.ZERO


class RootFamily(str, Enum):
    """Polynomial sequences with a real-rootedness certificate"""
    CYCLE2 = "cycle2"
    SUBSET2 = "subset2"
    ORDERED_PHYLO = "orderedPhylo"


class RootCertificate(BaseModel):
    """
    Exact certificate for q_n = p_n / x.

    sturm_counts holds the number of distinct real zeros over the whole line
    followed by the number inside `interval`.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    family: str
    n: int = Field(ge=0)
    degree: int
    root_at_zero: bool
    all_real: bool
    interval: Tuple[Fraction, Fraction] = (Fraction(-1), Fraction(0))
    simple: bool
    interlaces_previous: bool
    sturm_counts: List[int] = Field(default_factory=list)
    value_at_zero: int
    value_at_minus_one: int
    failed_clause: Optional[str] = None

    @field_validator("interval", mode="before")
    @classmethod
    def coerce_interval(cls, v):
        return tuple(Fraction(x) for x in v)

    @field_serializer("interval")
    def serialize_interval(self, v: Tuple[Fraction, Fraction]) -> List[str]:
        return [str(x) for x in v]

    @model_validator(mode="after")
    def check_counts(self) -> "RootCertificate":
        if self.all_real and (not self.sturm_counts or self.sturm_counts[0] != self.degree):
            raise ValueError(f"all_real certificate for n={self.n} needs {self.degree} real zeros")
        return self

    @property
    def passed(self) -> bool:
        return self.failed_clause is None


class DerivativeQuadratic(BaseModel):
    """The (n−3)-rd derivative of p_n/x, a quadratic, and its discriminant"""
    kind: str
    r: int
    n: int
    coefficients: List[int]
    discriminant: int
    sign: Sign


class LogConcavityFailure(BaseModel):
    n: int
    k: int
    reason: str


class LogConcavityReport(BaseModel):
    label: Optional[str] = None
    rows_checked: int = 0
    failures: List[LogConcavityFailure] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


class RootCloudRecord(BaseModel):
    """One zero of c_{r,n} or s_{r,n}, with its n^{r−2}-normalized position"""
    kind: str
    r: int
    n: int
    re: float
    im: float
    norm_re: float
    norm_im: float
    residual: float

    def csv_row(self) -> List[str]:
        return [
            self.kind,
            str(self.r),
            str(self.n),
            repr(self.re),
            repr(self.im),
            repr(self.norm_re),
            repr(self.norm_im),
            repr(self.residual),
        ]


ROOT_CLOUD_HEADER = ["kind", "r", "n", "re", "im", "norm_re", "norm_im", "residual"]


@dataclass(frozen=True)
class NumericRoot:
    """A multiprecision zero (mpmath mpc) with its relative backward error"""
    value: Any
    residual: float
    is_real: bool
