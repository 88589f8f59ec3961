"""
Campaign Models
Verification campaign configuration, claim specifications and the machine-readable report
"""

from enum import Enum
from pathlib import Path
import json
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator


class ClaimStatus(str, Enum):
    VERIFIED = "verified-to-cap"
    FALSIFIED = "falsified"
    OBSERVED = "observed"
    ERROR = "error"


class ExitCode(int, Enum):
    OK = 0
    UNEXPECTED = 1
    USAGE = 2
    GUARD = 3


class FamilySpec(BaseModel):
    kind: str
    r: int = Field(ge=1)

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        kind, _, r = text.strip().partition(":")
        if not kind or not r:
            raise ValueError(f"Family '{text}' is not of the form kind:r")
        return cls(kind=kind, r=int(r))

    def __str__(self) -> str:
        return f"{self.kind}:{self.r}"


DEFAULT_FAMILIES = [f"{kind}:{r}" for kind in ("cycle", "subset") for r in range(2, 7)]


class CampaignConfig(BaseModel):
    """Desk-scale caps for one verification campaign"""
    families: List[FamilySpec] = Field(default_factory=lambda: [FamilySpec.parse(f) for f in DEFAULT_FAMILIES])
    tp_size: int = Field(20, ge=1)
    minor_cross_check_size: int = Field(9, ge=1)
    hankel_size: int = Field(5, ge=1)
    hankel_minor_order: int = Field(5, ge=1)
    root_n_max: int = Field(25, ge=1)
    boundary_n_max: int = Field(20, ge=1)
    discriminant_n_max: int = Field(20, ge=3)
    oracle_n_max: int = Field(6, ge=1)
    series_order: int = Field(10, ge=1)
    log_concave_n_max: int = Field(200, ge=1)
    precision_bits: int = Field(256, ge=64)
    report_path: Optional[Path] = None
    jobs: int = Field(1, ge=1)

    @field_validator("families", mode="before")
    @classmethod
    def parse_families(cls, v):
        if isinstance(v, str):
            return [FamilySpec.parse(part) for part in v.split(",") if part.strip()]
        return v


class ClaimSpec(BaseModel):
    """A scheduled claim: which check to run, with which parameters, and the status it should end in"""
    id: str
    anchor: str
    check: str
    params: Dict[str, Any] = Field(default_factory=dict)
    expected: ClaimStatus = ClaimStatus.VERIFIED
    full_scale_cap: Optional[str] = None


class ClaimOutcome(BaseModel):
    status: ClaimStatus
    cap: Dict[str, Any] = Field(default_factory=dict)
    witness: Optional[Any] = None
    detail: Optional[str] = None


class ClaimRecord(BaseModel):
    id: str
    anchor: str
    status: ClaimStatus
    expected: ClaimStatus
    cap: Dict[str, Any] = Field(default_factory=dict)
    full_scale_cap: Optional[str] = None
    witness: Optional[Any] = None
    detail: Optional[str] = None
    elapsed_ms: int = 0

    @model_validator(mode="after")
    def check_witness(self) -> "ClaimRecord":
        if self.status == ClaimStatus.FALSIFIED and self.witness is None:
            raise ValueError(f"Falsified claim {self.id} needs a witness")
        return self

    @property
    def as_expected(self) -> bool:
        return self.status == self.expected

    @classmethod
    def from_outcome(cls, spec: ClaimSpec, outcome: ClaimOutcome, elapsed_ms: int) -> "ClaimRecord":
        return cls(
            id=spec.id,
            anchor=spec.anchor,
            status=outcome.status,
            expected=spec.expected,
            cap=outcome.cap,
            full_scale_cap=spec.full_scale_cap,
            witness=outcome.witness,
            detail=outcome.detail,
            elapsed_ms=elapsed_ms,
        )


class VerificationReport(BaseModel):
    claims: List[ClaimRecord] = Field(default_factory=list)
    generated_at: Optional[str] = None

    @property
    def unexpected(self) -> List[ClaimRecord]:
        return [claim for claim in self.claims if not claim.as_expected]

    @property
    def exit_code(self) -> ExitCode:
        return ExitCode.UNEXPECTED if self.unexpected else ExitCode.OK

    def counts(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for claim in self.claims:
            out[claim.status.value] = out.get(claim.status.value, 0) + 1
        return out

    def to_json(self, deterministic: bool = True) -> str:
        """Sorted keys and fixed indent; timings and the timestamp are left out when deterministic"""
        exclude: Dict[str, Any] = {}
        if deterministic:
            exclude = {"generated_at": True, "claims": {"__all__": {"elapsed_ms"}}}
        payload = self.model_dump(mode="json", exclude=exclude)
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
