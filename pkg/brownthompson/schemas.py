"""Pydantic schemas for command output and moment requests."""

import csv
import io
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator


# Rewriting and diagrams

class NormalizationTraceModel(BaseModel):
    """Normal form, permutation and step count of a word."""
    normal: str
    tau: List[int]
    steps: int = Field(..., ge=0)


class DiagramModel(BaseModel):
    """Serialized tree diagram."""
    p: int = Field(..., ge=2)
    top: str
    bottom: str


class MembershipModel(BaseModel):
    """Oriented-subgroup verdicts from both tests."""
    word: str
    theta: int
    parity: int
    agree: bool


# Moments

class State(str, Enum):
    """Which state the moments are taken in."""
    GAMMA = "gamma"
    THETA = "theta"


class Engine(str, Enum):
    """Enumeration engine."""
    BRUTE = "brute"
    MITM = "mitm"
    DP = "dp"


class OutputFormat(str, Enum):
    """Table output format."""
    CSV = "csv"
    JSON = "json"


class MomentRequest(BaseModel):
    """A grid of moment cells to compute."""
    state: State
    p: int = Field(default=2, ge=2)
    d: int = Field(..., ge=0)
    n_values: List[int] = Field(..., min_length=1)
    engine: Optional[Engine] = None
    workers: Optional[int] = Field(default=None, ge=1)
    budget: Optional[int] = Field(default=None, ge=1)

    @field_validator("n_values")
    @classmethod
    def validate_n_values(cls, v: List[int]) -> List[int]:
        """Generators are counted from 1."""
        if any(n < 1 for n in v):
            raise ValueError("n must be at least 1")
        return v

    @model_validator(mode="after")
    def validate_state(self) -> "MomentRequest":
        """theta lives on F_2 and has no meet-in-the-middle split."""
        if self.state == State.THETA and self.p != 2:
            raise ValueError("theta moments require p=2")
        if self.state == State.THETA and self.engine == Engine.MITM:
            raise ValueError("theta moments support the brute and dp engines only")
        return self

    @property
    def resolved_engine(self) -> Engine:
        if self.engine is not None:
            return self.engine
        return Engine.MITM if self.state == State.GAMMA else Engine.DP


class MomentRow(BaseModel):
    """One (d, n) cell; value = count / (2n)^(d/2)."""
    state: State
    p: int
    d: int
    n: int
    count: Optional[int] = None
    normalized_value_num: Optional[int] = None
    normalized_value_den: Optional[int] = None
    error: Optional[str] = None

    @property
    def value(self) -> Optional[Fraction]:
        if self.normalized_value_num is None:
            return None
        return Fraction(self.normalized_value_num, self.normalized_value_den)


CSV_COLUMNS = ["state", "p", "d", "n", "count", "normalized_value_num", "normalized_value_den", "error"]


class MomentTable(BaseModel):
    """Rows of a moment request, in grid order."""
    request: MomentRequest
    rows: List[MomentRow] = Field(default_factory=list)

    def counts(self) -> List[Optional[int]]:
        return [row.count for row in self.rows]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            record = row.model_dump()
            record["state"] = row.state.value
            writer.writerow({k: "" if record[k] is None else record[k] for k in CSV_COLUMNS})
        return buffer.getvalue()


class BoundRecord(BaseModel):
    """Counting bounds for one permutation."""
    d: int
    n: int
    p: int
    tau: List[int]
    N: int
    lower: Optional[int] = None
    upper_printed: int
    upper_corrected: int
    trend: float = Field(..., description="N * 2^(d/2) / (2n)^(d/2), tends to 1/(d/2)!")
    verdicts: Dict[str, str]


class TauHistogramModel(BaseModel):
    """N(d, n, tau) for every permutation that occurs."""
    d: int
    n: int
    p: int
    counts: Dict[str, int]
    total: int


# Verification

class CheckResult(BaseModel):
    """Outcome of one invariant check."""
    name: str
    passed: bool
    checked: int = 0
    failures: List[str] = Field(default_factory=list)
    elapsed_seconds: float = 0.0


class SuiteReport(BaseModel):
    """All checks of one suite."""
    suite: str
    results: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)
