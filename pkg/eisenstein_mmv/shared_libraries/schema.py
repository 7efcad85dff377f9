from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class CaseResult(BaseModel):
    """One verified parameter tuple.

    Attributes:
        id: Stable case identifier; reports are ordered by it.
        parameters: The tuple that was checked (JSON-friendly values only).
        lhs: Left-hand side at full working precision, "a+bi".
        rhs: Right-hand side at full working precision, "a+bi".
        abs_err: |lhs - rhs|; None for skipped cases.
        tol: Absolute tolerance the case was held to.
        passed: abs_err <= tol. Serialized as "pass".
        skipped: True when the tuple hits a singular exponent.
        notes: Skip reason, arbitration outcome or error text.
    """

    model_config = ConfigDict(populate_by_name=True)

    id: str
    parameters: Dict[str, Any] = {}
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    abs_err: Optional[float] = None
    tol: Optional[float] = None
    passed: bool = Field(False, alias="pass")
    skipped: bool = False
    notes: str = ""


class Summary(BaseModel):
    """Case counts of a report.

    Attributes:
        total: Number of cases.
        passed: Cases within tolerance.
        failed: Cases outside tolerance or refused by the engine.
        skipped_singular: Singular tuples. Serialized as "skipped-singular".
    """

    model_config = ConfigDict(populate_by_name=True)

    total: int = 0
    passed: int = 0
    failed: int = 0
    skipped_singular: int = Field(0, alias="skipped-singular")

    @classmethod
    def of(cls, cases: List[CaseResult]) -> "Summary":
        passed = sum(1 for c in cases if c.passed)
        skipped = sum(1 for c in cases if c.skipped)
        return cls(total=len(cases), passed=passed, failed=len(cases) - passed - skipped, skipped_singular=skipped)


class EngineInfo(BaseModel):
    """Settings needed to rerun any case of a report exactly.

    Attributes:
        digits: Working precision in significant decimal digits.
        eps: Truncation target.
        n_max: Summation cap.
        version: Package version that produced the report.
        grid: Grid selector the suite was planned with.
        quad_degree: Gauss-Legendre degree of the quadrature oracle.
    """

    digits: int
    eps: float
    n_max: int
    version: str
    grid: str
    quad_degree: int


class VerificationReport(BaseModel):
    """Result of one suite run; ``summary`` must match ``cases``.

    Attributes:
        suite: Suite name.
        cases: Case results ordered by id.
        summary: Counts derived from the cases.
        engine: Settings the suite ran with.
    """

    model_config = ConfigDict(populate_by_name=True)

    suite: str
    cases: List[CaseResult] = []
    summary: Summary = Summary()
    engine: EngineInfo

    @model_validator(mode="after")
    def _check_summary(self) -> "VerificationReport":
        if self.summary != Summary.of(self.cases):
            raise ValueError("summary counts disagree with the cases")
        return self

    @property
    def exit_code(self) -> int:
        return 0 if self.summary.failed == 0 else 1
