# /eh-feedback-access/app/models/validation_model.py

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"
    # Reported deviation that does not fail the suite (bound excursions of the coupled system).
    WARN = "WARN"


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)
    name: str
    estimate: float
    reference: float
    tolerance: float
    std_error: Optional[float] = None
    verdict: Verdict
    detail: str = ""


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)
    checks: List[CheckResult]

    @property
    def failed(self) -> bool:
        return any(c.verdict is Verdict.FAIL for c in self.checks)
