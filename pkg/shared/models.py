"""
Shared Pydantic data models.

항등식 검사 리포트, EGF 검사 리포트, 삼각표 JSON 문서 스키마.
다항식 값은 모두 정규형 텍스트(Poly.to_text)로 직렬화한다.
"""
from enum import Enum

from pydantic import BaseModel, Field


class FamilyKind(str, Enum):
    """Weight family j ↦ weight of a block of size j."""
    SYMBOLIC = "symbolic"
    PERMUTATION = "permutation"
    INVOLUTION = "involution"
    FOREST = "forest"
    CUSTOM = "custom"


class CheckMode(str, Enum):
    """How the two sides of an identity are compared."""
    SYMBOLIC_POLY = "symbolic_poly"
    RATIONAL_POINTS = "rational_points"


class ReportStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


# ── Identity check report ──
class Witness(BaseModel):
    """Counterexample carried by a failing check."""
    lhs: str
    rhs: str
    point: str | None = None  # rational_points 모드에서 불일치한 y 값


class CheckReport(BaseModel):
    """Result of checking one identity at one parameter binding."""
    id: str
    params: dict[str, int]
    status: ReportStatus
    reference: str = ""
    witness: Witness | None = None
    error: str | None = None
    elapsed_ms: float | None = None  # --timings 에서만 출력 (결정론 유지)

    @property
    def passed(self) -> bool:
        return self.status == ReportStatus.PASS

    def sort_key(self) -> tuple:
        return (self.id, tuple(self.params.values()))


# ── EGF check report ──
class EgfCheckReport(BaseModel):
    """Coefficientwise comparison of a truncated generating function."""
    which: str
    order: int
    family: str | None = None
    status: ReportStatus
    checked: int = Field(0, description="number of coefficients compared")
    mismatch: tuple[int, int] | None = None  # 첫 번째 불일치 (n, k)
    lhs: str | None = None
    rhs: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == ReportStatus.PASS


# ── Tables ──
class TriangleDocument(BaseModel):
    """JSON schema of `tables --format json`."""
    family: str
    n_max: int
    rows: list[list[int | str]]
