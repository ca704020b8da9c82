"""Shared modules: config, logging, errors and report models."""
from .models import (
    FamilyKind,
    CheckMode,
    ReportStatus,
    OutputFormat,
    Witness,
    CheckReport,
    EgfCheckReport,
    TriangleDocument,
)
from .config import settings
from .errors import (
    EngineError,
    BudgetError,
    WeightIndexError,
    DomainError,
    OracleCapError,
    UmbralDegreeError,
    UnknownIdentityError,
    RegistryError,
)

__all__ = [
    # Enums
    "FamilyKind",
    "CheckMode",
    "ReportStatus",
    "OutputFormat",
    # Models
    "Witness",
    "CheckReport",
    "EgfCheckReport",
    "TriangleDocument",
    # Config
    "settings",
    # Errors
    "EngineError",
    "BudgetError",
    "WeightIndexError",
    "DomainError",
    "OracleCapError",
    "UmbralDegreeError",
    "UnknownIdentityError",
    "RegistryError",
]
