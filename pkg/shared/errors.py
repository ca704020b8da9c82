"""
Error hierarchy for the engine.

라이브러리 모듈은 예외를 던지고, 리포트(항등식 검사/EGF 검사)는
예외를 status="fail" 모델로 흡수한다. CLI는 EngineError를 exit 2로 매핑.
"""


class EngineError(Exception):
    """Base class for every error raised by the engine."""


class BudgetError(EngineError):
    """A symbolic weight t_j was requested with j above the variable budget."""

    def __init__(self, index: int, budget: int):
        super().__init__(f"weight variable t{index} exceeds budget N={budget}")
        self.index = index
        self.budget = budget


class WeightIndexError(EngineError):
    """A custom weight list was read past its end."""


class DomainError(EngineError, ValueError):
    """Operation called outside its documented domain (k > n, bad bindings, ...)."""


class OracleCapError(EngineError):
    """Brute-force enumeration refused above the configured cap."""

    def __init__(self, n: int, cap: int):
        super().__init__(f"enumeration of [{n}] refused: oracle cap is {cap}")
        self.n = n
        self.cap = cap


class UmbralDegreeError(EngineError):
    """Umbral expression degree exceeds the truncation of the umbra."""


class UnknownIdentityError(EngineError, KeyError):
    """Identity id not present in the registry."""

    def __str__(self) -> str:
        return f"unknown identity id: {self.args[0]!r}"


class RegistryError(EngineError):
    """Registry construction failed (duplicate id)."""
