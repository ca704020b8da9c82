"""
Configuration management using pydantic-settings.

환경변수(또는 .env)로 엔진 한계값과 기본 그리드를 조정한다.
CLI 플래그는 한 번의 실행에 한해 이 값을 덮어쓴다.
"""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # ── Enumeration oracle ──
    PW_ORACLE_CAP: int = 12           # enumerate(n)는 n ≤ cap 에서만 허용

    # ── Symbolic ring ──
    PW_VARIABLE_BUDGET: int = 16      # t1..tN, 초과 인덱스는 BudgetError

    # ── Identity suite ──
    PW_WORKERS: int = 1
    PW_SYMBOLIC_GRID: int = 6         # n, m, k ≤ 6 (심볼릭 t / λ / y)
    PW_NUMERIC_GRID: int = 10         # n, m, k ≤ 10 (P / Q / L 수치 항등식)

    # ── EGF checks ──
    PW_EGF_SYMBOLIC_ORDER: int = 8
    PW_EGF_NUMERIC_ORDER: int = 12

    # ── Tables ──
    PW_NUMERIC_TRIANGLE_MAX: int = 60

    # ── Logging ──
    LOG_LEVEL: str = "WARNING"

    class Config:
        env_file = ".env"
        extra = "ignore"


settings = Settings()
