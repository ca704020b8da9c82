import pytest

from engine import combinatorics, singleton
from shared.config import settings


@pytest.fixture
def small_budget(monkeypatch):
    """PW_VARIABLE_BUDGET=4 with empty memo tables (cached rows would skip the budget check)."""
    combinatorics.clear_caches()
    singleton.clear_caches()
    monkeypatch.setattr(settings, "PW_VARIABLE_BUDGET", 4)
    yield 4
    combinatorics.clear_caches()
    singleton.clear_caches()
