"""
Suite runner - 등록된 모든 항등식을 파라미터 grid 위에서 검사.

레코드 단위로 작업을 나눠 ProcessPoolExecutor 에 던지고 asyncio.gather 로 모은다.
workers=1 이면 같은 프로세스에서 순차 실행. 결과는 (id, params) 로 정렬하고
elapsed_ms 는 timings=True 일 때만 남기므로 worker 수와 무관하게 동일한 출력이 나온다.
"""
import asyncio
from concurrent.futures import ProcessPoolExecutor
from typing import Mapping

from engine import combinatorics, singleton
from shared.config import settings
from shared.errors import DomainError
from shared.logger import get_logger, setup_logging
from shared.models import CheckReport, ReportStatus
from verification.identities import (
    IdentityRegistry,
    check_record,
    default_registry,
)

logger = get_logger(__name__)

Ranges = Mapping[str, int | None] | None


def _init_worker(overrides: dict) -> None:
    """Pool initializer: carry CLI overrides into the child process."""
    for key, value in overrides.items():
        setattr(settings, key, value)
    combinatorics.clear_caches()
    singleton.clear_caches()
    setup_logging()


def _run_record(identity_id: str, bindings: list[dict[str, int]]) -> list[dict]:
    # worker 쪽: 레코드는 lambda 를 담고 있어서 id 로만 주고받는다
    record = default_registry().lookup(identity_id)
    return [check_record(record, params).model_dump(mode="json") for params in bindings]


def _overrides() -> dict:
    return {
        "PW_VARIABLE_BUDGET": settings.PW_VARIABLE_BUDGET,
        "PW_ORACLE_CAP": settings.PW_ORACLE_CAP,
        "PW_SYMBOLIC_GRID": settings.PW_SYMBOLIC_GRID,
        "PW_NUMERIC_GRID": settings.PW_NUMERIC_GRID,
        "LOG_LEVEL": settings.LOG_LEVEL,
    }


def plan(ranges: Ranges = None,
         registry: IdentityRegistry | None = None) -> list[tuple[str, list[dict[str, int]]]]:
    """(id, bindings) work items, one per record with a nonempty grid."""
    registry = registry if registry is not None else default_registry()
    work = []
    for record in registry:
        bindings = list(record.grid_points(ranges))
        if bindings:
            work.append((record.id, bindings))
    return work


async def _run_parallel(work, workers: int) -> list[CheckReport]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(_overrides(),)
    ) as pool:
        tasks = [
            loop.run_in_executor(pool, _run_record, identity_id, bindings)
            for identity_id, bindings in work
        ]
        results = await asyncio.gather(*tasks, return_exceptions=True)

    reports: list[CheckReport] = []
    for (identity_id, bindings), result in zip(work, results):
        if isinstance(result, Exception):
            logger.error("suite_worker_failed", id=identity_id, error=str(result))
            reports.extend(
                CheckReport(
                    id=identity_id, params=params, status=ReportStatus.FAIL,
                    error=f"worker failed: {result}",
                )
                for params in bindings
            )
        else:
            reports.extend(CheckReport.model_validate(r) for r in result)
    return reports


def run_suite(ranges: Ranges = None, workers: int | None = None,
              registry: IdentityRegistry | None = None,
              timings: bool = False) -> list[CheckReport]:
    """Check every registered identity over its grid.

    Args:
        ranges: param → max. A record with a parameter missing from the mapping
            is skipped; None values mean the record default; ranges=None means
            every record default.
        workers: process count; 1 runs inline. A custom registry always runs inline.
        timings: keep elapsed_ms on the reports.

    Returns:
        list[CheckReport] sorted by (id, params).
    """
    workers = settings.PW_WORKERS if workers is None else workers
    if workers < 1:
        raise DomainError(f"workers must be positive, got {workers}")

    work = plan(ranges, registry)
    logger.info(
        "suite_start", records=len(work), checks=sum(len(b) for _, b in work), workers=workers,
    )

    if workers == 1 or registry is not None:
        source = registry if registry is not None else default_registry()
        reports = [
            check_record(source.lookup(identity_id), params)
            for identity_id, bindings in work
            for params in bindings
        ]
    else:
        reports = asyncio.run(_run_parallel(work, workers))

    if not timings:
        reports = [r.model_copy(update={"elapsed_ms": None}) for r in reports]
    reports.sort(key=CheckReport.sort_key)

    failed = sum(1 for r in reports if not r.passed)
    logger.info("suite_complete", checks=len(reports), failed=failed)
    return reports
