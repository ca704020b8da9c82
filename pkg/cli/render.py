"""
Output renderers - 삼각표/리포트를 CSV, JSON, 텍스트로 변환.

JSON 정수는 64-bit 범위를 넘으면 문자열로 내보낸다 (JSON 파서 정밀도 보호).
symbolic 값은 항상 정규형 다항식 텍스트.
"""
import csv
import io
import json
from typing import Any, Iterable

from engine.partitions import SetPartition
from engine.ring import Poly
from engine.singleton import Triangle
from shared.models import CheckReport, EgfCheckReport, TriangleDocument

INT64_MAX = 2 ** 63 - 1


def json_scalar(value: Poly) -> int | str:
    if value.is_constant() and value.is_integral():
        n = value.as_integer()
        if -INT64_MAX - 1 <= n <= INT64_MAX:
            return n
    return value.to_text()


def to_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


# ── triangles ──

def triangle_document(tri: Triangle) -> TriangleDocument:
    return TriangleDocument(
        family=tri.family.label,
        n_max=tri.n_max,
        rows=[[json_scalar(v) for v in row] for row in tri.rows],
    )


def triangle_json(tri: Triangle) -> str:
    return to_json(triangle_document(tri).model_dump(mode="json"))


def triangle_csv(tri: Triangle) -> str:
    """Header `n/k,0,1,...`; cells above the diagonal are empty."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n/k", *range(tri.n_max + 1)])
    for n, row in enumerate(tri.rows):
        cells = [v.to_text() for v in row]
        writer.writerow([n, *cells, *([""] * (tri.n_max - n))])
    return buf.getvalue()


def triangle_text(tri: Triangle) -> str:
    cells = [[v.to_text() for v in row] for row in tri.rows]
    width = max((len(c) for row in cells for c in row), default=1)
    lines = [f"# {tri.family.label}"]
    for n, row in enumerate(cells):
        lines.append(f"{n:>3} | " + " ".join(c.rjust(width) for c in row))
    return "\n".join(lines) + "\n"


# ── partitions ──

def partitions_text(items: Iterable[tuple[SetPartition, Poly]]) -> str:
    return "".join(f"{p}\t{w.to_text()}\n" for p, w in items)


def partitions_json(items: Iterable[tuple[SetPartition, Poly]]) -> str:
    return to_json([
        {"blocks": [list(b) for b in p.blocks], "weight": json_scalar(w)} for p, w in items
    ])


# ── reports ──

def reports_json(reports: Iterable[CheckReport]) -> str:
    return to_json([r.model_dump(mode="json", exclude_none=True) for r in reports])


def reports_text(reports: list[CheckReport]) -> str:
    lines = []
    for r in reports:
        params = " ".join(f"{k}={v}" for k, v in r.params.items())
        line = f"{r.status.value.upper():4} {r.id:<12} {params}"
        if r.elapsed_ms is not None:
            line += f"  ({r.elapsed_ms:.1f} ms)"
        if r.error:
            line += f"  error: {r.error}"
        elif r.witness is not None:
            line += f"  lhs={r.witness.lhs} rhs={r.witness.rhs}"
            if r.witness.point is not None:
                line += f" at y={r.witness.point}"
        lines.append(line)
    failed = sum(1 for r in reports if not r.passed)
    lines.append(f"# {len(reports) - failed}/{len(reports)} passed")
    return "\n".join(lines) + "\n"


def egf_report_json(report: EgfCheckReport) -> str:
    return to_json(report.model_dump(mode="json", exclude_none=True))


def egf_report_text(report: EgfCheckReport) -> str:
    line = f"{report.status.value.upper()} {report.which} order={report.order} checked={report.checked}"
    if report.mismatch is not None:
        line += f" mismatch at {report.mismatch}: lhs={report.lhs} rhs={report.rhs}"
    return line + "\n"
