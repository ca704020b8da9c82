"""CLI 통합 테스트 (main(argv) 직접 호출, 종료 코드와 stdout 확인)."""
import json

from cli.main import main
from shared.config import settings


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tables_csv(capsys):
    code, out, _ = _run(capsys, "tables", "--family", "permutation", "--nmax", "6", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n/k,0,1,2,3,4,5,6"
    assert lines[1] == "0,1,,,,,,"
    assert lines[-1] == "6,265,309,362,426,504,600,720"


def test_tables_json(capsys):
    code, out, _ = _run(capsys, "tables", "--family", "involution", "--nmax", "8", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["family"] == "involution"
    assert doc["n_max"] == 8
    assert doc["rows"][8] == [105, 105, 120, 150, 198, 270, 376, 532, 764]


def test_tables_json_large_values_are_strings(capsys):
    code, out, _ = _run(capsys, "tables", "--family", "permutation", "--nmax", "25", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert rows[25][25] == "15511210043330985984000000"  # 25! > 2^63
    assert rows[5][5] == 120


def test_value(capsys):
    assert _run(capsys, "value", "--family", "forest", "--n", "6", "--k", "6")[1] == "16807\n"
    assert _run(capsys, "value", "--n", "2", "--k", "2")[1] == "t1^3 + t1*t2\n"
    code, _, err = _run(capsys, "value", "--n", "2", "--k", "3")
    assert code == 2
    assert "k ≤ n" in err


def test_enumerate(capsys):
    code, out, _ = _run(capsys, "enumerate", "--n", "3")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 5
    assert lines[0] == "{1,2,3}\tt3"
    assert lines[-1] == "{1}{2}{3}\tt1^3"
    code, _, _ = _run(capsys, "enumerate", "--n", "13")
    assert code == 2


def test_bell(capsys):
    assert _run(capsys, "bell", "--n", "4", "--r", "2")[1] == "4*t1*t3 + 3*t2^2\n"
    out = _run(capsys, "bell", "--n", "5", "--family", "custom", "--weights", "1,1,1,1,1")[1]
    assert out == "52\n"
    assert _run(capsys, "bell", "--n", "6", "--family", "permutation", "--no-singletons")[1] == "265\n"
    code, _, _ = _run(capsys, "bell", "--n", "3", "--family", "custom")
    assert code == 2


def test_check_pass_and_json(capsys):
    code, out, _ = _run(capsys, "check", "--id", "3.3", "--n", "5", "--format", "json")
    assert code == 0
    [report] = json.loads(out)
    assert report == {"id": "3.3", "params": {"n": 5}, "status": "pass",
                      "reference": report["reference"]}


def test_check_errors(capsys):
    assert _run(capsys, "check", "--id", "2.2A", "--n", "1")[0] == 2
    assert _run(capsys, "check", "--id", "no.such", "--n", "1")[0] == 2
    assert _run(capsys, "check", "--id", "3.3", "--n", "1", "--format", "csv")[0] == 2


def test_suite_out_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = _run(
        capsys, "suite", "--nmax", "1", "--mmax", "1", "--kmax", "1",
        "--format", "json", "--out", str(target),
    )
    assert code == 0
    assert target.read_text(encoding="utf-8") == out
    reports = json.loads(out)
    assert reports and all(r["status"] == "pass" for r in reports)
    assert all("elapsed_ms" not in r for r in reports)


def test_budget_override_is_scoped(capsys):
    before = settings.PW_VARIABLE_BUDGET
    code, _, err = _run(capsys, "value", "--budget", "4", "--n", "6", "--k", "0")
    assert code == 2
    assert "budget" in err
    assert settings.PW_VARIABLE_BUDGET == before
    assert _run(capsys, "value", "--n", "6", "--k", "0")[0] == 0


def test_egf_check(capsys):
    code, out, _ = _run(capsys, "egf-check", "--which", "tree", "--order", "10", "--format", "json")
    assert code == 0
    assert json.loads(out)["status"] == "pass"
    code, out, _ = _run(capsys, "egf-check", "--which", "lemma21", "--order", "6", "--format", "json")
    assert code == 0
    assert json.loads(out)["which"] == "lemma21"
    assert _run(capsys, "egf-check", "--which", "lemma", "--order", "6")[0] == 2
    assert _run(capsys, "egf-check", "--which", "lemma21", "--order", "11")[0] == 2


def test_usage_errors(capsys):
    assert _run(capsys)[0] == 2
    assert _run(capsys, "tables", "--nmax", "3", "--family", "catalan")[0] == 2
    assert _run(capsys, "tables", "--nmax", "-1")[0] == 2
