"""항등식 레지스트리와 단일 검사 테스트."""
import dataclasses

import pytest

from shared.errors import DomainError, RegistryError, UnknownIdentityError
from shared.models import CheckMode, ReportStatus
from verification.identities import (
    check,
    check_record,
    default_registry,
    register_all,
    self_test,
)

REGISTRY = default_registry()

# 정의된 id 전부 (알파벳 순서와 무관하게 등록 순서를 유지)
EXPECTED_IDS = {
    "2.2A", "2.2B", "2.3A", "2.3B", "2.3C", "2.3D", "2.4", "2.5", "2.6", "2.7a", "2.7b", "2.7",
    "2.L1",
    "3.1", "3.2", "3.charlier1", "3.charlier2", "3.D1", "3.D2", "3.B1", "3.B2", "3.riordan",
    "3.3", "3.3pre", "3.4", "3.fib", "3.DE", "3.Pexp", "3.P1",
    "4.2.1", "4.2.2", "4.2.3", "4.2.4", "4.2.5", "4.3", "4.4", "4.5", "4.7", "4.8", "4.9",
    "4.10", "4.11", "4.12", "4.T5a", "4.T5b", "4.L1", "4.L2",
    "5.2.1", "5.2.3", "5.2.lam", "5.T3a", "5.T3b", "5.T4a", "5.T4b", "5.T4c", "5.C5a",
    "5.C5b", "5.tree",
}


def test_registry_contents():
    assert len(REGISTRY) == 58
    assert set(REGISTRY.ids()) == EXPECTED_IDS
    assert len(register_all()) == 58


def test_duplicate_id_rejected():
    with pytest.raises(RegistryError):
        register_all(extra=[REGISTRY.lookup("3.1")])


def test_unknown_id():
    with pytest.raises(UnknownIdentityError):
        check("9.9", {"n": 1})
    with pytest.raises(KeyError):
        REGISTRY.lookup("nope")


def test_bad_bindings():
    with pytest.raises(DomainError):
        check("2.2A", {"n": 1})
    with pytest.raises(DomainError):
        check("2.2A", {"n": 1, "m": 1, "k": 1})
    with pytest.raises(DomainError):
        check("3.3", {"n": -1})
    # t_19 > budget 16
    with pytest.raises(DomainError):
        check("2.4", {"n": 6, "m": 6, "k": 6})


@pytest.mark.parametrize("identity_id", sorted(EXPECTED_IDS))
def test_every_identity_on_small_grid(identity_id):
    record = REGISTRY.lookup(identity_id)
    points = list(record.grid_points({"n": 2, "m": 2, "k": 2}))
    assert points
    for params in points:
        report = check_record(record, params)
        assert report.status == ReportStatus.PASS, report


@pytest.mark.parametrize("identity_id", ["3.riordan", "3.3", "3.3pre", "3.4", "3.fib"])
def test_power_identities_up_to_20(identity_id):
    for n in range(21):
        assert check(identity_id, {"n": n}).passed


def test_symbolic_lambda_identity():
    report = check("2.2A", {"n": 3, "m": 2})
    assert report.passed
    assert report.params == {"n": 3, "m": 2}
    assert report.witness is None


def test_rational_point_identity():
    record = REGISTRY.lookup("3.charlier1")
    assert record.mode == CheckMode.RATIONAL_POINTS
    assert check("3.charlier1", {"n": 4, "m": 3}).passed


@pytest.mark.parametrize(
    "identity_id,bindings",
    [("3.1", {"n": 2, "m": 1}), ("2.2A", {"n": 1, "m": 1}), ("5.tree", {"n": 4})],
)
def test_self_test_detects_corruption(identity_id, bindings):
    report = self_test(identity_id, bindings)
    assert report.status == ReportStatus.FAIL
    assert report.witness is not None
    assert report.witness.lhs != report.witness.rhs


def test_self_test_rational_points_reports_point():
    report = self_test("3.charlier1", {"n": 2, "m": 0})
    assert report.status == ReportStatus.FAIL
    assert report.witness.point == "0"


def test_grid_points_semantics():
    record = REGISTRY.lookup("2.4")
    assert list(record.grid_points({})) == []
    assert list(record.grid_points({"n": 1, "m": 1})) == []
    pts = list(record.grid_points({"n": 1, "m": 0, "k": 1}))
    assert pts == [
        {"n": 0, "m": 0, "k": 0},
        {"n": 0, "m": 0, "k": 1},
        {"n": 1, "m": 0, "k": 0},
        {"n": 1, "m": 0, "k": 1},
    ]
    # 예산을 넘는 점은 생성하지 않는다
    big = list(record.grid_points({"n": 6, "m": 6, "k": 6}))
    assert all(p["n"] + p["m"] + p["k"] + 1 <= 16 for p in big)
    assert len(big) < 7 ** 3


def test_computation_error_becomes_fail_report():
    record = REGISTRY.lookup("3.fib")
    report = check_record(record, {"n": 21})
    assert report.status == ReportStatus.FAIL
    assert "DomainError" in report.error


UMBRAL_SPECIALIZATIONS = ["3.D1", "3.D2", "3.B1", "3.B2", "4.10", "4.11", "4.12", "5.C5a", "5.C5b"]


@pytest.mark.parametrize("identity_id", UMBRAL_SPECIALIZATIONS)
def test_printed_left_side_matches_umbral_derivation(identity_id):
    record = REGISTRY.lookup(identity_id)
    assert record.derivation is not None
    for n in range(6):
        for m in range(4):
            assert record.lhs(n, m) == record.derivation(n, m)


def test_printed_left_sides_use_closed_sequences():
    # n=1, m=0: Q_{0,0}·1! + Q_{1,0}·0! = 1
    assert REGISTRY.lookup("4.10").lhs(1, 0) == 1
    # n=2, m=0: Q_{0,0}·I_2 + 2·Q_{1,0}·I_1 + Q_{2,0}·I_0 = 2 + 0 + 1
    assert REGISTRY.lookup("4.11").lhs(2, 0) == 3
    # n=1, m=1: P_{1,1}·B_2 + P_{2,1}·B_1 = 2 + 1
    assert REGISTRY.lookup("3.B2").lhs(1, 1) == 3


def test_broken_derivation_fails_the_check():
    record = REGISTRY.lookup("4.12")
    broken = dataclasses.replace(record, derivation=lambda n, m: record.lhs(n, m) + 1)
    report = check_record(broken, {"n": 2, "m": 1})
    assert report.status == ReportStatus.FAIL
    assert report.witness is None
    assert "umbral derivation" in report.error
