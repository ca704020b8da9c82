"""절단 이변수 EGF 연산과 생성함수 검사 테스트."""
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from engine.combinatorics import WeightFamily, sequence
from engine.egf import (
    Egf2,
    check_family_gf,
    check_family_gfs,
    check_lemma21,
    diagonal_lift,
    egf_exp,
    egf_mul,
    fibonacci_extraction,
    involution_series,
)
from engine.ring import ONE, Poly
from engine.singleton import a_recurrence
from shared.errors import DomainError
from shared.models import ReportStatus


def test_mul_by_one():
    f = Egf2.from_function(5, lambda n, k: n + 2 * k + 1)
    assert egf_mul(Egf2.one(5), f) == f
    assert f * Egf2.one(5) == f


def test_exp_basics():
    assert egf_exp(Egf2(6)) == Egf2.one(6)
    # exp(x): every x-coefficient is 1
    ex = egf_exp(Egf2(6, {(1, 0): ONE}))
    assert all(ex.coefficient(n, 0) == 1 for n in range(7))
    # exp(e^x - 1): Bell numbers
    bell = egf_exp(Egf2(7, {(j, 0): ONE for j in range(1, 8)}))
    assert [bell.coefficient(n, 0) for n in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]
    with pytest.raises(DomainError):
        egf_exp(Egf2.one(3))


def test_exp_of_sum_is_product():
    # e^x · e^y = e^{x+y}: every coefficient is 1
    prod = egf_mul(Egf2.exp_linear_x(6, 1), egf_exp(Egf2(6, {(0, 1): ONE})))
    assert prod == Egf2.from_function(6, lambda n, k: 1)


def test_diagonal_lift():
    lift = diagonal_lift([1, 2, 3, 4], 3)
    assert lift.coefficient(1, 2) == 4
    assert lift.coefficient(2, 0) == 3
    with pytest.raises(DomainError):
        diagonal_lift([1, 2], 3)
    with pytest.raises(DomainError):
        lift.coefficient(3, 1)


def test_involution_series_matches_triangle():
    s = involution_series(8)
    w = WeightFamily.involution()
    for n, k in s.indices():
        assert s.coefficient(n, k) == a_recurrence(n + k, k, w)


def test_lemma_symbolic():
    report = check_lemma21(8, WeightFamily.symbolic())
    assert report.status == ReportStatus.PASS
    assert report.checked == 45
    with pytest.raises(DomainError):
        check_lemma21(11, WeightFamily.symbolic())


@pytest.mark.parametrize("family", ["permutation", "involution", "forest"])
def test_lemma_numeric(family):
    assert check_lemma21(12, WeightFamily.from_name(family)).passed


def test_family_generating_functions():
    reports = check_family_gfs(12)
    assert [r.which for r in reports] == ["permutation", "involution", "forest", "tree"]
    assert all(r.passed for r in reports)
    assert check_family_gf("tree", 6).checked == 7
    with pytest.raises(DomainError):
        check_family_gf("catalan", 4)


def test_fibonacci_extraction():
    for n in range(21):
        lhs, rhs = fibonacci_extraction(n)
        assert lhs == rhs
    assert fibonacci_extraction(2) == (3, 3)
    assert check_family_gf("fibonacci", 20).passed
    with pytest.raises(DomainError):
        fibonacci_extraction(21)


def test_tree_identity_values():
    assert [sequence("tree_count", n) for n in range(5)] == [1, 1, 3, 16, 125]
    assert check_family_gf("tree", 12).passed


def test_coefficients_are_polys():
    assert isinstance(Egf2.from_function(2, lambda n, k: 3).coefficient(1, 1), Poly)


# ── property tests ──

_small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def egfs(draw, order, zero_constant=False):
    coeffs = {}
    for n in range(order + 1):
        for k in range(order + 1 - n):
            if zero_constant and n == k == 0:
                continue
            coeffs[(n, k)] = Poly.constant(draw(_small))
    return Egf2(order, coeffs)


@hsettings(max_examples=100, deadline=None)
@given(st.integers(0, 5).flatmap(lambda order: st.tuples(egfs(order), egfs(order), egfs(order))))
def test_mul_is_commutative_and_associative(triple):
    a, b, c = triple
    assert egf_mul(a, b) == egf_mul(b, a)
    assert egf_mul(egf_mul(a, b), c) == egf_mul(a, egf_mul(b, c))


@hsettings(max_examples=60, deadline=None)
@given(st.integers(0, 6).flatmap(
    lambda order: st.tuples(egfs(order, zero_constant=True), egfs(order, zero_constant=True))
))
def test_exp_turns_sum_into_product(pair):
    f, g = pair
    assert egf_exp(f + g) == egf_mul(egf_exp(f), egf_exp(g))
