"""정확 다항식 링 단위 테스트 (정규형 텍스트, 산술, 치환, 예산)."""
from fractions import Fraction

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from engine.ring import (
    ONE,
    ZERO,
    Poly,
    Y,
    falling_factorial,
    lam,
    poly_binomial,
    rising_factorial,
    t,
    y,
)
from shared.errors import BudgetError, DomainError


def test_canonical_text():
    p = 3 * t(1) ** 2 * t(2) - Fraction(1, 2) * y() + 4
    assert str(p) == "3*t1^2*t2 - 1/2*y + 4"
    assert Poly.parse("3*t1^2*t2 - 1/2*y + 4") == p


def test_zero_and_unit_coefficients():
    assert str(ZERO) == "0"
    assert str(-t(3)) == "-t3"
    assert str(t(1) - 1) == "t1 - 1"


def test_graded_lex_order_within_degree():
    # y > lambda > ... > t2 > t1 내 같은 차수에서는 큰 변수가 먼저
    p = t(1) ** 2 + t(1) * t(2) + y() ** 2 + lam() * t(1)
    assert str(p) == "y^2 + t1*lambda + t1*t2 + t1^2"


def test_cancellation_gives_structural_zero():
    p = (t(1) + t(2)) ** 2 - t(1) ** 2 - 2 * t(1) * t(2) - t(2) ** 2
    assert p.is_zero()
    assert p == 0
    assert len(p) == 0


def test_budget_is_enforced():
    assert t(16) == Poly.parse("t16")
    with pytest.raises(BudgetError):
        t(17)
    with pytest.raises(DomainError):
        t(0)


def test_substitute_is_simultaneous():
    p = t(1) * y() + t(2)
    q = p.substitute({"t1": t(2), "t2": t(1)})
    assert q == t(2) * y() + t(1)
    assert (t(1) + y()).substitute({Y: 2}) == t(1) + 2


def test_constant_helpers():
    assert Poly.constant(Fraction(6, 3)).as_integer() == 2
    with pytest.raises(DomainError):
        t(1).constant_value()
    with pytest.raises(DomainError):
        Poly.constant(Fraction(1, 2)).as_integer()


def test_degree_and_coefficients():
    p = y() ** 3 * t(1) + 2 * y() + 5
    assert p.degree() == 4
    assert p.degree("y") == 3
    assert ZERO.degree() == -1
    coeffs = p.coefficients_in("y")
    assert coeffs == {3: t(1), 1: Poly.constant(2), 0: Poly.constant(5)}


def test_factorials_and_binomial():
    yv = y()
    assert falling_factorial(yv, 2) == yv ** 2 - yv
    assert rising_factorial(3, 3) == 60
    assert poly_binomial(yv, 2) == Fraction(1, 2) * yv ** 2 - Fraction(1, 2) * yv
    assert poly_binomial(7, 3) == 35
    assert poly_binomial(yv, -1) == ZERO
    assert poly_binomial(yv, 0) == ONE


def test_parse_rejects_garbage():
    for text in ("", "t1**2", "3*", "x + 1"):
        with pytest.raises(DomainError):
            Poly.parse(text)


# ── property tests ──

_vars = st.sampled_from([1, 2, 3, Y])
_coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        mono = {}
        for v in draw(st.lists(_vars, max_size=3)):
            mono[v] = mono.get(v, 0) + draw(st.integers(1, 2))
        terms[tuple(sorted(mono.items()))] = draw(_coeffs)
    return Poly(terms)


@hsettings(max_examples=1000, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == ZERO


@hsettings(max_examples=60, deadline=None)
@given(polys())
def test_text_form_parses_back(p):
    assert Poly.parse(str(p)) == p


# 치환 값은 작게: 거듭제곱이 커지면 항 수가 폭발한다
@st.composite
def linear_polys(draw, variables):
    p = Poly.constant(draw(_coeffs))
    for v in draw(st.lists(st.sampled_from(variables), max_size=2)):
        p = p + Poly.variable(v) * draw(_coeffs)
    return p


@hsettings(max_examples=200, deadline=None)
@given(polys(), st.data())
def test_substitute_composes_over_disjoint_domains(p, data):
    # sigma 는 t1, t2 를, tau 는 t3, y 를 바꾼다
    sigma = {v: data.draw(linear_polys([1, 2, 3, Y])) for v in (1, 2)}
    tau = {v: data.draw(linear_polys([1, 2, 3, Y])) for v in (3, Y)}
    composed = {v: img.substitute(tau) for v, img in sigma.items()} | tau
    assert p.substitute(sigma).substitute(tau) == p.substitute(composed)
