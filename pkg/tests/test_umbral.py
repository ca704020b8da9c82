"""Umbra 모멘트 evaluation 과 선형 치환 테스트."""
from math import factorial

import pytest

from engine.combinatorics import WeightFamily, bell_polynomial, sequence
from engine.ring import ONE, Poly, poly_binomial, t, y
from engine.singleton import a_recurrence, l_explicit
from engine.umbral import (
    Umbra,
    UmbralExpr,
    binomial_basis_transform,
    bell_transform,
    linear_transform,
    named_umbra,
    shifted_umbra,
    umbra_from_family,
    umbral_eval,
    umbral_substitute,
)
from shared.errors import DomainError, UmbralDegreeError

X = UmbralExpr.symbol()


def test_eval_is_linear():
    p = named_umbra("P", 5)
    assert umbral_eval(X ** 3, p) == 6
    assert umbral_eval(X ** 2 * 2 + 3, p) == 7
    # 곱은 보존되지 않는다: eval(X*X) = M_2, eval(X)^2 = M_1^2
    assert umbral_eval(X * X, p) == 2
    assert umbral_eval(X, p) ** 2 == 1


def test_eval_degree_guard():
    with pytest.raises(UmbralDegreeError):
        umbral_eval(X ** 3, named_umbra("P", 2))
    with pytest.raises(UmbralDegreeError):
        named_umbra("B", 2).moment(3)


def test_symbolic_umbra_moments():
    u = umbra_from_family(WeightFamily.symbolic(), 2)
    assert u.moments == (ONE, t(1), t(1) ** 2 + t(2))
    assert umbral_eval((X - t(1)) ** 2 * t(1), u) == t(1) * t(2)


def test_named_umbras():
    assert [m.as_integer() for m in named_umbra("D", 6).moments] == [1, 0, 1, 2, 9, 44, 265]
    assert [m.as_integer() for m in named_umbra("M", 6).moments] == [1, 0, 1, 0, 3, 0, 15]
    assert [m.as_integer() for m in named_umbra("I", 5).moments] == [1, 1, 2, 4, 10, 26]
    assert [m.as_integer() for m in named_umbra("B", 5).moments] == [1, 1, 2, 5, 15, 52]
    assert [m.as_integer() for m in named_umbra("L", 4).moments] == [1, 1, 3, 16, 125]
    assert named_umbra("Y", 1).moments[1] == t(1)
    with pytest.raises(DomainError):
        named_umbra("Z", 3)


def test_shifted_umbras():
    # (D+1)^j = j!, (M+1)^j = I_j, (B+1)^j = B_{j+1}
    assert [m.as_integer() for m in shifted_umbra(named_umbra("D", 6), 1).moments] == [
        factorial(j) for j in range(7)
    ]
    assert list(shifted_umbra(named_umbra("M", 6), 1).moments) == [
        sequence("involution_count", j) for j in range(7)
    ]
    assert list(shifted_umbra(named_umbra("B", 5), 1).moments) == [
        sequence("bell_number", j + 1) for j in range(6)
    ]


def test_umbra_needs_unit_moment():
    with pytest.raises(DomainError):
        Umbra((Poly.constant(2),), "bad")


def test_umbral_substitute():
    yv = y()
    assert umbral_substitute((yv + 1) ** 3, "y", named_umbra("D", 3)) == 6
    # 다른 변수는 스칼라 취급
    p = t(1) * yv ** 2 + yv
    assert umbral_substitute(p, "y", named_umbra("P", 2)) == 2 * t(1) + 1


@pytest.mark.parametrize("n", range(7))
def test_bell_and_binomial_transforms(n):
    yv = y()
    assert yv * bell_transform((yv + 1) ** n) == bell_polynomial(n + 1)
    assert binomial_basis_transform((yv + 1) ** n) == poly_binomial(yv + n, n)


def test_linear_transform_constant_term():
    assert linear_transform(Poly.constant(5), "y", lambda e: Poly.constant(10 ** e)) == 5


@pytest.mark.parametrize("n", range(11))
def test_involution_umbral_forms(n):
    # I^k (I-1)^{n-k} = (M+1)^k M^{n-k} = Q_{n,k}
    inv, fpf = named_umbra("I", n), named_umbra("M", n)
    for k in range(n + 1):
        via_inv = umbral_eval(X ** k * (X - 1) ** (n - k), inv)
        via_fpf = umbral_eval((X + 1) ** k * X ** (n - k), fpf)
        assert via_inv == via_fpf == a_recurrence(n, k, WeightFamily.involution())


@pytest.mark.parametrize("n", range(10))
def test_forest_umbral_form(n):
    forest = named_umbra("L", n)
    for k in range(n + 1):
        assert umbral_eval(X ** k * (X - 1) ** (n - k), forest) == l_explicit(n - k, k)
