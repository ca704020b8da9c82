"""Bell 다항식, 가중치 family, 보조 수열 단위 테스트."""
from fractions import Fraction
from math import factorial

import pytest

from engine.combinatorics import (
    WeightFamily,
    bell_polynomial,
    bessel_number,
    charlier,
    complete_bell,
    integer_partitions,
    partial_bell,
    partial_bell_by_kappa,
    sequence,
)
from engine.ring import Poly, t, y
from shared.errors import BudgetError, DomainError, WeightIndexError

SYM = WeightFamily.symbolic()


def test_complete_bell_symbolic_small():
    assert complete_bell(0, SYM) == 1
    assert complete_bell(1, SYM) == t(1)
    assert complete_bell(2, SYM) == t(1) ** 2 + t(2)
    assert complete_bell(3, SYM) == t(1) ** 3 + 3 * t(1) * t(2) + t(3)


def test_complete_bell_without_singletons():
    assert complete_bell(1, SYM, suppress_singletons=True) == 0
    assert complete_bell(4, SYM, suppress_singletons=True) == 3 * t(2) ** 2 + t(4)


def test_partial_bell_values():
    assert partial_bell(4, 2, SYM) == 4 * t(1) * t(3) + 3 * t(2) ** 2
    assert partial_bell(0, 0, SYM) == 1
    assert partial_bell(3, 0, SYM) == 0
    assert partial_bell(2, 3, SYM) == 0
    # Stirling numbers of the second kind
    assert partial_bell(5, 2, WeightFamily.ones(5)) == 15
    with pytest.raises(DomainError):
        partial_bell(-1, 0, SYM)


@pytest.mark.parametrize("n", range(8))
def test_partial_bell_matches_multiset_sum(n):
    for r in range(n + 1):
        assert partial_bell(n, r, SYM) == partial_bell_by_kappa(n, r, SYM)


@pytest.mark.parametrize("n", range(9))
def test_complete_bell_is_row_sum_of_partial(n):
    total = sum((partial_bell(n, r, SYM) for r in range(n + 1)), Poly.constant(0))
    assert complete_bell(n, SYM) == total


def test_numeric_families_count_structures():
    for n in range(9):
        assert complete_bell(n, WeightFamily.permutation()) == factorial(n)
        assert complete_bell(n, WeightFamily.permutation(), True) == sequence("derangement", n)
        assert complete_bell(n, WeightFamily.involution()) == sequence("involution_count", n)
        assert complete_bell(n, WeightFamily.involution(), True) == sequence("fpf_involution", n)
        assert complete_bell(n, WeightFamily.forest()) == sequence("tree_count", n)


def test_bell_numbers_from_unit_weights():
    got = [complete_bell(n, WeightFamily.ones(max(n, 1))) for n in range(8)]
    assert got == [1, 1, 2, 5, 15, 52, 203, 877]
    assert [sequence("bell_number", n) for n in range(8)] == [1, 1, 2, 5, 15, 52, 203, 877]


def test_sequences():
    assert [sequence("derangement", n) for n in range(8)] == [1, 0, 1, 2, 9, 44, 265, 1854]
    assert [sequence("involution_count", n) for n in range(9)] == [1, 1, 2, 4, 10, 26, 76, 232, 764]
    assert [sequence("fpf_involution", n) for n in range(9)] == [1, 0, 1, 0, 3, 0, 15, 0, 105]
    assert [sequence("fibonacci", n) for n in range(7)] == [1, 1, 2, 3, 5, 8, 13]
    assert [sequence("tree_count", n) for n in range(5)] == [1, 1, 3, 16, 125]
    assert isinstance(sequence("derangement", 3), Fraction)
    with pytest.raises(DomainError):
        sequence("catalan", 3)
    with pytest.raises(DomainError):
        sequence("derangement", -1)


def test_bessel_numbers_sum_to_involutions():
    assert bessel_number(4, 2) == 3
    assert bessel_number(4, 1) == 0
    assert bessel_number(4, 5) == 0
    for n in range(10):
        assert sum(bessel_number(n, j) for j in range(n + 1)) == sequence("involution_count", n)


def test_bell_polynomials():
    yv = y()
    assert bell_polynomial(0) == 1
    assert bell_polynomial(3) == yv ** 3 + 3 * yv ** 2 + yv
    assert bell_polynomial(5).substitute({"y": 1}) == 52


def test_charlier():
    assert charlier(0, 5, 7) == 1
    assert charlier(1, 2, 5) == 7
    # C_2(u, v) = v^2 + 2uv + u(u+1)
    assert charlier(2, 3, y()) == y() ** 2 + 6 * y() + 12


def test_weight_family_identity():
    a = WeightFamily.from_values([1, 2])
    b = WeightFamily.from_values([Fraction(1), Fraction(2)])
    assert a == b
    assert hash(a) == hash(b)
    assert WeightFamily.from_name("forest") == WeightFamily.forest()
    with pytest.raises(DomainError):
        WeightFamily.from_name("custom")
    with pytest.raises(DomainError):
        WeightFamily.from_name("catalan")


def test_custom_family_past_end():
    w = WeightFamily.from_values([1, 1])
    assert complete_bell(2, w) == 2
    with pytest.raises(WeightIndexError):
        complete_bell(3, w)


def test_symbolic_budget(small_budget):
    assert complete_bell(4, SYM) == complete_bell(4, SYM)
    with pytest.raises(BudgetError):
        complete_bell(5, SYM)


def test_integer_partitions():
    assert list(integer_partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert list(integer_partitions(5, 2)) == [(4, 1), (3, 2)]
    assert list(integer_partitions(0)) == [()]
