"""
Identity registry - 항등식 레코드와 단일 검사.

각 레코드는 정수 파라미터 (n, m, k 중 일부) 에 대해 양변을 독립적으로
계산하는 두 생성자를 가진다. 비교 모드:
  - symbolic_poly:   양변을 링 원소로 만들어 구조적으로 비교
  - rational_points: 유리수 y 점 여러 개에서 값 비교 (분모에 y 가 있는 경우)

t1 의 음의 거듭제곱이 나오는 형태는 양변에 t1 거듭제곱을 곱한 형태로 등록한다.
검사 실패(불일치 또는 계산 중 예외)는 예외가 아니라 status="fail" 리포트.
"""
from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterable, Iterator, Literal, Mapping

from engine.combinatorics import (
    WeightFamily,
    bell_polynomial,
    charlier,
    complete_bell,
    double_factorial_odd,
    sequence,
)
from engine.egf import fibonacci_extraction, lemma21_series, tree_exp_series
from engine.ring import ZERO, Poly, lam, poly_binomial, y
from engine.singleton import a_explicit, a_recurrence, l_explicit, p_explicit, q_formulas
from engine.umbral import (
    binomial_basis_transform,
    bell_transform,
    named_umbra,
    shifted_umbra,
    umbral_substitute,
)
from shared.config import settings
from shared.errors import DomainError, RegistryError, UnknownIdentityError
from shared.logger import get_logger
from shared.models import CheckMode, CheckReport, ReportStatus, Witness

logger = get_logger(__name__)

Side = Callable[..., Poly | Fraction | int]
Grid = Literal["symbolic", "numeric"] | int


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    params: tuple[str, ...]
    lhs: Side
    rhs: Side
    reference: str
    mode: CheckMode = CheckMode.SYMBOLIC_POLY
    grid: Grid = "symbolic"
    # 가장 큰 symbolic 가중치 인덱스 (numeric 레코드는 None)
    max_index: Callable[..., int] | None = None
    points: Callable[..., Iterable[Fraction]] | None = None
    degree_bounds: Callable[..., Mapping[str, int]] | None = None
    # 같은 좌변을 umbral 치환으로 다시 만든 것 (있으면 lhs 와 같아야 한다)
    derivation: Side | None = None

    def default_max(self) -> int:
        if isinstance(self.grid, int):
            return self.grid
        if self.grid == "symbolic":
            return settings.PW_SYMBOLIC_GRID
        return settings.PW_NUMERIC_GRID

    def in_domain(self, params: Mapping[str, int]) -> bool:
        if self.max_index is None:
            return True
        return self.max_index(**params) <= settings.PW_VARIABLE_BUDGET

    def validate(self, bindings: Mapping[str, int]) -> dict[str, int]:
        """Bindings ordered like `params`; DomainError if missing, extra, negative or over budget."""
        missing = [p for p in self.params if p not in bindings]
        extra = [p for p in bindings if p not in self.params]
        if missing or extra:
            raise DomainError(
                f"{self.id} takes parameters {list(self.params)}; "
                f"missing {missing}, unexpected {extra}"
            )
        params = {p: bindings[p] for p in self.params}
        for p, v in params.items():
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise DomainError(f"{self.id}: parameter {p} must be a nonnegative integer, got {v!r}")
        if not self.in_domain(params):
            raise DomainError(
                f"{self.id} at {params} needs t{self.max_index(**params)}, "
                f"budget is {settings.PW_VARIABLE_BUDGET}"
            )
        return params

    def grid_points(self, ranges: Mapping[str, int | None] | None = None) -> Iterator[dict[str, int]]:
        """All in-domain bindings within ranges; nothing if a parameter is absent from ranges."""
        bounds = []
        for p in self.params:
            if ranges is None:
                bounds.append(self.default_max())
                continue
            if p not in ranges:
                return
            value = ranges[p]
            bounds.append(self.default_max() if value is None else value)

        def walk(i: int, acc: dict[str, int]):
            if i == len(self.params):
                if self.in_domain(acc):
                    yield dict(acc)
                return
            for v in range(bounds[i] + 1):
                acc[self.params[i]] = v
                yield from walk(i + 1, acc)
            acc.pop(self.params[i], None)

        yield from walk(0, {})

    def perturbed(self) -> IdentityRecord:
        """Copy with rhs + 1, for the registry self-test."""
        original = self.rhs
        return dataclasses.replace(self, rhs=lambda *a, **kw: Poly.coerce(original(*a, **kw)) + 1)


class IdentityRegistry:
    """Ordered id → record mapping."""

    def __init__(self, records: Iterable[IdentityRecord] = ()):
        self._records: dict[str, IdentityRecord] = {}
        for record in records:
            self.add(record)

    def add(self, record: IdentityRecord) -> None:
        if record.id in self._records:
            raise RegistryError(f"duplicate identity id: {record.id!r}")
        self._records[record.id] = record

    def lookup(self, identity_id: str) -> IdentityRecord:
        try:
            return self._records[identity_id]
        except KeyError:
            raise UnknownIdentityError(identity_id) from None

    def replace(self, record: IdentityRecord) -> IdentityRegistry:
        self.lookup(record.id)
        return IdentityRegistry(record if r.id == record.id else r for r in self)

    def ids(self) -> list[str]:
        return list(self._records)

    def __iter__(self) -> Iterator[IdentityRecord]:
        return iter(self._records.values())

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, identity_id: object) -> bool:
        return identity_id in self._records


# ── value helpers ──

SYM = WeightFamily.symbolic()
PERM = WeightFamily.permutation()
INV = WeightFamily.involution()
FOREST = WeightFamily.forest()

Y_ = y()
LAM = lam()


def _sum(terms: Iterable[Poly | Fraction | int]) -> Poly:
    return sum(terms, ZERO)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _t1() -> Poly:
    return SYM.weight(1)


def _A(n: int, k: int) -> Poly:
    return a_recurrence(n, k, SYM)


def _Y(n: int) -> Poly:
    return complete_bell(n, SYM)


def _P(n: int, k: int) -> Poly:
    return a_recurrence(n, k, PERM)


def _Q(n: int, k: int) -> Poly:
    return a_recurrence(n, k, INV)


def _L(n: int, k: int) -> Poly:
    return a_recurrence(n, k, FOREST)


def _D(n: int) -> Fraction:
    return sequence("derangement", n)


def _I(n: int) -> Fraction:
    return sequence("involution_count", n)


def _M(n: int) -> Fraction:
    return sequence("fpf_involution", n)


def _B(n: int) -> Fraction:
    return sequence("bell_number", n)


def _R(n: int) -> Fraction:
    # rooted forests on n labelled vertices, (n+1)^{n-1}
    return sequence("tree_count", n)


# ── shared sides ──

def _perm_column_gf(n: int, m: int) -> Poly:
    return _sum(comb(n, k) * _P(n + m, m + k) * Y_ ** k for k in range(n + 1))


def _perm_row_gf(n: int, m: int) -> Poly:
    return _sum(comb(n, k) * _P(m + k, m) * Y_ ** (n - k) for k in range(n + 1))


def _perm_alternating(n: int, m: int, yv: Poly | Fraction) -> Poly:
    return _sum(
        _sign(n - k) * comb(n, k) * factorial(m + k) * Poly.coerce(yv + 1) ** k
        for k in range(n + 1)
    )


def _inv_shifted_gf(n: int, m: int) -> Poly:
    return _sum(comb(n, k) * _Q(m + k, m) * (Y_ + 1) ** (n - k) for k in range(n + 1))


def _forest_shifted_gf(n: int, m: int) -> Poly:
    return _sum(comb(n, k) * _L(m + k, m) * (Y_ + 1) ** (n - k) for k in range(n + 1))


def _column_weighted(entry: Callable[[int, int], Poly], n: int, m: int,
                     c: Callable[[int], Fraction | int]) -> Poly:
    # Σ C(n,k) entry(n+m, m+k) c(k)
    return _sum(comb(n, k) * entry(n + m, m + k) * c(k) for k in range(n + 1))


def _row_weighted(entry: Callable[[int, int], Poly], n: int, m: int,
                  c: Callable[[int], Fraction | int]) -> Poly:
    # Σ C(n,k) entry(m+k, m) c(n-k)
    return _sum(comb(n, k) * entry(m + k, m) * c(n - k) for k in range(n + 1))


def _B_next(j: int) -> Fraction:
    return _B(j + 1)


def _points_0_to_n2(n: int, **_) -> Iterable[Fraction]:
    return [Fraction(v) for v in range(n + 3)]


# ── record tables ──

def _weighted_records() -> list[IdentityRecord]:
    """Identities of the general symbolic triangle."""
    idx_nm = lambda n, m: n + m + 1  # noqa: E731
    lam_bound = lambda n, m: {"lambda": n}  # noqa: E731
    return [
        IdentityRecord(
            "2.2A", ("n", "m"),
            lambda n, m: _sum(
                poly_binomial(k + LAM - 1, k) * _A(n + m, m + k) for k in range(n + 1)
            ),
            lambda n, m: _sum(
                poly_binomial(n + LAM, k) * poly_binomial(n + LAM - k - 1, n - k)
                * _A(m + k, m) * _t1() ** (n - k)
                for k in range(n + 1)
            ),
            "lambda-weighted row sums, binomial-binomial form",
            max_index=idx_nm, degree_bounds=lam_bound,
        ),
        IdentityRecord(
            "2.2B", ("n", "m"),
            lambda n, m: _sum(
                poly_binomial(k + LAM - 1, k) * _A(n + m, m + k) for k in range(n + 1)
            ),
            lambda n, m: _sum(
                _sign(n - k) * poly_binomial(n + LAM, k) * _Y(m + k) * _t1() ** (n - k + 1)
                for k in range(n + 1)
            ),
            "lambda-weighted row sums, complete Bell form",
            max_index=idx_nm, degree_bounds=lam_bound,
        ),
        IdentityRecord(
            "2.3A", ("n", "m"),
            lambda n, m: _A(n + m, m),
            lambda n, m: a_explicit(n, m, SYM),
            "explicit alternating Bell formula for A",
            max_index=idx_nm,
        ),
        IdentityRecord(
            "2.3B", ("n", "m"),
            lambda n, m: _t1() * _sum(_A(n + m, m + k) for k in range(n + 1)),
            lambda n, m: _t1() * _Y(n + m + 1) - _A(n + m + 1, m),
            "plain row-segment sum (times t1)",
            max_index=lambda n, m: n + m + 2,
        ),
        IdentityRecord(
            "2.3C", ("n", "m"),
            lambda n, m: _t1() ** 2 * _sum((k + 1) * _A(n + m, m + k) for k in range(n + 1)),
            lambda n, m: (
                _A(n + m + 2, m) - _t1() * _Y(n + m + 2) + (n + 2) * _t1() ** 2 * _Y(n + m + 1)
            ),
            "(k+1)-weighted row-segment sum (times t1^2)",
            max_index=lambda n, m: n + m + 3,
        ),
        IdentityRecord(
            "2.3D", ("n", "m"),
            lambda n, m: _t1() ** 2 * _sum((n - k + 1) * _A(n + m, m + k) for k in range(n + 1)),
            lambda n, m: (
                _t1() * _Y(n + m + 2) - _A(n + m + 2, m) - (n + 2) * _t1() * _A(n + m + 1, m)
            ),
            "(n-k+1)-weighted row-segment sum (times t1^2)",
            max_index=lambda n, m: n + m + 3,
        ),
        IdentityRecord(
            "2.4", ("n", "m", "k"),
            lambda n, m, k: _A(n + m + k, m + k),
            lambda n, m, k: _sum(
                comb(m, j) * _t1() ** (m - j) * _A(n + k + j, k) for j in range(m + 1)
            ),
            "diagonal shift of A",
            max_index=lambda n, m, k: n + m + k + 1,
        ),
        IdentityRecord(
            "2.5", ("n", "m"),
            lambda n, m: _sum(comb(n, k) * _A(n + m, m + k) * Y_ ** k for k in range(n + 1)),
            lambda n, m: _sum(
                _sign(n - k) * comb(n, k) * _Y(m + k) * (Y_ + 1) ** k * _t1() ** (n - k + 1)
                for k in range(n + 1)
            ),
            "row generating polynomial in y",
            max_index=idx_nm,
        ),
        IdentityRecord(
            "2.6", ("n", "m"),
            lambda n, m: _sum(comb(n, k) * _A(m + k, m) * Y_ ** (n - k) for k in range(n + 1)),
            lambda n, m: _t1() * _sum(
                comb(n, k) * _Y(m + k) * (Y_ - _t1()) ** (n - k) for k in range(n + 1)
            ),
            "column generating polynomial in y",
            max_index=idx_nm,
        ),
        IdentityRecord(
            "2.7a", ("n", "m"),
            lambda n, m: _sum(
                _sign(n - k) * comb(n, k) * _A(n + m, m + k) for k in range(n + 1)
            ),
            lambda n, m: _Y(m) * _t1() ** (n + 1),
            "alternating row sum",
            max_index=idx_nm,
        ),
        IdentityRecord(
            "2.7b", ("n", "m"),
            lambda n, m: _sum(comb(n, k) * _A(m + k, m) * _t1() ** (n - k) for k in range(n + 1)),
            lambda n, m: _t1() * _Y(m + n),
            "binomial column sum (times t1)",
            max_index=idx_nm,
        ),
        IdentityRecord(
            "2.7", ("n", "m"),
            lambda n, m: _sum(
                comb(n, k) * _A(m + k, m) * (Y_ + 1) ** k * (Y_ * _t1()) ** (n - k)
                for k in range(n + 1)
            ),
            lambda n, m: _sum(comb(n, k) * _A(n + m, m + k) * Y_ ** k for k in range(n + 1)),
            "row/column generating polynomial duality",
            max_index=idx_nm,
        ),
        IdentityRecord(
            "2.L1", ("n", "k"),
            lambda n, k: lemma21_series(n + k, SYM).coefficient(n, k),
            lambda n, k: _A(n + k, k),
            "bivariate exponential generating function of A",
            max_index=lambda n, k: n + k + 1,
        ),
    ]


def _permutation_records() -> list[IdentityRecord]:
    """Permutations by largest fixed point."""
    fact = factorial
    return [
        IdentityRecord(
            "3.1", ("n", "m"),
            _perm_column_gf,
            lambda n, m: _perm_alternating(n, m, Y_),
            "permutation row generating polynomial", grid="numeric",
        ),
        IdentityRecord(
            "3.2", ("n", "m"),
            _perm_row_gf,
            lambda n, m: _sum(
                comb(n, k) * fact(m + k) * (Y_ - 1) ** (n - k) for k in range(n + 1)
            ),
            "permutation column generating polynomial", grid="numeric",
        ),
        IdentityRecord(
            "3.charlier1", ("n", "m"),
            lambda yv, n, m: _perm_alternating(n, m, yv),
            lambda yv, n, m: (
                fact(m) * (yv + 1) ** n * charlier(n, m + 1, Fraction(-1) / (yv + 1))
            ),
            "row generating polynomial as a Charlier polynomial",
            mode=CheckMode.RATIONAL_POINTS, grid=6, points=_points_0_to_n2,
        ),
        IdentityRecord(
            "3.charlier2", ("n", "m"),
            _perm_row_gf,
            lambda n, m: fact(m) * charlier(n, m + 1, Y_ - 1),
            "column generating polynomial as a Charlier polynomial", grid=6,
        ),
        IdentityRecord(
            "3.D1", ("n", "m"),
            lambda n, m: _column_weighted(_P, n, m, _D),
            lambda n, m: _sum(
                _sign(n - k) * comb(n, k) * fact(m + k) * fact(k) for k in range(n + 1)
            ),
            "row generating polynomial at the derangement umbra", grid="numeric",
            derivation=lambda n, m: umbral_substitute(_perm_column_gf(n, m), "y", named_umbra("D", n)),
        ),
        IdentityRecord(
            "3.D2", ("n", "m"),
            lambda n, m: _row_weighted(_P, n, m, factorial),
            lambda n, m: _sum(comb(n, k) * fact(m + k) * _D(n - k) for k in range(n + 1)),
            "column generating polynomial at the factorial umbra", grid="numeric",
            derivation=lambda n, m: umbral_substitute(_perm_row_gf(n, m), "y", named_umbra("P", n)),
        ),
        IdentityRecord(
            "3.B1", ("n", "m"),
            lambda n, m: _column_weighted(_P, n, m, _B),
            lambda n, m: _sum(
                _sign(n - k) * comb(n, k) * fact(m + k) * _B(k + 1) for k in range(n + 1)
            ),
            "row generating polynomial at the Bell umbra", grid="numeric",
            derivation=lambda n, m: umbral_substitute(_perm_column_gf(n, m), "y", named_umbra("B", n)),
        ),
        IdentityRecord(
            "3.B2", ("n", "m"),
            lambda n, m: _row_weighted(_P, n, m, _B_next),
            lambda n, m: _sum(comb(n, k) * fact(m + k) * _B(n - k) for k in range(n + 1)),
            "column generating polynomial at the shifted Bell umbra", grid="numeric",
            derivation=lambda n, m: umbral_substitute(
                _perm_row_gf(n, m), "y", shifted_umbra(named_umbra("B", n), 1)
            ),
        ),
        IdentityRecord(
            "3.riordan", ("n",),
            lambda n: _sum(comb(n, k) * fact(k + 1) * (n + 1) ** (n - k) for k in range(n + 1)),
            lambda n: Poly.constant((n + 1) ** (n + 1)),
            "factorial sum equal to (n+1)^(n+1)", grid=20,
        ),
        IdentityRecord(
            "3.3", ("n",),
            lambda n: _sum(
                comb(n, k) * (_D(k) + _D(k + 1)) * (n + 2) ** (n - k) for k in range(n + 1)
            ),
            lambda n: Poly.constant((n + 1) ** (n + 1)),
            "derangement-pair sum equal to (n+1)^(n+1)", grid=20,
        ),
        IdentityRecord(
            "3.3pre", ("n",),
            lambda n: _sum(
                _sign(n - k) * comb(n, k) * _P(n + 1, k + 1) * (n + 2) ** k * (n + 1) ** (n - k)
                for k in range(n + 1)
            ),
            lambda n: Poly.constant((n + 1) ** (n + 1)),
            "alternating triangle row sum equal to (n+1)^(n+1)", grid=20,
        ),
        IdentityRecord(
            "3.4", ("n",),
            lambda n: _sum(comb(n, k) * _D(k + 1) * (n + 1) ** (n - k) for k in range(n + 1)),
            lambda n: Poly.constant(n ** (n + 1)),
            "derangement sum equal to n^(n+1)", grid=20,
        ),
        IdentityRecord(
            "3.fib", ("n",),
            lambda n: fibonacci_extraction(n)[0],
            lambda n: fibonacci_extraction(n)[1],
            "Fibonacci numbers extracted from the permutation triangle", grid=20,
        ),
        IdentityRecord(
            "3.DE", ("n",),
            lambda n: _sum((k + 1) * _P(n, k) for k in range(n + 1)),
            lambda n: _D(n + 2),
            "(k+1)-weighted row sum equals a derangement number", grid="numeric",
        ),
        IdentityRecord(
            "3.Pexp", ("n", "k"),
            lambda n, k: p_explicit(n, k, "alternating"),
            lambda n, k: p_explicit(n, k, "derangement"),
            "alternating factorial and derangement formulas for P agree", grid="numeric",
        ),
        IdentityRecord(
            "3.P1", ("n",),
            lambda n: _P(n + 1, 1),
            lambda n: _D(n) + _D(n + 1),
            "second column of the permutation triangle", grid="numeric",
        ),
    ]


def _involution_records() -> list[IdentityRecord]:
    """Involutions by largest fixed point."""
    return [
        *(
            IdentityRecord(
                rid, ("n", "k"),
                lambda n, k: _Q(n + k, k),
                (lambda route: lambda n, k: q_formulas(n, k, route))(route),
                f"closed form for Q ({route})", grid="numeric",
            )
            for rid, route in (
                ("4.2.1", "involution_sum"),
                ("4.2.2", "fpf_sum"),
                ("4.2.4", "product_sum"),
                ("4.2.5", "bessel_sum"),
            )
        ),
        IdentityRecord(
            "4.2.3", ("n", "m", "k"),
            lambda n, m, k: _Q(n + m + k, m + k),
            lambda n, m, k: _sum(comb(m, j) * _Q(n + k + j, k) for j in range(m + 1)),
            "diagonal shift of Q", grid="numeric",
        ),
        IdentityRecord(
            "4.3", ("n",),
            lambda n: _sum(
                _sign(n - k) * comb(n, k) * _Q(n, k) * (Y_ + 1) ** k for k in range(n + 1)
            ),
            lambda n: _sum(comb(n, k) * Y_ ** k * _I(k) for k in range(n + 1)),
            "inverse row generating polynomial of Q", grid="numeric",
        ),
        IdentityRecord(
            "4.4", ("n",),
            lambda n: _sum(comb(n, k) * _Q(n, k) * Y_ ** k for k in range(n + 1)),
            lambda n: _sum(
                _sign(n - k) * comb(n, k) * (Y_ + 1) ** k * _I(k) for k in range(n + 1)
            ),
            "row generating polynomial of Q", grid="numeric",
        ),
        IdentityRecord(
            "4.5", ("n",),
            lambda n: _sum(comb(n, k) * _Q(n, k) * Y_ ** k for k in range(n + 1)),
            lambda n: _sum(
                comb(n, 2 * k) * double_factorial_odd(k) * Y_ ** (n - 2 * k) * (Y_ + 1) ** (2 * k)
                for k in range(n // 2 + 1)
            ),
            "row generating polynomial of Q, double factorial form", grid="numeric",
        ),
        IdentityRecord(
            "4.7", ("n", "m"),
            _inv_shifted_gf,
            lambda n, m: _sum(comb(n, k) * _I(m + k) * Y_ ** (n - k) for k in range(n + 1)),
            "column generating polynomial of Q", grid="numeric",
        ),
        IdentityRecord(
            "4.8", ("n", "m"),
            lambda n, m: _sum(
                comb(n, k) * _Q(m + k, m) * bell_polynomial(n - k + 1) for k in range(n + 1)
            ),
            lambda n, m: Y_ * _sum(
                comb(n, k) * _I(m + k) * bell_polynomial(n - k) for k in range(n + 1)
            ),
            "column generating polynomial of Q in the Bell basis", grid="numeric",
        ),
        IdentityRecord(
            "4.9", ("n", "m"),
            lambda n, m: _sum(
                comb(n, k) * poly_binomial(Y_ + n - k, n - k) * _Q(m + k, m)
                for k in range(n + 1)
            ),
            lambda n, m: _sum(
                comb(n, k) * poly_binomial(Y_, n - k) * _I(m + k) for k in range(n + 1)
            ),
            "column generating polynomial of Q in the binomial basis", grid="numeric",
        ),
        IdentityRecord(
            "4.10", ("n", "m"),
            lambda n, m: _row_weighted(_Q, n, m, factorial),
            lambda n, m: _sum(comb(n, k) * _I(m + k) * _D(n - k) for k in range(n + 1)),
            "column generating polynomial of Q at the derangement umbra", grid="numeric",
            derivation=lambda n, m: umbral_substitute(_inv_shifted_gf(n, m), "y", named_umbra("D", n)),
        ),
        IdentityRecord(
            "4.11", ("n", "m"),
            lambda n, m: _row_weighted(_Q, n, m, _I),
            lambda n, m: _sum(comb(n, k) * _I(m + k) * _M(n - k) for k in range(n + 1)),
            "column generating polynomial of Q at the perfect matching umbra", grid="numeric",
            derivation=lambda n, m: umbral_substitute(_inv_shifted_gf(n, m), "y", named_umbra("M", n)),
        ),
        IdentityRecord(
            "4.12", ("n", "m"),
            lambda n, m: _row_weighted(_Q, n, m, _B_next),
            lambda n, m: _sum(comb(n, k) * _I(m + k) * _B(n - k) for k in range(n + 1)),
            "column generating polynomial of Q at the Bell umbra", grid="numeric",
            derivation=lambda n, m: umbral_substitute(_inv_shifted_gf(n, m), "y", named_umbra("B", n)),
        ),
        IdentityRecord(
            "4.T5a", ("n",),
            lambda n: _sum((k + 1) * _Q(n, k) for k in range(n + 1)),
            lambda n: _M(n + 2) - _I(n + 2) + (n + 2) * _I(n + 1),
            "(k+1)-weighted row sum of Q", grid="numeric",
        ),
        IdentityRecord(
            "4.T5b", ("n",),
            lambda n: _sum((n - k + 1) * _Q(n, k) for k in range(n + 1)),
            lambda n: _I(n + 2) - (n + 2) * _M(n + 1) - _M(n + 2),
            "(n-k+1)-weighted row sum of Q", grid="numeric",
        ),
        IdentityRecord(
            "4.L1", ("n",),
            lambda n: Y_ * bell_transform((Y_ + 1) ** n),
            lambda n: bell_polynomial(n + 1),
            "y^k to Bell polynomial map sends y(y+1)^n to the next Bell polynomial",
            grid="numeric",
        ),
        IdentityRecord(
            "4.L2", ("n",),
            lambda n: binomial_basis_transform((Y_ + 1) ** n),
            lambda n: poly_binomial(Y_ + n, n),
            "y^k to binomial map sends (y+1)^n to C(y+n, n)", grid="numeric",
        ),
    ]


def _forest_records() -> list[IdentityRecord]:
    """Rooted forests by largest isolated vertex."""
    return [
        IdentityRecord(
            "5.2.1", ("n", "k"),
            lambda n, k: _L(n + k, k),
            l_explicit,
            "alternating closed form for L", grid="numeric",
        ),
        IdentityRecord(
            "5.2.3", ("n", "m", "k"),
            lambda n, m, k: _L(n + m + k, m + k),
            lambda n, m, k: _sum(comb(m, j) * _L(n + k + j, k) for j in range(m + 1)),
            "diagonal shift of L", grid="numeric",
        ),
        IdentityRecord(
            "5.2.lam", ("n", "m"),
            lambda n, m: _sum(
                poly_binomial(j + LAM - 1, j) * _L(n + m, m + j) for j in range(n + 1)
            ),
            lambda n, m: _sum(
                _sign(n - j) * poly_binomial(n + LAM, j) * _R(m + j) for j in range(n + 1)
            ),
            "lambda-weighted row sums of L", grid="numeric",
            degree_bounds=lambda n, m: {"lambda": n},
        ),
        IdentityRecord(
            "5.T3a", ("n",),
            lambda n: _sum(
                _sign(n - k) * comb(n, k) * _L(n, k) * (Y_ + 1) ** k for k in range(n + 1)
            ),
            lambda n: _sum(comb(n, k) * _R(k) * Y_ ** k for k in range(n + 1)),
            "inverse row generating polynomial of L", grid="numeric",
        ),
        IdentityRecord(
            "5.T3b", ("n",),
            lambda n: _sum(comb(n, k) * _L(n, k) * Y_ ** k for k in range(n + 1)),
            lambda n: _sum(
                _sign(n - k) * comb(n, k) * _R(k) * (Y_ + 1) ** k for k in range(n + 1)
            ),
            "row generating polynomial of L", grid="numeric",
        ),
        IdentityRecord(
            "5.T4a", ("n", "m"),
            _forest_shifted_gf,
            lambda n, m: _sum(comb(n, k) * _R(m + k) * Y_ ** (n - k) for k in range(n + 1)),
            "column generating polynomial of L", grid="numeric",
        ),
        IdentityRecord(
            "5.T4b", ("n", "m"),
            lambda n, m: _sum(
                comb(n, k) * _L(m + k, m) * bell_polynomial(n - k + 1) for k in range(n + 1)
            ),
            lambda n, m: Y_ * _sum(
                comb(n, k) * _R(m + k) * bell_polynomial(n - k) for k in range(n + 1)
            ),
            "column generating polynomial of L in the Bell basis", grid="numeric",
        ),
        IdentityRecord(
            "5.T4c", ("n", "m"),
            lambda n, m: _sum(
                comb(n, k) * poly_binomial(Y_ + n - k, n - k) * _L(m + k, m)
                for k in range(n + 1)
            ),
            lambda n, m: _sum(
                comb(n, k) * poly_binomial(Y_, n - k) * _R(m + k) for k in range(n + 1)
            ),
            "column generating polynomial of L in the binomial basis", grid="numeric",
        ),
        IdentityRecord(
            "5.C5a", ("n", "m"),
            lambda n, m: _row_weighted(_L, n, m, factorial),
            lambda n, m: _sum(comb(n, k) * _R(m + k) * _D(n - k) for k in range(n + 1)),
            "column generating polynomial of L at the derangement umbra", grid="numeric",
            derivation=lambda n, m: umbral_substitute(_forest_shifted_gf(n, m), "y", named_umbra("D", n)),
        ),
        IdentityRecord(
            "5.C5b", ("n", "m"),
            lambda n, m: _row_weighted(_L, n, m, _B_next),
            lambda n, m: _sum(comb(n, k) * _R(m + k) * _B(n - k) for k in range(n + 1)),
            "column generating polynomial of L at the Bell umbra", grid="numeric",
            derivation=lambda n, m: umbral_substitute(_forest_shifted_gf(n, m), "y", named_umbra("B", n)),
        ),
        IdentityRecord(
            "5.tree", ("n",),
            lambda n: tree_exp_series(n).coefficient(n, 0),
            lambda n: _R(n),
            "exponential of rooted trees counts rooted forests", grid=12,
        ),
    ]


def register_all(extra: Iterable[IdentityRecord] = ()) -> IdentityRegistry:
    """Build the full registry; RegistryError on a duplicate id."""
    registry = IdentityRegistry()
    for record in (
        *_weighted_records(),
        *_permutation_records(),
        *_involution_records(),
        *_forest_records(),
        *extra,
    ):
        registry.add(record)
    logger.debug("registry_built", identities=len(registry))
    return registry


@lru_cache(maxsize=1)
def default_registry() -> IdentityRegistry:
    return register_all()


# ── checking ──

def _value(side: Side, *args, **params) -> Poly:
    return Poly.coerce(side(*args, **params))


def _compare(record: IdentityRecord, params: dict[str, int]) -> tuple[Witness | None, str | None]:
    if record.mode == CheckMode.RATIONAL_POINTS:
        for point in record.points(**params):
            left = _value(record.lhs, point, **params)
            right = _value(record.rhs, point, **params)
            if left != right:
                return Witness(lhs=left.to_text(), rhs=right.to_text(), point=str(point)), None
        return None, None

    left = _value(record.lhs, **params)
    right = _value(record.rhs, **params)
    if left != right:
        return Witness(lhs=left.to_text(), rhs=right.to_text()), None
    if record.derivation is not None:
        derived = _value(record.derivation, **params)
        if derived != left:
            return None, f"umbral derivation gives {derived}, left side is {left}"
    if record.degree_bounds is not None:
        for var, bound in record.degree_bounds(**params).items():
            if left.degree(var) > bound:
                return None, f"degree in {var} is {left.degree(var)}, expected at most {bound}"
    return None, None


def check_record(record: IdentityRecord, params: dict[str, int]) -> CheckReport:
    """Check one validated binding. Computation errors become failing reports."""
    start = time.perf_counter()
    witness, error = None, None
    try:
        witness, error = _compare(record, params)
    except Exception as exc:
        error = f"{type(exc).__name__}: {exc}"
    elapsed_ms = round((time.perf_counter() - start) * 1000, 3)

    status = ReportStatus.PASS if witness is None and error is None else ReportStatus.FAIL
    if status == ReportStatus.FAIL:
        logger.warning("identity_check_failed", id=record.id, params=params, error=error)
    return CheckReport(
        id=record.id,
        params=params,
        status=status,
        reference=record.reference,
        witness=witness,
        error=error,
        elapsed_ms=elapsed_ms,
    )


def check(identity_id: str, bindings: Mapping[str, int],
          registry: IdentityRegistry | None = None) -> CheckReport:
    """Look up an identity and check it at one binding."""
    registry = registry if registry is not None else default_registry()
    record = registry.lookup(identity_id)
    return check_record(record, record.validate(bindings))


def self_test(identity_id: str, bindings: Mapping[str, int],
              registry: IdentityRegistry | None = None) -> CheckReport:
    """Check a copy whose rhs is off by one; a healthy checker must report fail."""
    registry = registry if registry is not None else default_registry()
    record = registry.lookup(identity_id).perturbed()
    return check_record(record, record.validate(bindings))


__all__ = [
    "IdentityRecord",
    "IdentityRegistry",
    "register_all",
    "default_registry",
    "check",
    "check_record",
    "self_test",
]
