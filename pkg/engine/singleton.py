"""
Singleton engine - 최대 singleton 통계 A_{n,k}(w) 의 삼각표.

A_{n,k}(w) = [n+1] 의 집합분할 중 최대 singleton 이 k+1 인 것들의 가중합.
  - column 0:  A_{n,0} = w(1) · Y_n(0, w(2), w(3), ...)
  - 점화식:    A_{n,k} = A_{n,k-1} + w(1) · A_{n-1,k-1}
  - 대각선:    A_{n,n} = w(1) · Y_n(w)

permutation / involution / forest 특화 값 P, Q, L 과 그 명시적 공식들도 여기 있다.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Literal

from pydantic import BaseModel, ConfigDict

from engine.combinatorics import WeightFamily, bessel_number, complete_bell, sequence
from engine.ring import ZERO, Poly
from engine.umbral import UmbralExpr, umbra_from_family, umbral_eval
from shared.config import settings
from shared.errors import BudgetError, DomainError
from shared.logger import get_logger

logger = get_logger(__name__)

PRoute = Literal["alternating", "derangement"]
QRoute = Literal["involution_sum", "fpf_sum", "product_sum", "bessel_sum"]

NUMERIC_FAMILIES = ("permutation", "involution", "forest")


def _check_indices(n: int, k: int) -> None:
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"A_{{n,k}} needs 0 ≤ k ≤ n, got (n={n}, k={k})")


# ── recurrence (primary path) ──

_rows: dict[WeightFamily, list[tuple[Poly, ...]]] = {}


def _row(n: int, w: WeightFamily) -> tuple[Poly, ...]:
    rows = _rows.setdefault(w, [])
    t1 = w.weight(1)
    while len(rows) <= n:
        m = len(rows)
        row = [t1 * complete_bell(m, w, suppress_singletons=True)]
        for k in range(1, m + 1):
            row.append(row[k - 1] + t1 * rows[m - 1][k - 1])
        rows.append(tuple(row))
    return rows[n]


def a_recurrence(n: int, k: int, w: WeightFamily) -> Poly:
    """A_{n,k}(w) by the column-0 formula and the first-order recurrence."""
    _check_indices(n, k)
    return _row(n, w)[k]


def clear_caches() -> None:
    _rows.clear()


# ── alternative closed forms ──

def a_explicit(n: int, m: int, w: WeightFamily) -> Poly:
    """A_{n+m,m}(w) = Σ_k (-1)^{n-k} C(n,k) w(1)^{n-k+1} Y_{m+k}(w)."""
    if n < 0 or m < 0:
        raise DomainError(f"a_explicit needs n, m ≥ 0, got ({n}, {m})")
    t1 = w.weight(1)
    total = ZERO
    for k in range(n + 1):
        sign = -1 if (n - k) % 2 else 1
        total = total + complete_bell(m + k, w) * t1 ** (n - k + 1) * (sign * comb(n, k))
    return total


def a_umbral(n: int, k: int, w: WeightFamily) -> Poly:
    """A_{n+k,k}(w) as the umbral evaluation of w(1) · Y^k (Y - w(1))^n."""
    if n < 0 or k < 0:
        raise DomainError(f"a_umbral needs n, k ≥ 0, got ({n}, {k})")
    t1 = w.weight(1)
    sym = UmbralExpr.symbol()
    expr = sym ** k * (sym - t1) ** n * t1
    return umbral_eval(expr, umbra_from_family(w, n + k))


# ── permutation family ──

def p_explicit(n: int, k: int, route: PRoute = "alternating") -> Fraction:
    """P_{n+k,k} through the alternating factorial sum or the derangement sum."""
    if n < 0 or k < 0:
        raise DomainError(f"p_explicit needs n, k ≥ 0, got ({n}, {k})")
    if route == "alternating":
        return Fraction(sum(
            (-1) ** (n - j) * comb(n, j) * factorial(k + j) for j in range(n + 1)
        ))
    if route == "derangement":
        return sum(
            (comb(k, j) * sequence("derangement", n + j) for j in range(k + 1)), Fraction(0)
        )
    raise DomainError(f"unknown P route: {route!r}")


# ── involution family ──

def q_formulas(n: int, k: int, route: QRoute = "involution_sum") -> Fraction:
    """Q_{n+k,k} by one of four closed forms."""
    if n < 0 or k < 0:
        raise DomainError(f"q_formulas needs n, k ≥ 0, got ({n}, {k})")
    inv = lambda i: sequence("involution_count", i)  # noqa: E731
    fpf = lambda i: sequence("fpf_involution", i)  # noqa: E731
    total = Fraction(0)
    match route:
        case "involution_sum":
            for j in range(n + 1):
                total += (-1) ** (n - j) * comb(n, j) * inv(k + j)
        case "fpf_sum":
            for j in range(k + 1):
                total += comb(k, j) * fpf(n + j)
        case "product_sum":
            for j in range(min(n, k) + 1):
                total += comb(k, j) * comb(n, j) * factorial(j) * inv(k - j) * fpf(n - j)
        case "bessel_sum":
            for j in range((n + 1) // 2, (n + k + 1) // 2 + 1):
                rest = n + k - 2 * j
                if rest < 0:
                    continue
                total += Fraction(factorial(k), factorial(rest)) * inv(rest) * bessel_number(n, j)
        case _:
            raise DomainError(f"unknown Q route: {route!r}")
    return total


# ── forest family ──

def l_explicit(n: int, k: int) -> Fraction:
    """L_{n+k,k} = Σ_j (-1)^{n-j} C(n,j) (k+j+1)^{k+j-1}."""
    if n < 0 or k < 0:
        raise DomainError(f"l_explicit needs n, k ≥ 0, got ({n}, {k})")
    return sum(
        ((-1) ** (n - j) * comb(n, j) * sequence("tree_count", k + j) for j in range(n + 1)),
        Fraction(0),
    )


# ── triangles ──

class Triangle(BaseModel):
    """Rows 0..n_max of A_{n,k}(w); row n has n+1 entries."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: WeightFamily
    rows: tuple[tuple[Poly, ...], ...]

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def entry(self, n: int, k: int) -> Poly:
        _check_indices(n, k)
        if n > self.n_max:
            raise DomainError(f"row {n} beyond n_max={self.n_max}")
        return self.rows[n][k]


def build_triangle(w: WeightFamily, n_max: int) -> Triangle:
    """Rows 0..n_max. Symbolic triangles need t_{n_max+1} within the budget."""
    if n_max < 0:
        raise DomainError(f"n_max must be ≥ 0, got {n_max}")
    if w.is_symbolic:
        if n_max + 1 > settings.PW_VARIABLE_BUDGET:
            raise BudgetError(n_max + 1, settings.PW_VARIABLE_BUDGET)
    elif n_max > settings.PW_NUMERIC_TRIANGLE_MAX:
        raise DomainError(
            f"numeric triangles are capped at n_max={settings.PW_NUMERIC_TRIANGLE_MAX}"
        )
    rows = tuple(_row(n, w) for n in range(n_max + 1))
    if w.kind.value in NUMERIC_FAMILIES:
        for n, row in enumerate(rows):
            for k, v in enumerate(row):
                if not v.is_constant() or not v.is_integral() or v.constant_value() < 0:
                    raise DomainError(f"{w.label} entry A_{n},{k} = {v} is not a count")
    logger.debug("triangle_built", family=w.label, n_max=n_max)
    return Triangle(family=w, rows=rows)


def triangle_value(family: str | WeightFamily, n: int, k: int) -> Poly:
    """Single entry, by family name (CLI `value`)."""
    w = family if isinstance(family, WeightFamily) else WeightFamily.from_name(family)
    return a_recurrence(n, k, w)
