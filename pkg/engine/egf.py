"""
Truncated bivariate exponential generating functions.

f(x, y) = Σ a_{n,k} x^n y^k / (n! k!) 를 n + k ≤ N 까지만 들고 다닌다.
곱은 이중 binomial convolution, exp 는 ∂_x f = (∂_x g) f 미분 점화식으로
계수별 정확 계산한다. 생성함수 항등식(A_{n,k} 이변수 EGF 의 닫힌 형태, P/Q/L family,
rooted tree 지수 항등식)을 계수 단위로 비교하는 검사기도 여기 있다.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Literal, Sequence

from engine.combinatorics import WeightFamily, complete_bell, sequence
from engine.ring import ONE, ZERO, Poly, Scalar
from engine.singleton import a_recurrence, p_explicit
from shared.errors import DomainError
from shared.logger import get_logger
from shared.models import EgfCheckReport, ReportStatus

logger = get_logger(__name__)

FamilyGf = Literal["permutation", "involution", "forest", "tree", "fibonacci"]

SYMBOLIC_ORDER_MAX = 10


class Egf2:
    """Truncated bivariate EGF; missing coefficients are zero."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: dict[tuple[int, int], Poly] | None = None):
        if order < 0:
            raise DomainError(f"EGF order must be ≥ 0, got {order}")
        self.order = order
        self.coeffs: dict[tuple[int, int], Poly] = {
            (n, k): c for (n, k), c in (coeffs or {}).items() if n + k <= order and c
        }

    @classmethod
    def from_function(cls, order: int, f: Callable[[int, int], Poly | Scalar]) -> Egf2:
        return cls(order, {
            (n, k): Poly.coerce(f(n, k)) for n in range(order + 1) for k in range(order + 1 - n)
        })

    @classmethod
    def one(cls, order: int) -> Egf2:
        return cls(order, {(0, 0): ONE})

    @classmethod
    def exp_linear_x(cls, order: int, c: Poly | Scalar) -> Egf2:
        """e^{c·x}: coefficients c^n on the k = 0 line."""
        c = Poly.coerce(c)
        return cls(order, {(n, 0): c ** n for n in range(order + 1)})

    def coefficient(self, n: int, k: int) -> Poly:
        if n < 0 or k < 0 or n + k > self.order:
            raise DomainError(f"coefficient ({n}, {k}) outside order {self.order}")
        return self.coeffs.get((n, k), ZERO)

    def indices(self):
        for n in range(self.order + 1):
            for k in range(self.order + 1 - n):
                yield n, k

    def __add__(self, other: Egf2) -> Egf2:
        order = min(self.order, other.order)
        return Egf2(order, {
            (n, k): self.coeffs.get((n, k), ZERO) + other.coeffs.get((n, k), ZERO)
            for n in range(order + 1) for k in range(order + 1 - n)
        })

    def __neg__(self) -> Egf2:
        return Egf2(self.order, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other: Egf2) -> Egf2:
        return self + (-other)

    def scale(self, c: Poly | Scalar) -> Egf2:
        c = Poly.coerce(c)
        return Egf2(self.order, {i: v * c for i, v in self.coeffs.items()})

    def __mul__(self, other: Egf2) -> Egf2:
        return egf_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Egf2):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"Egf2(order={self.order}, terms={len(self.coeffs)})"


def egf_mul(a: Egf2, b: Egf2) -> Egf2:
    """c_{n,k} = Σ_i Σ_j C(n,i) C(k,j) a_{i,j} b_{n-i,k-j}."""
    order = min(a.order, b.order)
    out: dict[tuple[int, int], Poly] = {}
    for (i, j), ca in a.coeffs.items():
        for (p, q), cb in b.coeffs.items():
            n, k = i + p, j + q
            if n + k > order:
                continue
            term = ca * cb * (comb(n, i) * comb(k, j))
            out[(n, k)] = out.get((n, k), ZERO) + term
    return Egf2(order, out)


def egf_exp(g: Egf2) -> Egf2:
    """exp(g) for g with zero constant term."""
    if g.coeffs.get((0, 0)):
        raise DomainError("egf_exp needs a zero constant term")
    order = g.order
    f: dict[tuple[int, int], Poly] = {(0, 0): ONE}

    # x = 0 line: f_{0,k+1} = Σ_j C(k,j) g_{0,j+1} f_{0,k-j}
    for k in range(order):
        acc = ZERO
        for j in range(k + 1):
            gj = g.coeffs.get((0, j + 1))
            if gj:
                acc = acc + gj * f.get((0, k - j), ZERO) * comb(k, j)
        f[(0, k + 1)] = acc

    # f_{n+1,k} = Σ_i Σ_j C(n,i) C(k,j) g_{i+1,j} f_{n-i,k-j}
    for n in range(order):
        for k in range(order - n):
            acc = ZERO
            for i in range(n + 1):
                for j in range(k + 1):
                    gij = g.coeffs.get((i + 1, j))
                    if not gij:
                        continue
                    fv = f.get((n - i, k - j))
                    if fv:
                        acc = acc + gij * fv * (comb(n, i) * comb(k, j))
            f[(n + 1, k)] = acc
    return Egf2(order, f)


def diagonal_lift(c: Sequence[Poly | Scalar], order: int) -> Egf2:
    """Σ_j c_j (x+y)^j / j!, i.e. b_{n,k} = c_{n+k}."""
    if len(c) < order + 1:
        raise DomainError(f"diagonal_lift needs {order + 1} terms, got {len(c)}")
    return Egf2.from_function(order, lambda n, k: c[n + k])


# ── generating-function checks ──

def _compare(which: str, order: int, lhs: Egf2, rhs: Callable[[int, int], Poly | Scalar],
             family: str | None = None,
             indices=None) -> EgfCheckReport:
    checked = 0
    for n, k in indices if indices is not None else lhs.indices():
        left = lhs.coefficient(n, k)
        right = Poly.coerce(rhs(n, k))
        checked += 1
        if left != right:
            logger.warning("egf_mismatch", which=which, order=order, n=n, k=k)
            return EgfCheckReport(
                which=which, order=order, family=family, status=ReportStatus.FAIL,
                checked=checked, mismatch=(n, k), lhs=left.to_text(), rhs=right.to_text(),
            )
    return EgfCheckReport(
        which=which, order=order, family=family, status=ReportStatus.PASS, checked=checked,
    )


@lru_cache(maxsize=16)
def lemma21_series(order: int, w: WeightFamily) -> Egf2:
    """w(1) · e^{-x·w(1)} · Σ_j Y_j(w) (x+y)^j / j!."""
    t1 = w.weight(1)
    lift = diagonal_lift([complete_bell(j, w) for j in range(order + 1)], order)
    return egf_mul(Egf2.exp_linear_x(order, -t1), lift).scale(t1)


def check_lemma21(order: int, w: WeightFamily) -> EgfCheckReport:
    """Generating function of A against the triangle: coefficient (n, k) is A_{n+k,k}."""
    if w.is_symbolic and order > SYMBOLIC_ORDER_MAX:
        raise DomainError(f"symbolic lemma check is limited to order {SYMBOLIC_ORDER_MAX}")
    series = lemma21_series(order, w)
    return _compare("lemma21", order, series, lambda n, k: a_recurrence(n + k, k, w), w.label)


def check_permutation_gf(order: int) -> EgfCheckReport:
    """e^{-x} Σ_j j! (x+y)^j / j! against P_{n+k,k}."""
    w = WeightFamily.permutation()
    lift = diagonal_lift([factorial(j) for j in range(order + 1)], order)
    series = egf_mul(Egf2.exp_linear_x(order, -1), lift)
    return _compare("permutation", order, series, lambda n, k: a_recurrence(n + k, k, w), w.label)


def involution_series(order: int) -> Egf2:
    """exp(y + (x+y)^2 / 2)."""
    g = Egf2(order, {(0, 1): ONE, (2, 0): ONE, (1, 1): ONE, (0, 2): ONE})
    return egf_exp(g)


def check_involution_gf(order: int) -> EgfCheckReport:
    w = WeightFamily.involution()
    return _compare(
        "involution", order, involution_series(order),
        lambda n, k: a_recurrence(n + k, k, w), w.label,
    )


def check_forest_gf(order: int) -> EgfCheckReport:
    """e^{-x} Σ_j (j+1)^{j-1} (x+y)^j / j! against L_{n+k,k}."""
    w = WeightFamily.forest()
    lift = diagonal_lift([sequence("tree_count", j) for j in range(order + 1)], order)
    series = egf_mul(Egf2.exp_linear_x(order, -1), lift)
    return _compare("forest", order, series, lambda n, k: a_recurrence(n + k, k, w), w.label)


@lru_cache(maxsize=8)
def tree_exp_series(order: int) -> Egf2:
    """exp(Σ_j j^{j-1} x^j / j!) in x alone."""
    g = Egf2(order, {(j, 0): Poly.constant(j ** (j - 1)) for j in range(1, order + 1)})
    return egf_exp(g)


def check_tree_identity(order: int) -> EgfCheckReport:
    """exp(rooted trees) counts rooted forests: coefficient n is (n+1)^{n-1}."""
    return _compare(
        "tree", order, tree_exp_series(order),
        lambda n, k: sequence("tree_count", n),
        indices=[(n, 0) for n in range(order + 1)],
    )


def fibonacci_extraction(n: int) -> tuple[Fraction, Fraction]:
    """Both sides of the Fibonacci coefficient extraction from the permutation triangle."""
    if n < 0 or n > 20:
        raise DomainError(f"fibonacci_extraction is defined for 0 ≤ n ≤ 20, got {n}")
    lhs = sum(
        (comb(n, 2 * k) * comb(2 * k, k) * factorial(k) * p_explicit(n - 2 * k, k)
         for k in range(n // 2 + 1)),
        Fraction(0),
    )
    rhs = sum(
        ((-1) ** (n - k) * comb(n, k) * factorial(k) * sequence("fibonacci", k)
         for k in range(n + 1)),
        Fraction(0),
    )
    return lhs, rhs


def check_fibonacci(order: int) -> EgfCheckReport:
    checked = 0
    for n in range(order + 1):
        lhs, rhs = fibonacci_extraction(n)
        checked += 1
        if lhs != rhs:
            return EgfCheckReport(
                which="fibonacci", order=order, status=ReportStatus.FAIL, checked=checked,
                mismatch=(n, 0), lhs=str(lhs), rhs=str(rhs),
            )
    return EgfCheckReport(which="fibonacci", order=order, status=ReportStatus.PASS, checked=checked)


_FAMILY_CHECKS: dict[str, Callable[[int], EgfCheckReport]] = {
    "permutation": check_permutation_gf,
    "involution": check_involution_gf,
    "forest": check_forest_gf,
    "tree": check_tree_identity,
    "fibonacci": check_fibonacci,
}


def check_family_gf(which: FamilyGf, order: int) -> EgfCheckReport:
    try:
        fn = _FAMILY_CHECKS[which]
    except KeyError:
        raise DomainError(f"unknown generating-function check: {which!r}") from None
    return fn(order)


def check_family_gfs(order: int) -> list[EgfCheckReport]:
    """Permutation, involution, forest and tree identities at one order."""
    return [check_family_gf(which, order) for which in ("permutation", "involution", "forest", "tree")]
