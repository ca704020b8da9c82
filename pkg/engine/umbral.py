"""
Umbral calculus - 모멘트 수열로 정의된 umbra 와 선형 evaluation.

umbra 는 M_0 = 1 인 모멘트 열 (M_0..M_J) 을 절단해서 들고 다닌다.
evaluation 은 symbol^k ↦ M_k 로 보내는 선형 사상이고, 상수와 곱은
보존하지만 umbra 끼리의 곱은 보존하지 않는다. J 를 넘는 차수는 에러.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Literal

from engine.combinatorics import WeightFamily, bell_polynomial, complete_bell
from engine.ring import ONE, ZERO, Poly, Scalar, poly_binomial, y
from shared.errors import DomainError, UmbralDegreeError

UmbraName = Literal["Y", "P", "I", "M", "B", "D", "L"]


@dataclass(frozen=True)
class Umbra:
    moments: tuple[Poly, ...]
    label: str = ""

    def __post_init__(self):
        if not self.moments or self.moments[0] != ONE:
            raise DomainError(f"umbra {self.label!r} must have M_0 = 1")

    @property
    def order(self) -> int:
        """Truncation J: moments M_0..M_J are known."""
        return len(self.moments) - 1

    def moment(self, k: int) -> Poly:
        if k > self.order:
            raise UmbralDegreeError(
                f"umbra {self.label or '?'} known up to degree {self.order}, degree {k} needed"
            )
        return self.moments[k]


@dataclass(frozen=True)
class UmbralExpr:
    """Polynomial in one umbral symbol with Poly coefficients; coeffs[k] multiplies symbol^k."""

    coeffs: tuple[Poly, ...] = ()

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def symbol(cls) -> UmbralExpr:
        return cls((ZERO, ONE))

    @classmethod
    def constant(cls, c: Poly | Scalar) -> UmbralExpr:
        return cls((Poly.coerce(c),))

    @staticmethod
    def coerce(x: UmbralExpr | Poly | Scalar) -> UmbralExpr:
        return x if isinstance(x, UmbralExpr) else UmbralExpr.constant(x)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other) -> UmbralExpr:
        other = UmbralExpr.coerce(other)
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (size - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (size - len(other.coeffs))
        return UmbralExpr(tuple(p + q for p, q in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> UmbralExpr:
        return UmbralExpr(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> UmbralExpr:
        return self + (-UmbralExpr.coerce(other))

    def __rsub__(self, other) -> UmbralExpr:
        return UmbralExpr.coerce(other) + (-self)

    def __mul__(self, other) -> UmbralExpr:
        other = UmbralExpr.coerce(other)
        if not self.coeffs or not other.coeffs:
            return UmbralExpr()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UmbralExpr(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> UmbralExpr:
        if e < 0:
            raise DomainError(f"exponent must be ≥ 0, got {e}")
        result = UmbralExpr.constant(1)
        for _ in range(e):
            result = result * self
        return result


# ── umbra constructors ──

def umbra_from_family(w: WeightFamily, order: int, suppress_singletons: bool = False,
                      label: str | None = None) -> Umbra:
    """Umbra whose moments are the complete Bell values Y_j(w), j ≤ order."""
    moments = tuple(complete_bell(j, w, suppress_singletons) for j in range(order + 1))
    return Umbra(moments, label or w.label)


def umbral_eval(expr: UmbralExpr | Poly | Scalar, umbra: Umbra) -> Poly:
    expr = UmbralExpr.coerce(expr)
    if expr.degree > umbra.order:
        raise UmbralDegreeError(
            f"expression degree {expr.degree} exceeds umbra order {umbra.order}"
        )
    total = ZERO
    for k, c in enumerate(expr.coeffs):
        if c:
            total = total + c * umbra.moments[k]
    return total


def shifted_umbra(umbra: Umbra, c: Poly | Scalar) -> Umbra:
    """Umbra of (symbol + c): M'_n = Σ_j C(n,j) c^{n-j} M_j."""
    c = Poly.coerce(c)
    moments = []
    for n in range(umbra.order + 1):
        acc = ZERO
        for j in range(n + 1):
            acc = acc + umbra.moments[j] * c ** (n - j) * comb(n, j)
        moments.append(acc)
    return Umbra(tuple(moments), f"{umbra.label}+{c}")


_NAMED: dict[str, tuple[Callable[[], WeightFamily], bool]] = {
    "Y": (WeightFamily.symbolic, False),
    "P": (WeightFamily.permutation, False),   # j!
    "I": (WeightFamily.involution, False),    # involution 개수
    "M": (WeightFamily.involution, True),     # fixed-point-free involution
    "D": (WeightFamily.permutation, True),    # derangement
    "L": (WeightFamily.forest, False),        # (j+1)^{j-1}
}


def named_umbra(name: UmbraName, order: int) -> Umbra:
    """Y, P, I, M, B, D or L truncated at `order`."""
    if order < 0:
        raise DomainError(f"umbra order must be ≥ 0, got {order}")
    if name == "B":
        return umbra_from_family(WeightFamily.ones(max(order, 1)), order, label="B")
    try:
        factory, suppress = _NAMED[name]
    except KeyError:
        raise DomainError(f"unknown umbra: {name!r}") from None
    return umbra_from_family(factory(), order, suppress, label=name)


# ── substitution into ring polynomials ──

def linear_transform(p: Poly, var: int | str, image: Callable[[int], Poly | Scalar]) -> Poly:
    """Apply the linear map var^e ↦ image(e) to p, treating the other variables as scalars."""
    total = ZERO
    for e, coeff in Poly.coerce(p).coefficients_in(var).items():
        total = total + coeff * Poly.coerce(image(e))
    return total


def umbral_substitute(p: Poly, var: int | str, umbra: Umbra) -> Poly:
    """Replace var by the umbra: var^e ↦ M_e."""
    return linear_transform(p, var, umbra.moment)


def bell_transform(p: Poly, var: int | str = "y") -> Poly:
    """var^e ↦ B_e(y) (single-variable Bell polynomials)."""
    return linear_transform(p, var, bell_polynomial)


def binomial_basis_transform(p: Poly, var: int | str = "y") -> Poly:
    """var^e ↦ C(y, e) with y a ring variable."""
    yv = y()
    return linear_transform(p, var, lambda e: poly_binomial(yv, e))
