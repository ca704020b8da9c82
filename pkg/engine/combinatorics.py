"""
Combinatorics - 가중치 family, partial/complete Bell 다항식, 보조 수열.

Y_n(w) = Σ_r B_{n,r}(w) 는 각 블록 크기 j 에 가중치 w(j) 를 준
[n] 의 집합분할 가중합이다. singleton 억제(w(1)=0) 버전은
t1 을 0 으로 두고 같은 점화식을 돈다.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, Literal, Sequence

from pydantic import BaseModel, ConfigDict, field_validator

from engine.ring import ONE, ZERO, Poly, Scalar, rising_factorial, t
from engine.ring import y as y_var
from shared.errors import DomainError, WeightIndexError
from shared.models import FamilyKind

SequenceName = Literal[
    "derangement", "involution_count", "fpf_involution", "bell_number", "fibonacci", "tree_count",
]


# ── Weight families ──

class WeightFamily(BaseModel):
    """j ↦ w(j). Hashable, so it can key memo tables."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: FamilyKind
    custom: tuple[Fraction, ...] | None = None

    @field_validator("custom", mode="before")
    @classmethod
    def _to_fractions(cls, v):
        if v is None:
            return None
        return tuple(Fraction(x) for x in v)

    # ── constructors ──

    @classmethod
    def symbolic(cls) -> WeightFamily:
        return cls(kind=FamilyKind.SYMBOLIC)

    @classmethod
    def permutation(cls) -> WeightFamily:
        return cls(kind=FamilyKind.PERMUTATION)

    @classmethod
    def involution(cls) -> WeightFamily:
        return cls(kind=FamilyKind.INVOLUTION)

    @classmethod
    def forest(cls) -> WeightFamily:
        return cls(kind=FamilyKind.FOREST)

    @classmethod
    def from_values(cls, values: Sequence[Scalar]) -> WeightFamily:
        return cls(kind=FamilyKind.CUSTOM, custom=tuple(values))

    @classmethod
    def ones(cls, length: int) -> WeightFamily:
        """w ≡ 1 on sizes 1..length (Bell numbers)."""
        return cls.from_values([1] * length)

    @classmethod
    def from_name(cls, name: str) -> WeightFamily:
        try:
            kind = FamilyKind(name)
        except ValueError:
            raise DomainError(f"unknown weight family: {name!r}") from None
        if kind == FamilyKind.CUSTOM:
            raise DomainError("custom families need explicit weights")
        return cls(kind=kind)

    # ── evaluation ──

    @property
    def is_symbolic(self) -> bool:
        return self.kind == FamilyKind.SYMBOLIC

    @property
    def label(self) -> str:
        if self.kind == FamilyKind.CUSTOM:
            return "custom[" + ",".join(str(c) for c in self.custom or ()) + "]"
        return self.kind.value

    def weight(self, j: int) -> Poly:
        if j < 1:
            raise DomainError(f"block sizes start at 1, got {j}")
        match self.kind:
            case FamilyKind.SYMBOLIC:
                return t(j)
            case FamilyKind.PERMUTATION:
                return Poly.constant(factorial(j - 1))
            case FamilyKind.INVOLUTION:
                return ONE if j <= 2 else ZERO
            case FamilyKind.FOREST:
                return Poly.constant(j ** (j - 1))
            case FamilyKind.CUSTOM:
                values = self.custom or ()
                if j > len(values):
                    raise WeightIndexError(
                        f"custom family has {len(values)} weights, size {j} requested"
                    )
                return Poly.constant(values[j - 1])
        raise DomainError(f"unhandled family: {self.kind}")


# ── Bell polynomials ──

@lru_cache(maxsize=None)
def partial_bell(n: int, r: int, w: WeightFamily) -> Poly:
    """B_{n,r}(w): partitions of [n] into exactly r blocks, weighted."""
    if n < 0 or r < 0:
        raise DomainError(f"partial_bell needs n, r ≥ 0, got ({n}, {r})")
    if n == 0 and r == 0:
        return ONE
    if n == 0 or r == 0 or r > n:
        return ZERO
    total = ZERO
    # 원소 n 이 들어간 블록의 크기 j 로 분할
    for j in range(1, n - r + 2):
        rest = partial_bell(n - j, r - 1, w)
        if rest:
            total = total + rest * w.weight(j) * comb(n - 1, j - 1)
    return total


_complete_tables: dict[tuple[WeightFamily, bool], list[Poly]] = {}


def complete_bell(n: int, w: WeightFamily, suppress_singletons: bool = False) -> Poly:
    """Y_n(w); with suppress_singletons, Y_n(0, w(2), w(3), ...)."""
    if n < 0:
        raise DomainError(f"complete_bell needs n ≥ 0, got {n}")
    table = _complete_tables.setdefault((w, suppress_singletons), [ONE])
    while len(table) <= n:
        m = len(table) - 1
        # Y_{m+1} = Σ_k C(m,k) w(k+1) Y_{m-k}
        total = ZERO
        for k in range(m + 1):
            if k == 0 and suppress_singletons:
                continue
            wk = w.weight(k + 1)
            if wk:
                total = total + wk * table[m - k] * comb(m, k)
        table.append(total)
    return table[n]


def clear_caches() -> None:
    """Drop memo tables (worker reinitialisation, budget changes in tests)."""
    partial_bell.cache_clear()
    _complete_tables.clear()
    _sequence_tables.clear()
    _bell_polys.clear()


def integer_partitions(n: int, parts: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as non-increasing tuples, optionally with exactly `parts` parts."""

    def helper(remaining: int, largest: int, prefix: tuple[int, ...]):
        if remaining == 0:
            if parts is None or len(prefix) == parts:
                yield prefix
            return
        if parts is not None and len(prefix) >= parts:
            return
        for size in range(min(remaining, largest), 0, -1):
            yield from helper(remaining - size, size, prefix + (size,))

    if n == 0:
        if parts in (None, 0):
            yield ()
        return
    yield from helper(n, n, ())


def partial_bell_by_kappa(n: int, r: int, w: WeightFamily) -> Poly:
    """B_{n,r} as the explicit sum over block-size multisets (cross-check of the recurrence)."""
    if n < 0 or r < 0:
        raise DomainError(f"partial_bell needs n, r ≥ 0, got ({n}, {r})")
    total = ZERO
    for sizes in integer_partitions(n, r):
        counts: dict[int, int] = {}
        for s in sizes:
            counts[s] = counts.get(s, 0) + 1
        denom = 1
        term = ONE
        for j, rj in counts.items():
            denom *= factorial(rj) * factorial(j) ** rj
            term = term * w.weight(j) ** rj
        total = total + term * Fraction(factorial(n), denom)
    return total


# ── Auxiliary sequences ──

_sequence_tables: dict[str, list[int]] = {}


def _extend(name: str, n: int, step) -> int:
    table = _sequence_tables.setdefault(name, [])
    while len(table) <= n:
        table.append(step(len(table), table))
    return table[n]


def _derangement_step(i: int, d: list[int]) -> int:
    if i == 0:
        return 1
    if i == 1:
        return 0
    # D_{k+2} = (k+1)(D_k + D_{k+1})
    return (i - 1) * (d[i - 2] + d[i - 1])


def _involution_step(i: int, a: list[int]) -> int:
    # I_n = I_{n-1} + (n-1) I_{n-2}
    if i < 2:
        return 1
    return a[i - 1] + (i - 1) * a[i - 2]


def _fpf_step(i: int, a: list[int]) -> int:
    # M_n = (n-1) M_{n-2}, M_0 = 1, M_1 = 0
    if i == 0:
        return 1
    if i == 1:
        return 0
    return (i - 1) * a[i - 2]


def _fibonacci_step(i: int, f: list[int]) -> int:
    # coefficients of 1/(1 - x - x^2): F_0 = F_1 = 1
    if i < 2:
        return 1
    return f[i - 1] + f[i - 2]


def _bell_step(i: int, b: list[int]) -> int:
    # B_{n+1} = Σ C(n,k) B_k
    if i == 0:
        return 1
    return sum(comb(i - 1, k) * b[k] for k in range(i))


_STEPS = {
    "derangement": _derangement_step,
    "involution_count": _involution_step,
    "fpf_involution": _fpf_step,
    "bell_number": _bell_step,
    "fibonacci": _fibonacci_step,
}


def sequence(name: SequenceName, n: int) -> Fraction:
    """Named auxiliary sequence at index n."""
    if n < 0:
        raise DomainError(f"sequence index must be ≥ 0, got {n}")
    if name == "tree_count":
        # (n+1)^{n-1}; n = 0 gives 1
        return Fraction(n + 1) ** (n - 1)
    step = _STEPS.get(name)
    if step is None:
        raise DomainError(f"unknown sequence: {name!r}")
    return Fraction(_extend(name, n, step))


def double_factorial_odd(k: int) -> int:
    """(2k-1)!!, with (-1)!! = 1."""
    out = 1
    for i in range(1, 2 * k, 2):
        out *= i
    return out


def bessel_number(n: int, j: int) -> int:
    """Bessel number B(n, j) = n! / (2^{n-j} (n-j)! (2j-n)!); zero outside ⌈n/2⌉ ≤ j ≤ n."""
    if n < 0 or j < (n + 1) // 2 or j > n:
        return 0
    return factorial(n) // (2 ** (n - j) * factorial(n - j) * factorial(2 * j - n))


_bell_polys: list[Poly] = []


def bell_polynomial(k: int) -> Poly:
    """Single-variable Bell (Touchard) polynomial B_k(y) = Σ_r S(k, r) y^r."""
    if k < 0:
        raise DomainError(f"bell_polynomial needs k ≥ 0, got {k}")
    if not _bell_polys:
        _bell_polys.append(ONE)
    yv = y_var()
    while len(_bell_polys) <= k:
        n = len(_bell_polys) - 1
        # B_{n+1}(y) = y Σ_i C(n,i) B_i(y)
        acc = ZERO
        for i in range(n + 1):
            acc = acc + _bell_polys[i] * comb(n, i)
        _bell_polys.append(yv * acc)
    return _bell_polys[k]


def charlier(n: int, u: Poly | Scalar, v: Poly | Scalar) -> Poly:
    """C_n(u, v) = Σ_k C(n,k) (u)_k v^{n-k}, with (u)_k the rising factorial."""
    if n < 0:
        raise DomainError(f"charlier needs n ≥ 0, got {n}")
    v = Poly.coerce(v)
    total = ZERO
    for k in range(n + 1):
        total = total + rising_factorial(u, k) * v ** (n - k) * comb(n, k)
    return total
