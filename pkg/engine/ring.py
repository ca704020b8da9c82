"""
Exact ring - Fraction 계수의 희소 다변수 다항식.

모든 가중치, 항등식의 양변, EGF 계수가 이 링 위에서 계산된다.
변수 순서는 t1 < t2 < ... < tN < lambda < y 이고, 정규형 출력은
graded-lex 내림차순이다 (예: "3*t1^2*t2 - 1/2*y + 4").

단항식(monomial)은 (변수 인덱스, 지수) 쌍을 인덱스 오름차순으로 담은 tuple,
상수항은 빈 tuple. 계수 0은 절대 저장하지 않으므로 구조적 동치 == 수학적 동치.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Literal, Mapping, Union

from shared.config import settings
from shared.errors import BudgetError, DomainError

Rational = Fraction
Monomial = tuple[tuple[int, int], ...]

# λ, y 는 어떤 t_j 보다 뒤에 오도록 큰 인덱스를 쓴다
LAMBDA = 1 << 20
Y = LAMBDA + 1

_VAR_RE = re.compile(r"^(?:t(\d+)|lambda|λ|y)$")
_TERM_RE = re.compile(r"([+-]?)([^+-]+)")

Scalar = Union[int, Fraction]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _order_key(mono: Monomial):
    # total degree first, then lex from the largest variable (y) downward
    return (sum(e for _, e in mono), tuple(reversed(mono)))


def variable_name(index: int) -> str:
    if index == LAMBDA:
        return "lambda"
    if index == Y:
        return "y"
    return f"t{index}"


def variable_index(name: str | int) -> int:
    """Resolve "t3" / "lambda" / "y" (or an already-numeric index) to a variable index."""
    if isinstance(name, int):
        return name
    m = _VAR_RE.match(name.strip())
    if not m:
        raise DomainError(f"unknown ring variable: {name!r}")
    if m.group(1) is not None:
        return _check_budget(int(m.group(1)))
    return Y if name.strip() == "y" else LAMBDA


def _check_budget(j: int, budget: int | None = None) -> int:
    budget = settings.PW_VARIABLE_BUDGET if budget is None else budget
    if j < 1:
        raise DomainError(f"weight variables start at t1, got t{j}")
    if j > budget:
        raise BudgetError(j, budget)
    return j


class Poly:
    """Immutable sparse polynomial over Q in t1..tN, lambda, y."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, Fraction]) -> Poly:
        # terms already canonical (Fraction, nonzero)
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Scalar) -> Poly:
        c = Fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def variable(cls, index: int, power: int = 1) -> Poly:
        if power == 0:
            return cls.constant(1)
        return cls._raw({((index, power),): Fraction(1)})

    @staticmethod
    def coerce(x: Poly | Scalar) -> Poly:
        return x if isinstance(x, Poly) else Poly.constant(x)

    # ── inspection ──

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical (graded-lex descending) order."""
        return sorted(self._terms.items(), key=lambda kv: _order_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise DomainError(f"polynomial is not a constant: {self}")
        return self._terms.get((), Fraction(0))

    def as_integer(self) -> int:
        c = self.constant_value()
        if c.denominator != 1:
            raise DomainError(f"expected an integer, got {c}")
        return c.numerator

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def degree(self, var: int | str | None = None) -> int:
        """Total degree, or the degree in one variable. Zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e for _, e in m) for m in self._terms)
        v = variable_index(var)
        return max((e for m in self._terms for w, e in m if w == v), default=0)

    def variables(self) -> set[int]:
        return {v for m in self._terms for v, _ in m}

    def coefficients_in(self, var: int | str) -> dict[int, Poly]:
        """Split into {power of var: coefficient polynomial free of var}."""
        v = variable_index(var)
        grouped: dict[int, dict[Monomial, Fraction]] = {}
        for mono, c in self._terms.items():
            e = 0
            rest = []
            for w, p in mono:
                if w == v:
                    e = p
                else:
                    rest.append((w, p))
            grouped.setdefault(e, {})[tuple(rest)] = c
        return {e: Poly._raw(terms) for e, terms in grouped.items()}

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # ── arithmetic ──

    def __add__(self, other: Poly | Scalar) -> Poly:
        if not isinstance(other, _OPERANDS):
            return NotImplemented
        other = Poly.coerce(other)
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Poly | Scalar) -> Poly:
        if not isinstance(other, _OPERANDS):
            return NotImplemented
        return self + (-Poly.coerce(other))

    def __rsub__(self, other: Poly | Scalar) -> Poly:
        if not isinstance(other, _OPERANDS):
            return NotImplemented
        return Poly.coerce(other) + (-self)

    def __mul__(self, other: Poly | Scalar) -> Poly:
        if not isinstance(other, _OPERANDS):
            return NotImplemented
        if not isinstance(other, Poly):
            c = Fraction(other)
            if not c:
                return Poly._raw({})
            return Poly._raw({m: v * c for m, v in self._terms.items()})
        if not self._terms or not other._terms:
            return Poly._raw({})
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Poly:
        if not isinstance(e, int) or e < 0:
            raise DomainError(f"exponent must be a nonnegative integer, got {e!r}")
        result = Poly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # ── equality / hashing ──

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ── substitution ──

    def substitute(self, bindings: Mapping[int | str, Poly | Scalar]) -> Poly:
        """Simultaneous substitution; unbound variables persist."""
        if not bindings:
            return self
        bound = {variable_index(k): Poly.coerce(v) for k, v in bindings.items()}
        powers: dict[tuple[int, int], Poly] = {}
        result = Poly._raw({})
        for mono, c in self._terms.items():
            kept = []
            factor = Poly.constant(c)
            for v, e in mono:
                if v in bound:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = bound[v] ** e
                    factor = factor * powers[key]
                else:
                    kept.append((v, e))
            if kept:
                factor = factor * Poly._raw({tuple(kept): Fraction(1)})
            result = result + factor
        return result

    # ── text form ──

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for i, (mono, c) in enumerate(self.terms()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            factors = [
                variable_name(v) if e == 1 else f"{variable_name(v)}^{e}" for v, e in mono
            ]
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if i == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    to_text = __str__

    def __repr__(self) -> str:
        return f"Poly({self})"

    @classmethod
    def parse(cls, text: str) -> Poly:
        """Inverse of the canonical text form."""
        src = text.replace(" ", "")
        if not src:
            raise DomainError("empty polynomial text")
        if src == "0":
            return cls._raw({})
        result = cls._raw({})
        consumed = 0
        for m in _TERM_RE.finditer(src):
            if m.start() != consumed:
                raise DomainError(f"cannot parse polynomial: {text!r}")
            consumed = m.end()
            term = Poly.constant(-1 if m.group(1) == "-" else 1)
            for factor in m.group(2).split("*"):
                if not factor:
                    raise DomainError(f"cannot parse polynomial: {text!r}")
                if factor[0].isdigit():
                    term = term * Fraction(factor)
                    continue
                name, _, exp = factor.partition("^")
                term = term * Poly.variable(variable_index(name), int(exp) if exp else 1)
            result = result + term
        if consumed != len(src):
            raise DomainError(f"cannot parse polynomial: {text!r}")
        return result


_OPERANDS = (Poly, int, Fraction)

ZERO = Poly.constant(0)
ONE = Poly.constant(1)


def t(j: int, budget: int | None = None) -> Poly:
    """Weight variable t_j; fails loudly above the budget."""
    return Poly.variable(_check_budget(j, budget))


def lam() -> Poly:
    return Poly.variable(LAMBDA)


def y() -> Poly:
    return Poly.variable(Y)


# ── functional API ──

def arith(a: Poly, b: Poly, op: Literal["add", "sub", "mul"]) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise DomainError(f"unknown ring operation: {op!r}")


def poly_pow(a: Poly, e: int) -> Poly:
    return Poly.coerce(a) ** e


def substitute(a: Poly, bindings: Mapping[int | str, Poly | Scalar]) -> Poly:
    return Poly.coerce(a).substitute(bindings)


def falling_factorial(a: Poly | Scalar, k: int) -> Poly:
    a = Poly.coerce(a)
    out = ONE
    for i in range(k):
        out = out * (a - i)
    return out


def rising_factorial(a: Poly | Scalar, k: int) -> Poly:
    """(a)_k = a(a+1)...(a+k-1)"""
    a = Poly.coerce(a)
    out = ONE
    for i in range(k):
        out = out * (a + i)
    return out


def poly_binomial(a: Poly | Scalar, k: int) -> Poly:
    """C(a, k) = a(a-1)...(a-k+1)/k! for a polynomial top argument."""
    if k < 0:
        return ZERO
    return falling_factorial(a, k) * Fraction(1, factorial(k))
