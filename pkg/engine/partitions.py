"""
Set partitions of [n] - restricted growth string 열거와 brute-force oracle.

오라클은 정의 그대로 A_{n,k}(w) 를 계산한다: [n+1] 의 모든 분할 중
최대 singleton 이 k+1 인 것들의 가중치 합. 점화식 엔진의 독립 검증용.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from engine.combinatorics import WeightFamily
from engine.ring import ONE, ZERO, Poly, t
from shared.config import settings
from shared.errors import DomainError, OracleCapError
from shared.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class SetPartition:
    """A partition of [n] stored as its restricted growth string (0-based block labels)."""

    rgs: tuple[int, ...]

    def __post_init__(self):
        top = -1
        for a in self.rgs:
            if a < 0 or a > top + 1:
                raise DomainError(f"not a restricted growth string: {self.rgs}")
            top = max(top, a)

    @property
    def n(self) -> int:
        return len(self.rgs)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Blocks in order of their least element, elements 1-based."""
        out: list[list[int]] = []
        for i, a in enumerate(self.rgs, start=1):
            if a == len(out):
                out.append([])
            out[a].append(i)
        return tuple(tuple(b) for b in out)

    def block_sizes(self) -> tuple[int, ...]:
        """Sorted multiset of block sizes."""
        return tuple(sorted(Counter(self.rgs).values()))

    def __str__(self) -> str:
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)


def enumerate_partitions(n: int, cap: int | None = None) -> Iterator[SetPartition]:
    """All partitions of [n] in lexicographic RGS order (Bell(n) of them)."""
    cap = settings.PW_ORACLE_CAP if cap is None else cap
    if n < 1:
        raise DomainError(f"enumerate needs n ≥ 1, got {n}")
    if n > cap:
        raise OracleCapError(n, cap)

    a = [0] * n
    # m[i] = max(a[0..i])
    m = [0] * n
    while True:
        yield SetPartition(tuple(a))
        i = n - 1
        while i > 0 and a[i] == m[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def weight(p: SetPartition, w: WeightFamily) -> Poly:
    out = ONE
    for size in p.block_sizes():
        out = out * w.weight(size)
    return out


def largest_singleton(p: SetPartition) -> int | None:
    """Largest element whose block is a singleton, or None."""
    counts = Counter(p.rgs)
    for i in range(p.n - 1, -1, -1):
        if counts[p.rgs[i]] == 1:
            return i + 1
    return None


@lru_cache(maxsize=32)
def _oracle_row(n: int, cap: int) -> tuple[Poly, ...]:
    # 블록 크기 multiset 별로 개수를 모은 뒤 한 번에 다항식으로 만든다
    buckets: list[Counter] = [Counter() for _ in range(n + 1)]
    seen = 0
    for p in enumerate_partitions(n + 1, cap):
        seen += 1
        s = largest_singleton(p)
        if s is None:
            continue
        buckets[s - 1][p.block_sizes()] += 1
    row = []
    for bucket in buckets:
        total = ZERO
        for sizes, count in bucket.items():
            term = Poly.constant(count)
            for size in sizes:
                term = term * t(size)
            total = total + term
        row.append(total)
    logger.debug("oracle_row_enumerated", n=n, partitions=seen)
    return tuple(row)


def oracle_A(n: int, k: int, w: WeightFamily, cap: int | None = None) -> Poly:
    """A_{n,k}(w) by brute force over partitions of [n+1]."""
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"oracle_A needs 0 ≤ k ≤ n, got (n={n}, k={k})")
    cap = settings.PW_ORACLE_CAP if cap is None else cap
    if n + 1 > cap:
        raise OracleCapError(n + 1, cap)
    value = _oracle_row(n, cap)[k]
    if w.is_symbolic:
        return value
    return value.substitute({j: w.weight(j) for j in value.variables()})
