"""Admissible integer partitions: representation, enumeration, counting.

A partition of n is *admissible* when every part is at least 2.  A
subsample of size 1 has range zero, so it contributes nothing to a
weighted-range estimator; admissibility is exactly the condition that
every subsample carries information.

Partitions are stored in frequency form (part size -> multiplicity)
and rendered as descending part tuples, e.g. 22 = (5, 5, 4, 4, 4).
The number of admissible partitions is P(n) = p(n) - p(n-1), where
p(n) is the unrestricted partition count: striking the largest part
from a partition with a part equal to 1 gives a bijection between
partitions of n containing a 1 and partitions of n-1.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Partition",
    "enumerate_admissible",
    "count_admissible",
    "count_unrestricted",
    "asymptotic_admissible",
    "asymptotic_unrestricted",
]


@dataclass(frozen=True)
class Partition:
    """An admissible partition of ``n``, frequency representation.

    ``frequencies`` is a tuple of (part, multiplicity) pairs sorted by
    strictly increasing part size, which makes instances hashable and
    canonical: two equal partitions compare equal.
    """

    n: int
    frequencies: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"admissible partitions need n >= 2, got {self.n}")
        total = 0
        previous = 1
        for part, mult in self.frequencies:
            if part < 2:
                raise ValueError(f"part {part} is inadmissible (every part must be >= 2)")
            if part <= previous:
                raise ValueError("frequencies must be sorted by strictly increasing part")
            if mult < 1:
                raise ValueError(f"multiplicity {mult} for part {part} must be >= 1")
            total += part * mult
            previous = part
        if total != self.n:
            raise ValueError(f"parts sum to {total}, expected n = {self.n}")

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        seq = list(parts)
        freq: dict[int, int] = {}
        for part in seq:
            freq[part] = freq.get(part, 0) + 1
        return cls(sum(seq), tuple(sorted(freq.items())))

    @classmethod
    def from_frequencies(cls, frequencies: Mapping[int, int]) -> "Partition":
        items = tuple(sorted((p, m) for p, m in frequencies.items() if m != 0))
        return cls(sum(p * m for p, m in items), items)

    @property
    def parts(self) -> tuple[int, ...]:
        """Parts in canonical descending order, e.g. (5, 5, 4, 4, 4)."""
        out: list[int] = []
        for part, mult in reversed(self.frequencies):
            out.extend([part] * mult)
        return tuple(out)

    @property
    def length(self) -> int:
        """Number of parts (subsamples), counted with multiplicity."""
        return sum(mult for _, mult in self.frequencies)

    def multiplicity(self, part: int) -> int:
        for p, m in self.frequencies:
            if p == part:
                return m
        return 0

    def frequency_map(self) -> dict[int, int]:
        return dict(self.frequencies)

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


def enumerate_admissible(n: int) -> Iterator[Partition]:
    """Yield every admissible partition of n exactly once.

    Order: descending lexicographic on the descending part tuples, so
    (n) comes first and (2, 2, ..., 2) last when n is even.  Intended
    for moderate n; the count grows subexponentially but fast.
    """
    if n < 2:
        raise ValueError(f"enumeration needs n >= 2, got {n}")

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for k in range(min(cap, remaining), 1, -1):
            # a leftover of exactly 1 can never be completed
            if remaining - k == 1:
                continue
            for rest in rec(remaining - k, k):
                yield (k, *rest)

    for parts in rec(n, n):
        yield Partition.from_parts(parts)


_p_lock = threading.Lock()
_p_table: list[int] = [1]  # p(0) = 1


def count_unrestricted(n: int) -> int:
    """Exact unrestricted partition count p(n).

    Uses Euler's pentagonal-number recurrence
        p(n) = sum_{k>=1} (-1)^(k+1) [p(n - k(3k-1)/2) + p(n - k(3k+1)/2)],
    memoized as a prefix table, O(n**1.5) integer additions overall.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    with _p_lock:
        while len(_p_table) <= n:
            m = len(_p_table)
            total = 0
            k = 1
            while True:
                g1 = k * (3 * k - 1) // 2
                if g1 > m:
                    break
                sign = 1 if k % 2 else -1
                total += sign * _p_table[m - g1]
                g2 = k * (3 * k + 1) // 2
                if g2 <= m:
                    total += sign * _p_table[m - g2]
                k += 1
            _p_table.append(total)
        return _p_table[n]


def count_admissible(n: int) -> int:
    """Exact number of partitions of n with every part >= 2.

    P(n) = p(n) - p(n-1); P(0) = 1 counts the empty partition.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return 1
    return count_unrestricted(n) - count_unrestricted(n - 1)


def asymptotic_admissible(n: int) -> float:
    """First-order growth estimate of the admissible count:
    pi / (12 sqrt(2) n**1.5) * exp(pi sqrt(2n/3))."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.pi / (12 * math.sqrt(2) * n**1.5) * math.exp(math.pi * math.sqrt(2 * n / 3))


def asymptotic_unrestricted(n: int) -> float:
    """Hardy-Ramanujan estimate of p(n): exp(pi sqrt(2n/3)) / (4 sqrt(3) n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.exp(math.pi * math.sqrt(2 * n / 3)) / (4 * math.sqrt(3) * n)
