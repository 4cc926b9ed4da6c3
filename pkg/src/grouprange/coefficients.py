"""Per-part-size range constants and their CSV interchange format.

For a subsample of j iid draws with scale parameter sigma, write the
range as R_j.  The table stores, per part size j, the scale-free
constants

    d_j   = E[R_j] / sigma          (expected standardized range)
    k_sq_j = Var(R_j) / sigma**2    (variance of the standardized range)
    C_j   = d_j**2 / k_sq_j         (efficiency of a size-j subsample)

C_j is the profit a part of size j contributes to the allocation
objective, and 1 / sum(C) is the variance factor of the resulting
unbiased estimator, so everything downstream hangs off these entries.

For the exponential distribution the spacings of the order statistics
are independent exponentials with rates n-1, n-2, ..., 1, which gives
exact harmonic values:

    d_j = H(j-1, 1),    k_sq_j = H(j-1, 2).

Tables for other distributions load from CSV with header ``j,d,k_sq``,
one row per part size starting at j = 2 with no gaps.  Values may be
written as exact fractions ("5/4") or decimal literals ("1.25"); both
parse exactly, never through a float.  C is always recomputed from d
and k_sq, so a stored C column, if present, is ignored.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import IO, Union

__all__ = [
    "CoefficientEntry",
    "CoefficientTable",
    "CoefficientTableError",
    "exponential_table",
    "load_table",
    "export_table",
]

_HEADER = ("j", "d", "k_sq")


class CoefficientTableError(ValueError):
    """Raised when a coefficient CSV cannot be parsed or violates the
    table invariants.  Messages include the offending row number."""


@dataclass(frozen=True)
class CoefficientEntry:
    """Constants for one part size."""

    j: int
    d: Fraction      # expected standardized range, > 0
    k_sq: Fraction   # variance of the standardized range, > 0
    c: Fraction      # efficiency d**2 / k_sq


@dataclass(frozen=True)
class CoefficientTable:
    """Immutable map from part size j (contiguous from 2) to constants."""

    distribution_label: str
    entries: tuple[CoefficientEntry, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("a coefficient table needs at least the j = 2 entry")
        expected = 2
        for entry in self.entries:
            if entry.j != expected:
                raise ValueError(
                    f"part sizes must be contiguous from 2: expected {expected}, got {entry.j}"
                )
            if entry.d <= 0:
                raise ValueError(f"j = {entry.j}: non-positive expected range d = {entry.d}")
            if entry.k_sq <= 0:
                raise ValueError(f"j = {entry.j}: non-positive variance k_sq = {entry.k_sq}")
            if entry.c != entry.d * entry.d / entry.k_sq:
                raise ValueError(f"j = {entry.j}: c must equal d**2 / k_sq")
            expected += 1

    @cached_property
    def _by_part(self) -> dict[int, CoefficientEntry]:
        return {entry.j: entry for entry in self.entries}

    @property
    def max_part(self) -> int:
        return self.entries[-1].j

    def covers(self, j: int) -> bool:
        return 2 <= j <= self.max_part

    def entry(self, j: int) -> CoefficientEntry:
        try:
            return self._by_part[j]
        except KeyError:
            raise ValueError(
                f"part size {j} not covered (table spans 2..{self.max_part})"
            ) from None

    def d(self, j: int) -> Fraction:
        return self.entry(j).d

    def k_sq(self, j: int) -> Fraction:
        return self.entry(j).k_sq

    def c(self, j: int) -> Fraction:
        return self.entry(j).c


def exponential_table(max_part: int) -> CoefficientTable:
    """Exact table for the exponential distribution, parts 2..max_part."""
    from .exactmath import generalized_harmonic

    if max_part < 2:
        raise ValueError(f"max_part must be >= 2, got {max_part}")
    entries = []
    for j in range(2, max_part + 1):
        d = generalized_harmonic(j - 1, 1)
        k_sq = generalized_harmonic(j - 1, 2)
        entries.append(CoefficientEntry(j, d, k_sq, d * d / k_sq))
    return CoefficientTable("exponential", tuple(entries))


def _parse_rational(text: str, row: int, column: str) -> Fraction:
    try:
        # Fraction parses both "p/q" and decimal literals exactly.
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise CoefficientTableError(
            f"row {row}: cannot parse {column} value {text!r} as a rational"
        ) from None


def load_table(
    source: Union[bytes, str, IO[bytes], IO[str]],
    label: str = "custom",
) -> CoefficientTable:
    """Parse a coefficient CSV (UTF-8, header ``j,d,k_sq``).

    Row numbers in error messages count the header as row 1.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw

    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader]
    if not rows:
        raise CoefficientTableError("row 1: missing header (expected j,d,k_sq)")

    header = tuple(cell.strip() for cell in rows[0])
    # a trailing c column is tolerated and ignored
    if header[:3] != _HEADER or len(header) > 4:
        raise CoefficientTableError(
            f"row 1: bad header {','.join(header)!r} (expected j,d,k_sq)"
        )

    entries = []
    expected_j = 2
    for index, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < 3:
            raise CoefficientTableError(f"row {index}: expected 3 columns, got {len(row)}")
        try:
            j = int(row[0].strip())
        except ValueError:
            raise CoefficientTableError(
                f"row {index}: cannot parse part size {row[0]!r}"
            ) from None
        if j != expected_j:
            raise CoefficientTableError(
                f"row {index}: part sizes must be contiguous from 2, expected {expected_j}, got {j}"
            )
        d = _parse_rational(row[1], index, "d")
        k_sq = _parse_rational(row[2], index, "k_sq")
        if d <= 0:
            raise CoefficientTableError(f"row {index}: non-positive expected range d = {d}")
        if k_sq <= 0:
            raise CoefficientTableError(f"row {index}: non-positive variance k_sq = {k_sq}")
        entries.append(CoefficientEntry(j, d, k_sq, d * d / k_sq))
        expected_j += 1

    if not entries:
        raise CoefficientTableError("row 2: no data rows")
    return CoefficientTable(label, tuple(entries))


def export_table(table: CoefficientTable) -> bytes:
    """Canonical CSV bytes: header, then one ``j,p/q,p/q`` row per part,
    LF line endings, UTF-8.  load_table(export_table(t)) round-trips."""
    lines = [",".join(_HEADER)]
    for entry in table.entries:
        lines.append(f"{entry.j},{entry.d},{entry.k_sq}")
    return ("\n".join(lines) + "\n").encode("utf-8")
