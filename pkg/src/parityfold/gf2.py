"""Bit-level linear algebra over F2 using int bitsets.

Vectors in F2^n are ints whose bit i is the coefficient of variable
x_{i+1}; n is capped at 24 so every mask fits comfortably in one word
and exhaustive checks over 2^n stay desk-scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

MAX_DIMENSION = 24


class DimensionMismatchError(ValueError):
    """A vector has bits set at positions >= n, or dimensions disagree."""


def check_vector(v: int, n: int) -> None:
    if not 0 <= n <= MAX_DIMENSION:
        raise DimensionMismatchError(f"dimension {n} outside [0, {MAX_DIMENSION}]")
    if v < 0 or v >> n:
        raise DimensionMismatchError(f"mask {v:#x} does not fit in {n} bits")


@dataclass(frozen=True)
class Gf2Basis:
    """Reduced row-echelon basis: leading bits strictly decreasing, and no
    row has a bit at another row's leading position."""

    n: int
    rows: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def __post_init__(self) -> None:
        lead = 1 << self.n
        for row in self.rows:
            check_vector(row, self.n)
            if row == 0 or row >= lead:
                raise ValueError("basis rows must be nonzero with decreasing leading bits")
            lead = 1 << (row.bit_length() - 1)


def _reduce(v: int, rows: Iterable[int]) -> int:
    # rows are in decreasing leading-bit order, so one pass suffices
    for row in rows:
        if (v >> (row.bit_length() - 1)) & 1:
            v ^= row
    return v


def row_reduce(vectors: Iterable[int], n: int) -> Gf2Basis:
    """Reduced row-echelon basis of the span of ``vectors`` in F2^n."""
    rows: list[int] = []
    for v in vectors:
        check_vector(v, n)
        v = _reduce(v, rows)
        if v == 0:
            continue
        lead = v.bit_length() - 1
        rows = [r ^ v if (r >> lead) & 1 else r for r in rows]
        rows.append(v)
        rows.sort(reverse=True)
    return Gf2Basis(n, tuple(rows))


def in_span(v: int, basis: Gf2Basis) -> bool:
    check_vector(v, basis.n)
    return _reduce(v, basis.rows) == 0


def coset_label(v: int, basis: Gf2Basis) -> int:
    """Canonical representative of the coset span(basis) + v.

    Full reduction against a reduced echelon basis yields the unique
    minimal coset element, so labels of u and v agree exactly when
    u + v lies in the span.
    """
    check_vector(v, basis.n)
    return _reduce(v, basis.rows)


def extend_basis(basis: Gf2Basis, v: int) -> Gf2Basis | None:
    """Basis of span(basis) + v, or None when v already lies in the span."""
    check_vector(v, basis.n)
    red = _reduce(v, basis.rows)
    if red == 0:
        return None
    lead = red.bit_length() - 1
    rows = [r ^ red if (r >> lead) & 1 else r for r in basis.rows]
    rows.append(red)
    rows.sort(reverse=True)
    return Gf2Basis(basis.n, tuple(rows))
