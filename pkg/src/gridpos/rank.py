"""Exact affine rank over the integers, and the tuple degeneracy classes.

Rank is computed by fraction-free (Bareiss) elimination on the difference
vectors anchored at the first point: no rationals, no floating point.
Every stored product is required to fit in a signed 64-bit word; exceeding
that raises ArithmeticOverflow instead of silently promoting, so behaviour
is identical to the compiled kernel path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import (
    ArithmeticOverflow,
    DimensionMismatch,
    DuplicatePoints,
    EmptyInput,
    InvariantViolation,
    WrongArity,
)
from .points import Point

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)


def _checked_mul(a: int, b: int) -> int:
    p = a * b
    if p > INT64_MAX or p < INT64_MIN:
        raise ArithmeticOverflow(f"product {a}*{b} leaves the signed 64-bit range")
    return p


def rank_of_rows(rows: list[list[int]], stop_above: int | None = None) -> int:
    """Rank of an integer matrix by fraction-free elimination with pivoting.

    `rows` is modified in place.  If stop_above is given, returns early with
    stop_above + 1 as soon as the rank is known to exceed it.
    """
    m = len(rows)
    if m == 0:
        return 0
    d = len(rows[0])
    # cheap magnitude guard: below 2^30 the two-term Bareiss step cannot
    # overflow 64 bits, so per-product checks are skipped
    small = all(-(1 << 30) < x < (1 << 30) for row in rows for x in row)
    piv = 0
    prev = 1
    for col in range(d):
        if piv == m:
            break
        pr = -1
        for i in range(piv, m):
            if rows[i][col] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != piv:
            rows[piv], rows[pr] = rows[pr], rows[piv]
        p = rows[piv][col]
        prow = rows[piv]
        for i in range(piv + 1, m):
            row = rows[i]
            a = row[col]
            if small:
                for j in range(col + 1, d):
                    num = p * row[j] - a * prow[j]
                    q, rem = divmod(num, prev)
                    if rem:
                        raise InvariantViolation("nonexact division in fraction-free step")
                    row[j] = q
            else:
                for j in range(col + 1, d):
                    num = _checked_mul(p, row[j]) - _checked_mul(a, prow[j])
                    if num > INT64_MAX or num < INT64_MIN:
                        raise ArithmeticOverflow("difference leaves the signed 64-bit range")
                    q, rem = divmod(num, prev)
                    if rem:
                        raise InvariantViolation("nonexact division in fraction-free step")
                    row[j] = q
            row[col] = 0
        small = small and -(1 << 30) < p < (1 << 30) and all(
            -(1 << 30) < x < (1 << 30) for i in range(piv + 1, m) for x in rows[i]
        )
        prev = p
        piv += 1
        if stop_above is not None and piv > stop_above:
            return piv
    return piv


def difference_rows(points: Sequence[Point]) -> list[list[int]]:
    """Difference vectors of the points against the first one."""
    base = points[0]
    rows = []
    for p in points[1:]:
        row = []
        for c, b in zip(p, base):
            diff = c - b
            if diff > INT64_MAX or diff < INT64_MIN:
                raise ArithmeticOverflow("coordinate difference leaves the signed 64-bit range")
            row.append(diff)
        rows.append(row)
    return rows


def affine_rank(points: Sequence[Point], stop_above: int | None = None) -> int:
    """Dimension of the affine hull of the points; 0 for a single point."""
    if len(points) == 0:
        raise EmptyInput("affine_rank of no points")
    d = len(points[0])
    for p in points:
        if len(p) != d:
            raise DimensionMismatch(f"point {p} has dimension {len(p)}, expected {d}")
    if len(points) == 1:
        return 0
    return rank_of_rows(difference_rows(points), stop_above=stop_above)


def lies_on_flat(points: Sequence[Point], k: int) -> bool:
    """True iff the points lie on a common k-dimensional affine subspace."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return affine_rank(points, stop_above=k) <= k


class TupleKind(Enum):
    OFF_FLAT = "off_flat"
    DEGENERATE = "degenerate"
    NON_DEGENERATE = "non_degenerate"


@dataclass(frozen=True)
class TupleClass:
    kind: TupleKind
    witness: Optional[tuple[Point, ...]] = None


def classify_tuple(points: Sequence[Point], k: int) -> TupleClass:
    """Classify a (k+2)-point set with respect to k-flat incidence.

    OFF_FLAT when the set does not fit on a k-flat.  On a k-flat, the set is
    DEGENERATE when some j-subset (3 <= j <= k+1) lies on a (j-2)-flat, else
    NON_DEGENERATE.  Detection uses the equivalent (k+1)-subset test: some
    (k+1)-subset of rank <= k-1; a degenerate result carries the smallest
    witness subset.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    pts = tuple(tuple(p) for p in points)
    if len(pts) != k + 2:
        raise WrongArity(f"expected {k + 2} points, got {len(pts)}")
    if len(set(pts)) != len(pts):
        raise DuplicatePoints("tuple points must be distinct")
    if not lies_on_flat(pts, k):
        return TupleClass(TupleKind.OFF_FLAT)
    degenerate = any(
        affine_rank(sub, stop_above=k - 1) <= k - 1
        for sub in itertools.combinations(pts, k + 1)
    )
    if not degenerate:
        return TupleClass(TupleKind.NON_DEGENERATE)
    for j in range(3, k + 2):
        for sub in itertools.combinations(sorted(pts), j):
            if affine_rank(sub, stop_above=j - 2) <= j - 2:
                return TupleClass(TupleKind.DEGENERATE, witness=sub)
    raise InvariantViolation("degeneracy detected but no witness subset found")
