"""Pure-Python enumeration kernels.

Same call surface as the compiled module gridpos._speedups; selected as the
fallback at import time by gridpos.kernels.  The hot rank tests are
special-cased for the common small shapes (triples on a line, quadruples on
a plane) and otherwise delegate to the shared fraction-free elimination.

All kernels take an (N, d) int64 numpy array of points and index ranges for
the smallest tuple index, so work can be chunked deterministically.
"""

from __future__ import annotations

import numpy as np

from .errors import ArithmeticOverflow
from .rank import INT64_MAX, INT64_MIN, rank_of_rows

_SMALL = 1 << 30  # below this magnitude the unrolled minor tests cannot overflow


def _as_rows(pts_array) -> list[tuple[int, ...]]:
    return [tuple(row) for row in np.asarray(pts_array).tolist()]


def _rank_leq(pts: list[tuple[int, ...]], idx, kmax: int) -> bool:
    """rank(points at idx) <= kmax, exact."""
    base = pts[idx[0]]
    d = len(base)
    m = len(idx) - 1
    if m <= kmax:
        return True
    small = True
    rows = []
    for t in idx[1:]:
        p = pts[t]
        row = [p[j] - base[j] for j in range(d)]
        if small and any(not -_SMALL < x < _SMALL for x in row):
            small = False
        if not small:
            for x in row:
                if x > INT64_MAX or x < INT64_MIN:
                    raise ArithmeticOverflow("coordinate difference leaves the signed 64-bit range")
        rows.append(row)
    if small:
        if kmax == 1 and m == 2:
            # two difference vectors parallel: all 2x2 minors vanish
            a, b = rows
            return all(
                a[i] * b[j] == a[j] * b[i] for i in range(d - 1) for j in range(i + 1, d)
            )
        if kmax == 1 and m == 3:
            a, b, c = rows
            for u, v in ((a, b), (a, c), (b, c)):
                for i in range(d - 1):
                    for j in range(i + 1, d):
                        if u[i] * v[j] != u[j] * v[i]:
                            return False
            return True
        if kmax == 2 and d == 2:
            return True
        if kmax == 2 and d == 3 and m == 3:
            a, b, c = rows
            det = (
                a[0] * (b[1] * c[2] - b[2] * c[1])
                - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
            )
            return det == 0
    return rank_of_rows(rows, stop_above=kmax) <= kmax


def _combinations(n: int, m: int, lo: int, hi: int):
    """Yield index m-tuples in lex order whose smallest entry is in [lo, hi)."""
    c = list(range(m))
    for first in range(lo, min(hi, n - m + 1)):
        c[0] = first
        for i in range(1, m):
            c[i] = first + i
        while True:
            yield c
            j = m - 1
            while j >= 1 and c[j] == n - m + j:
                j -= 1
            if j == 0:
                break
            c[j] += 1
            for t in range(j + 1, m):
                c[t] = c[t - 1] + 1


def census_scan(pts_array, k: int, lo: int, hi: int, collect: bool):
    """Scan (k+2)-subsets; count those on a k-flat split by degeneracy.

    Returns (nondegenerate, degenerate, edges) where edges is an (E, k+2)
    int64 array of the non-degenerate tuples' indices (None if not collected).
    """
    pts = _as_rows(pts_array)
    n = len(pts)
    m = k + 2
    nondeg = 0
    deg = 0
    edges: list[list[int]] = []
    if n >= m:
        sub = [0] * (m - 1)
        for c in _combinations(n, m, lo, hi):
            if not _rank_leq(pts, c, k):
                continue
            degenerate = False
            for drop in range(m):
                t = 0
                for i in range(m):
                    if i != drop:
                        sub[t] = c[i]
                        t += 1
                if _rank_leq(pts, sub, k - 1):
                    degenerate = True
                    break
            if degenerate:
                deg += 1
            else:
                nondeg += 1
                if collect:
                    edges.append(list(c))
    out = None
    if collect:
        out = np.array(edges, dtype=np.int64).reshape(len(edges), m)
    return nondeg, deg, out


def count_low_rank(pts_array, size: int, rmax: int, lo: int, hi: int) -> int:
    """Count size-subsets whose affine rank is <= rmax."""
    pts = _as_rows(pts_array)
    n = len(pts)
    total = 0
    if n >= size:
        for c in _combinations(n, size, lo, hi):
            if _rank_leq(pts, c, rmax):
                total += 1
    return total


def collect_low_rank(pts_array, size: int, rmax: int):
    """All size-subsets with rank <= rmax, as an (E, size) int64 index array."""
    pts = _as_rows(pts_array)
    n = len(pts)
    found: list[list[int]] = []
    if n >= size:
        for c in _combinations(n, size, 0, n):
            if _rank_leq(pts, c, rmax):
                found.append(list(c))
    return np.array(found, dtype=np.int64).reshape(len(found), size)


def find_low_rank(pts_array, size: int, rmax: int):
    """First (lex) size-subset with rank <= rmax, or None."""
    pts = _as_rows(pts_array)
    n = len(pts)
    if n >= size:
        for c in _combinations(n, size, 0, n):
            if _rank_leq(pts, c, rmax):
                return tuple(c)
    return None
