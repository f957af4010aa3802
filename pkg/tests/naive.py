"""Independent oracles for the test suite.

Nothing here may call into the library's counting/elimination paths: ranks
are recomputed over exact rationals, censuses by direct definition-level
loops, and triviality by literal partition search.  These exist so that
every library result is checked against a second, independently written
route.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def rational_rank(points) -> int:
    """Affine rank via Gaussian elimination over Fractions."""
    points = [tuple(p) for p in points]
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[Fraction(c - b) for c, b in zip(p, base)] for p in points[1:]]
    cols = len(base)
    piv = 0
    for col in range(cols):
        sel = None
        for i in range(piv, len(rows)):
            if rows[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[piv], rows[sel] = rows[sel], rows[piv]
        for i in range(piv + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / rows[piv][col]
                for j in range(col, cols):
                    rows[i][j] -= f * rows[piv][j]
        piv += 1
    return piv


def naive_classify(points, k: int) -> str:
    """'off_flat' / 'degenerate' / 'non_degenerate' by the subset definition."""
    points = [tuple(p) for p in points]
    if rational_rank(points) > k:
        return "off_flat"
    for j in range(3, k + 2):
        for sub in itertools.combinations(points, j):
            if rational_rank(sub) <= j - 2:
                return "degenerate"
    return "non_degenerate"


def naive_census_generic(points, k: int) -> int:
    """Count non-degenerate flat-incident (k+2)-subsets; rational arithmetic."""
    points = [tuple(p) for p in points]
    return sum(
        1
        for sub in itertools.combinations(points, k + 2)
        if naive_classify(sub, k) == "non_degenerate"
    )


def _collinear(p, q, r) -> bool:
    d = len(p)
    for i in range(d - 1):
        for j in range(i + 1, d):
            if (q[i] - p[i]) * (r[j] - p[j]) != (q[j] - p[j]) * (r[i] - p[i]):
                return False
    return True


def naive_census_fast(points, d: int, k: int) -> int:
    """Definition-level enumerator specialized for d in {2,3}, k in {1,2}.

    k=1 counts collinear triples; k=2 counts coplanar quadruples with no
    collinear triple (in the plane every quadruple is coplanar).
    """
    pts = [tuple(p) for p in points]
    if k == 1:
        return sum(1 for a, b, c in itertools.combinations(pts, 3) if _collinear(a, b, c))
    if k != 2 or d not in (2, 3):
        raise ValueError("fast oracle covers d in {2,3}, k in {1,2} only")
    count = 0
    if d == 2:
        for a, b, c, e in itertools.combinations(pts, 4):
            if _collinear(a, b, c) or _collinear(a, b, e) or _collinear(a, c, e) or _collinear(b, c, e):
                continue
            count += 1
        return count
    for a, b, c, e in itertools.combinations(pts, 4):
        ux, uy, uz = b[0] - a[0], b[1] - a[1], b[2] - a[2]
        vx, vy, vz = c[0] - a[0], c[1] - a[1], c[2] - a[2]
        wx, wy, wz = e[0] - a[0], e[1] - a[1], e[2] - a[2]
        det = (
            ux * (vy * wz - vz * wy)
            - uy * (vx * wz - vz * wx)
            + uz * (vx * wy - vy * wx)
        )
        if det != 0:
            continue
        if _collinear(a, b, c) or _collinear(a, b, e) or _collinear(a, c, e) or _collinear(b, c, e):
            continue
        count += 1
    return count


def set_partitions(items):
    """All set partitions of a list (Bell-number many; keep inputs small)."""
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1 :]
        yield [[head]] + part


def trivial_by_partition_search(values, coeffs) -> bool:
    """Literal existence-of-a-partition form of the triviality definition."""
    values = [tuple(v) if not isinstance(v, int) else (v,) for v in values]
    n = len(values)
    for part in set_partitions(range(n)):
        ok = True
        for block in part:
            # same value within a block, different across blocks
            v0 = values[block[0]]
            if any(values[i] != v0 for i in block):
                ok = False
                break
        if not ok:
            continue
        # "iff": equal values must share a block
        rep = {}
        for block in part:
            v0 = values[block[0]]
            if v0 in rep:
                ok = False
                break
            rep[v0] = block
        if not ok:
            continue
        if all(sum(coeffs[i] for i in block) == 0 for block in part):
            return True
    return False


def delta_single_expression(delta, k, nv, ne, tau) -> Fraction:
    """One-line evaluator of the weighted degree functional."""
    from math import comb

    tau = Fraction(tau)
    return Fraction(2 ** (comb(k + 2, 2) - 1) * nv, (k + 2) * ne) * sum(
        Fraction(delta[l]) / (tau ** (l - 1) * 2 ** comb(l - 1, 2)) for l in range(2, k + 3)
    )
