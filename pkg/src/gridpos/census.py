"""Sum-bucket indexes, pair classification, and exact tuple censuses.

Two routes count the non-degenerate (k+2)-point subsets of V that lie on a
k-flat:

* exhaustive: enumerate every (k+2)-subset and classify it (ground truth);
* pair-based: bucket the (k/2+1)-subsets by coordinate-wise sum, classify
  the equal-sum pairs, and collect good pairs' unions.  This only discovers
  tuples that split into two disjoint equal-sum halves, so it is a lower
  bound, not an exact count.

Also computed here: the per-subset degree profile of the incidence
hypergraph (max number of counted tuples through any fixed 2-, 3-, ...
point subset) and the weighted degree functional used to decide whether a
container-style argument applies at given tau.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .budget import resolve_budget
from .errors import (
    ArityTooLarge,
    BudgetExceeded,
    InvariantViolation,
    OddKInPairMode,
    SumMismatch,
    TauOutOfRange,
    WrongArity,
    ZeroEdges,
)
from . import kernels
from .points import Point, PointSet
from .rank import TupleKind, affine_rank, classify_tuple


@dataclass(frozen=True)
class SumIndex:
    r: int
    buckets: dict[Point, list[tuple[Point, ...]]]

    def sorted_items(self):
        """Buckets in lexicographic order of their sum vector."""
        return sorted(self.buckets.items())

    def total_subsets(self) -> int:
        return sum(len(v) for v in self.buckets.values())


def build_sum_index(V: PointSet, r: int) -> SumIndex:
    """Bucket the r-subsets of V by coordinate-wise sum."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if r > len(V):
        raise ArityTooLarge(f"r={r} exceeds |V|={len(V)}")
    buckets: dict[Point, list[tuple[Point, ...]]] = {}
    for sub in combinations(V.points, r):
        s = tuple(sum(c) for c in zip(*sub))
        buckets.setdefault(s, []).append(sub)
    idx = SumIndex(r, buckets)
    if idx.total_subsets() != math.comb(len(V), r):
        raise InvariantViolation("sum buckets do not partition the r-subsets")
    return idx


def count_colliding_pairs(index: SumIndex) -> int:
    """Number of unordered pairs of distinct equal-sum r-subsets."""
    return sum(math.comb(len(b), 2) for b in index.buckets.values())


class PairLabel(Enum):
    GOOD = "good"
    BAD = "bad"


def classify_pair(T1, T2, k: int) -> PairLabel:
    """Classify an equal-sum pair: good iff disjoint with non-degenerate union.

    Every bad pair's union must lie on a (k-1)-flat; that is a theorem for
    equal-sum halves, so it is asserted here on every bad classification.
    """
    if k < 2 or k % 2 != 0:
        raise OddKInPairMode("pair classification needs even k >= 2")
    r = k // 2 + 1
    T1 = tuple(tuple(p) for p in T1)
    T2 = tuple(tuple(p) for p in T2)
    if len(T1) != r or len(T2) != r:
        raise WrongArity(f"halves must have {r} points each")
    if set(T1) == set(T2):
        raise ValueError("halves must be distinct subsets")
    s1 = tuple(sum(c) for c in zip(*T1))
    s2 = tuple(sum(c) for c in zip(*T2))
    if s1 != s2:
        raise SumMismatch(f"sums differ: {s1} != {s2}")
    union = tuple(sorted(set(T1) | set(T2)))
    if len(union) == k + 2:
        cls = classify_tuple(union, k)
        if cls.kind is TupleKind.OFF_FLAT:
            raise InvariantViolation("equal-sum disjoint halves produced an off-flat union")
        if cls.kind is TupleKind.NON_DEGENERATE:
            return PairLabel.GOOD
    if affine_rank(union, stop_above=k - 1) > k - 1:
        raise InvariantViolation("bad pair whose union is not on a (k-1)-flat")
    return PairLabel.BAD


@dataclass
class CensusReport:
    n: int
    d: int
    k: int
    r: Optional[int]
    colliding_pairs: Optional[int] = None
    good_pairs: Optional[int] = None
    bad_pairs: Optional[int] = None
    pairwise_lower_bound: Optional[int] = None
    nondegenerate_tuples: Optional[int] = None


def _first_index_chunks(n: int, m: int, parts: int) -> list[tuple[int, int]]:
    """Split the first-index range of m-of-n combinations into balanced chunks."""
    last = n - m + 1
    if last <= 0:
        return [(0, 0)]
    parts = max(1, min(parts, last))
    weights = [math.comb(n - 1 - i, m - 1) for i in range(last)]
    total = sum(weights)
    target = total / parts
    chunks = []
    lo = 0
    acc = 0
    for i in range(last):
        acc += weights[i]
        if acc >= target and len(chunks) < parts - 1:
            chunks.append((lo, i + 1))
            lo = i + 1
            acc = 0
    chunks.append((lo, last))
    return chunks


def _scan_all(pts_array, k: int, collect: bool, threads: int):
    n = pts_array.shape[0]
    chunks = _first_index_chunks(n, k + 2, threads)
    if len(chunks) == 1:
        return kernels.census_scan(pts_array, k, chunks[0][0], chunks[0][1], collect)
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        results = list(
            pool.map(lambda c: kernels.census_scan(pts_array, k, c[0], c[1], collect), chunks)
        )
    nondeg = sum(r[0] for r in results)
    deg = sum(r[1] for r in results)
    edges = None
    if collect:
        edges = np.vstack([r[2] for r in results])
    return nondeg, deg, edges


def _jensen_check(index: SumIndex, colliding: int) -> None:
    # convexity bound: colliding pairs >= B * C(avg bucket size, 2), exact
    B = len(index.buckets)
    if B == 0:
        return
    t = Fraction(index.total_subsets())
    avg = t / B
    bound = B * avg * (avg - 1) / 2
    if Fraction(colliding) < bound:
        raise InvariantViolation("bucket collision count below its convexity bound")


def census(
    V: PointSet,
    k: int,
    mode: str = "both",
    budget: Optional[int] = None,
    threads: int = 1,
) -> CensusReport:
    """Count flat-incident non-degenerate (k+2)-tuples of V.

    mode is "pair", "exhaustive", or "both".  Pair mode needs even k; an
    exhaustive run enumerates all C(|V|, k+2) subsets and must fit in the
    budget.  A "both" run additionally asserts that the pair-based lower
    bound does not exceed the exhaustive count.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if mode not in ("pair", "exhaustive", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    report = CensusReport(n=V.side, d=V.dim, k=k, r=k // 2 + 1 if k % 2 == 0 else None)
    if mode in ("pair", "both"):
        if k % 2 != 0:
            raise OddKInPairMode("pair-based census needs even k")
        r = k // 2 + 1
        if len(V) < k + 2:
            report.colliding_pairs = 0
            report.good_pairs = 0
            report.bad_pairs = 0
            report.pairwise_lower_bound = 0
        else:
            index = build_sum_index(V, r)
            colliding = count_colliding_pairs(index)
            _jensen_check(index, colliding)
            good = bad = 0
            unions: set[tuple[Point, ...]] = set()
            for _, bucket in index.sorted_items():
                for i in range(len(bucket)):
                    for j in range(i + 1, len(bucket)):
                        if classify_pair(bucket[i], bucket[j], k) is PairLabel.GOOD:
                            good += 1
                            unions.add(tuple(sorted(set(bucket[i]) | set(bucket[j]))))
                        else:
                            bad += 1
            if good + bad != colliding:
                raise InvariantViolation("pair classification does not partition collisions")
            report.colliding_pairs = colliding
            report.good_pairs = good
            report.bad_pairs = bad
            report.pairwise_lower_bound = len(unions)
    if mode in ("exhaustive", "both"):
        if len(V) < k + 2:
            report.nondegenerate_tuples = 0
        else:
            total = math.comb(len(V), k + 2)
            limit = resolve_budget(budget)
            if total > limit:
                raise BudgetExceeded(f"{total} subsets exceed budget {limit}")
            pts_array = np.array(V.points, dtype=np.int64)
            nondeg, _, _ = _scan_all(pts_array, k, collect=False, threads=threads)
            report.nondegenerate_tuples = nondeg
    if mode == "both" and report.pairwise_lower_bound is not None:
        if report.pairwise_lower_bound > report.nondegenerate_tuples:
            raise InvariantViolation("pair-based lower bound exceeds the exhaustive count")
    return report


@dataclass(frozen=True)
class DegreeProfile:
    k: int
    delta: dict[int, int]  # subset size -> max tuples through a subset of that size


def degree_profile(
    V: PointSet,
    k: int,
    budget: Optional[int] = None,
    threads: int = 1,
) -> DegreeProfile:
    """Exact degree profile of the flat-incidence hypergraph on V.

    delta[l] is the maximum, over l-subsets U of V, of the number of counted
    tuples containing U, for l = 2 .. k+2.  Each delta[l] with l < k+2 is
    checked against its proven ceiling |V|^(k+1-l) * n^k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(V) >= k + 2:
        total = math.comb(len(V), k + 2)
        limit = resolve_budget(budget)
        if total > limit:
            raise BudgetExceeded(f"{total} subsets exceed budget {limit}")
        pts_array = np.array(V.points, dtype=np.int64)
        _, _, edges = _scan_all(pts_array, k, collect=True, threads=threads)
        edge_rows = edges.tolist()
    else:
        edge_rows = []
    delta: dict[int, int] = {}
    for size in range(2, k + 2):
        counts: dict[tuple[int, ...], int] = {}
        best = 0
        for row in edge_rows:
            for sub in combinations(row, size):
                c = counts.get(sub, 0) + 1
                counts[sub] = c
                if c > best:
                    best = c
        delta[size] = best
    delta[k + 2] = 1 if edge_rows else 0
    nv = len(V)
    nk = V.side**k
    for size in range(2, k + 2):
        if delta[size] > nv ** (k + 1 - size) * nk:
            raise InvariantViolation(f"degree delta_{size} exceeds its proven ceiling")
    return DegreeProfile(k=k, delta=delta)


def compute_delta(
    profile: DegreeProfile,
    num_vertices: int,
    num_edges: int,
    tau: Fraction,
) -> Fraction:
    """Weighted degree functional of the incidence hypergraph, exactly.

    Evaluates 2^(C(k+2,2)-1) * |V| / ((k+2)*|E|) times the sum over
    l = 2..k+2 of delta_l / (tau^(l-1) * 2^C(l-1,2)), in rational arithmetic.
    """
    k = profile.k
    if num_edges < 1:
        raise ZeroEdges("need at least one edge")
    tau = Fraction(tau)
    if not 0 < tau < Fraction(1, 2):
        raise TauOutOfRange(f"tau={tau} outside (0, 1/2)")
    scale = Fraction(2 ** (math.comb(k + 2, 2) - 1) * num_vertices, (k + 2) * num_edges)
    acc = Fraction(0)
    for size in range(2, k + 3):
        acc += Fraction(profile.delta[size]) / (tau ** (size - 1) * 2 ** math.comb(size - 1, 2))
    return scale * acc


@dataclass(frozen=True)
class ContainerParams:
    k: int
    num_vertices: int
    num_edges: int
    side: int
    tau: Fraction
    delta_h_tau: Fraction
    epsilon: Optional[Fraction] = None

    @property
    def gamma_surrogate(self) -> tuple[int, int]:
        """(|V|, n): gamma is defined through |V| = n^(d - gamma)."""
        return (self.num_vertices, self.side)

    @property
    def epsilon_threshold(self) -> Optional[Fraction]:
        if self.epsilon is None:
            return None
        return self.epsilon / (12 * math.factorial(self.k + 2))

    @property
    def within_threshold(self) -> Optional[bool]:
        """Reported, never asserted: the bound only kicks in at scale."""
        if self.epsilon is None:
            return None
        return self.delta_h_tau <= self.epsilon_threshold


def container_params(
    V: PointSet,
    k: int,
    tau: Fraction,
    epsilon: Optional[Fraction] = None,
    budget: Optional[int] = None,
    threads: int = 1,
) -> tuple[ContainerParams, DegreeProfile]:
    """Assemble the container-hypothesis quantities for V at parameter tau."""
    rep = census(V, k, mode="exhaustive", budget=budget, threads=threads)
    profile = degree_profile(V, k, budget=budget, threads=threads)
    if rep.nondegenerate_tuples < 1:
        raise ZeroEdges("incidence hypergraph has no edges")
    value = compute_delta(profile, len(V), rep.nondegenerate_tuples, tau)
    eps = None if epsilon is None else Fraction(epsilon)
    params = ContainerParams(
        k=k,
        num_vertices=len(V),
        num_edges=rep.nondegenerate_tuples,
        side=V.side,
        tau=Fraction(tau),
        delta_h_tau=value,
        epsilon=eps,
    )
    return params, profile


@dataclass(frozen=True)
class TrendRow:
    n: int
    count: int


@dataclass(frozen=True)
class TrendTable:
    k: int
    d: int
    rows: tuple[TrendRow, ...]
    slope: Optional[float]


def supersaturation_trend(
    k: int,
    d: int,
    n_list: list[int],
    budget: Optional[int] = None,
    threads: int = 1,
) -> TrendTable:
    """Exhaustive counted-tuple totals for full grids, with a log-log slope.

    The slope is the least-squares fit of log(count) against log(n) over
    rows with positive count (None when fewer than two such rows).
    """
    if k < 2 or k % 2 != 0:
        raise ValueError("trend is defined for even k >= 2")
    from .points import full_grid

    rows = []
    for n in n_list:
        rep = census(full_grid(n, d), k, mode="exhaustive", budget=budget, threads=threads)
        rows.append(TrendRow(n=n, count=rep.nondegenerate_tuples))
    pts = [(math.log(r.n), math.log(r.count)) for r in rows if r.count > 0]
    slope = None
    if len(pts) >= 2:
        xbar = sum(x for x, _ in pts) / len(pts)
        ybar = sum(y for _, y in pts) / len(pts)
        denom = sum((x - xbar) ** 2 for x, _ in pts)
        if denom > 0:
            slope = sum((x - xbar) * (y - ybar) for x, y in pts) / denom
    return TrendTable(k=k, d=d, rows=tuple(rows), slope=slope)
