"""Branch-and-bound solvers for flat-avoiding subsets, and the greedy
general-position procedure with its counting certificate.

The exact solver maximizes |S|, S inside a candidate point set, subject to
"no r points of S on a k-flat".  Pruning uses the axis-aligned cover of the
grid by n^(d-k) parallel k-flats (each can hold at most r-1 chosen points),
plus a shared best-so-far bound.  Optionally the lexicographically smallest
chosen point is restricted to representatives of the coordinate
permutation/reflection group orbits; deeper isomorph rejection is out of
scope.  Search is deterministic for a fixed config, including the seed used
for randomized candidate orderings.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from .budget import resolve_budget
from .errors import BudgetExceeded, HypothesisViolated, InvariantViolation, VacuousConstraint
from .points import Point, PointSet, full_grid
from .rank import affine_rank

DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class SearchConfig:
    d: int
    k: int
    r: int
    n: int
    node_budget: int = DEFAULT_NODE_BUDGET
    use_symmetry: bool = True
    seed: int = 0

    def __post_init__(self):
        if min(self.d, self.k, self.r, self.n) < 1:
            raise ValueError("d, k, r, n must be positive")
        if self.r < self.k + 2:
            raise ValueError(f"r={self.r} < k+2={self.k + 2}: any r points fit on a k-flat")
        if self.k >= self.d:
            raise VacuousConstraint(f"k={self.k} >= d={self.d}: every point set avoids the constraint trivially")
        if self.node_budget < 1:
            raise ValueError("node_budget must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass
class SearchResult:
    best_set: PointSet
    optimal: bool
    nodes: int
    elapsed_ms: int


class _BudgetStop(Exception):
    pass


class _Solver:
    """Max subset of `points` with no r members on a k-flat."""

    def __init__(self, points, d, k, r, node_budget, rank_of):
        self.points = points
        self.d = d
        self.k = k
        self.r = r
        self.node_budget = node_budget
        self.rank_of = rank_of  # point -> ordering rank for tie-breaks
        self.nodes = 0
        self.best: list[Point] = []
        self.prefix = d - k  # cover flats fix the first d-k coordinates

    def _feasible(self, q: Point, chosen: list[Point]) -> bool:
        k, r = self.k, self.r
        if len(chosen) < r - 1:
            return True
        if k == 1 and r == 3:
            seen = set()
            for a in chosen:
                direction = _normalized_direction(a, q)
                if direction in seen:
                    return False
                seen.add(direction)
            return True
        for sub in itertools.combinations(chosen, r - 1):
            if affine_rank(sub + (q,), stop_above=k) <= k:
                return False
        return True

    def _capacity_bound(self, chosen: list[Point], cand: list[Point]) -> int:
        used: dict[tuple, int] = {}
        for p in chosen:
            f = p[: self.prefix]
            used[f] = used.get(f, 0) + 1
        avail: dict[tuple, int] = {}
        for p in cand:
            f = p[: self.prefix]
            avail[f] = avail.get(f, 0) + 1
        cap = self.r - 1
        return sum(min(c, cap - used.get(f, 0)) for f, c in avail.items())

    def _pick(self, chosen: list[Point], cand: list[Point]) -> Point:
        # fail-first: branch inside the cover flat with least remaining room
        used: dict[tuple, int] = {}
        for p in chosen:
            f = p[: self.prefix]
            used[f] = used.get(f, 0) + 1
        cap = self.r - 1
        return min(cand, key=lambda q: (cap - used.get(q[: self.prefix], 0), self.rank_of[q]))

    def _search(self, chosen: list[Point], cand: list[Point]) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise _BudgetStop
        if len(chosen) > len(self.best):
            self.best = list(chosen)
        if not cand:
            return
        if len(chosen) + self._capacity_bound(chosen, cand) <= len(self.best):
            return
        q = self._pick(chosen, cand)
        rest = [c for c in cand if c != q]
        chosen.append(q)
        self._search(chosen, [c for c in rest if self._feasible(c, chosen)])
        chosen.pop()
        self._search(chosen, rest)

    def run(self, firsts: list[Point]) -> bool:
        """Search sets grouped by their smallest member; returns optimality."""
        import sys

        sys.setrecursionlimit(max(sys.getrecursionlimit(), 3 * len(self.points) + 1000))
        try:
            self.nodes += 1  # root
            for p in firsts:
                chosen = [p]
                cand = [c for c in self.points if c > p and self._feasible(c, chosen)]
                self._search(chosen, cand)
            return True
        except _BudgetStop:
            return False


def _normalized_direction(a: Point, b: Point) -> Point:
    diff = [x - y for x, y in zip(b, a)]
    g = 0
    for v in diff:
        g = math.gcd(g, abs(v))
    diff = [v // g for v in diff]
    for v in diff:
        if v != 0:
            if v < 0:
                diff = [-x for x in diff]
            break
    return tuple(diff)


def _orbit_minimal(points, n: int, d: int) -> list[Point]:
    reps = []
    for p in points:
        images = []
        for perm in itertools.permutations(range(d)):
            q = tuple(p[i] for i in perm)
            for signs in itertools.product((False, True), repeat=d):
                images.append(tuple(n + 1 - c if s else c for c, s in zip(q, signs)))
        if p == min(images):
            reps.append(p)
    return reps


def _ordering(points, seed: int) -> dict[Point, int]:
    if seed == 0:
        return {p: i for i, p in enumerate(points)}
    rng = np.random.Generator(np.random.Philox(key=[seed, 0]))
    order = list(points)
    rng.shuffle(order)
    return {p: i for i, p in enumerate(order)}


def _verify_result(points: list[Point], r: int, k: int) -> None:
    # independent of the incremental bookkeeping: re-rank every r-subset
    for sub in itertools.combinations(points, r):
        if affine_rank(sub, stop_above=k) <= k:
            raise InvariantViolation(f"returned set has {r} points on a {k}-flat: {sub}")


def max_grid_set(cfg: SearchConfig) -> SearchResult:
    """Largest subset of the grid [n]^d with no r points on a k-flat.

    The optimal flag is set only when the search tree was exhausted within
    the node budget; otherwise the best set found so far is returned.
    """
    t0 = time.perf_counter()
    grid = full_grid(cfg.n, cfg.d)
    rank_of = _ordering(grid.points, cfg.seed)
    solver = _Solver(grid.points, cfg.d, cfg.k, cfg.r, cfg.node_budget, rank_of)
    firsts = _orbit_minimal(grid.points, cfg.n, cfg.d) if cfg.use_symmetry else list(grid.points)
    firsts.sort(key=rank_of.__getitem__)
    optimal = solver.run(firsts)
    best = sorted(solver.best)
    _verify_result(best, cfg.r, cfg.k)
    cover = (cfg.r - 1) * cfg.n ** (cfg.d - cfg.k)
    if len(best) > cover:
        raise InvariantViolation("result exceeds the covering bound (r-1) * n^(d-k)")
    elapsed = int((time.perf_counter() - t0) * 1000)
    return SearchResult(
        best_set=PointSet.of(cfg.d, cfg.n, best),
        optimal=optimal,
        nodes=solver.nodes,
        elapsed_ms=elapsed,
    )


def max_general_position_subset(
    V: PointSet,
    node_budget: int = DEFAULT_NODE_BUDGET,
    seed: int = 0,
) -> SearchResult:
    """Largest S inside V with no d+1 members on a hyperplane (exact when the
    node budget suffices; best-so-far with optimal=False otherwise)."""
    d = V.dim
    t0 = time.perf_counter()
    rank_of = _ordering(V.points, seed)
    solver = _Solver(V.points, d, d - 1, d + 1, node_budget, rank_of)
    firsts = sorted(V.points, key=rank_of.__getitem__)
    optimal = solver.run(firsts)
    best = sorted(solver.best)
    _verify_result(best, d + 1, d - 1)
    cover = d * V.side
    if len(best) > cover:
        raise InvariantViolation("result exceeds the covering bound d * n")
    elapsed = int((time.perf_counter() - t0) * 1000)
    return SearchResult(
        best_set=PointSet.of(d, V.side, best),
        optimal=optimal,
        nodes=solver.nodes,
        elapsed_ms=elapsed,
    )


@dataclass(frozen=True)
class GreedyCertificate:
    subset_size: int
    input_size: int
    s: int
    d: int
    lhs: int  # s * C(subset_size, d) + subset_size
    holds: bool


def greedy_general_position(
    V: PointSet,
    d: int,
    s: int,
    seed: int = 0,
    budget: int | None = None,
) -> tuple[PointSet, GreedyCertificate]:
    """Greedy maximal general-position subset of V, with its size certificate.

    Requires that no d+s points of V lie on a hyperplane (verified first).
    The returned certificate records s * C(|subset|, d) + |subset| >= |V|,
    which holds by the covering argument: every point left out lies on a
    hyperplane spanned by d chosen points, and each such hyperplane covers
    at most s of the leftovers.
    """
    if d != V.dim:
        raise ValueError(f"d={d} does not match the point set dimension {V.dim}")
    if s < 2:
        raise ValueError("s must be >= 2")
    if len(V) >= d + s:
        total = math.comb(len(V), d + s)
        limit = resolve_budget(budget)
        if total > limit:
            raise BudgetExceeded(f"{total} subsets exceed budget {limit}")
        from . import kernels

        pts_array = np.array(V.points, dtype=np.int64)
        witness = kernels.find_low_rank(pts_array, d + s, d - 1)
        if witness is not None:
            bad = tuple(V.points[i] for i in witness)
            raise HypothesisViolated(f"{d + s} points on a hyperplane: {bad}")
    rank_of = _ordering(V.points, seed)
    chosen: list[Point] = []
    for q in sorted(V.points, key=rank_of.__getitem__):
        ok = all(
            affine_rank(sub + (q,), stop_above=d - 1) > d - 1
            for sub in itertools.combinations(chosen, d)
        )
        if ok:
            chosen.append(q)
    chosen.sort()
    lhs = s * math.comb(len(chosen), d) + len(chosen)
    cert = GreedyCertificate(
        subset_size=len(chosen),
        input_size=len(V),
        s=s,
        d=d,
        lhs=lhs,
        holds=lhs >= len(V),
    )
    if not cert.holds:
        raise InvariantViolation("greedy covering certificate failed; this is a bug signal")
    return PointSet.of(V.dim, V.side, chosen), cert
