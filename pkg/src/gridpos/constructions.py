"""Point-set generators: the modular power curve and the random
sample-then-delete construction.

The power curve {(t, t^2, ..., t^d) mod p : t in Z_p}, shifted into [p]^d,
has no d+1 points on a hyperplane (its shifted coordinate matrix has a
nonzero determinant mod p), which realizes the linear-size extremal sets
for hyperplanes.

The randomized construction keeps each grid point independently with
probability p (an exact rational; the "auto" setting solves for the p that
balances the expected deletion loss at half the sample), then deletes one
point from every (r+s)-subset of the sample that lies on an r-flat.  The
deletion policy is a greedy hitting set, which never removes more points
than there are violating tuples, so the usual expected-size guarantee is
preserved.  With a fixed seed the whole construction is bit-reproducible;
each trial index gets its own counter-based RNG stream.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .budget import resolve_budget
from .errors import BudgetExceeded, InvariantViolation, NotPrime, ProbabilityOutOfRange
from .exact import kth_root_floor
from . import kernels
from .points import Point, PointSet, full_grid

logger = logging.getLogger("gridpos")

_P_SCALE = 2**32  # denominator used when materializing the auto probability


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    t = 2
    while t * t <= p:
        if p % t == 0:
            return False
        t += 1
    return True


def moment_curve(d: int, p: int) -> PointSet:
    """The p points {(t, t^2, ..., t^d) mod p : t in Z_p} shifted into [p]^d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    pts = []
    for t in range(p):
        pts.append(tuple(pow(t, e, p) + 1 for e in range(1, d + 1)))
    return PointSet.of(d, p, pts)


def count_flat_tuples(
    n: int,
    d: int,
    r: int,
    size: int,
    budget: Optional[int] = None,
    threads: int = 1,
) -> int:
    """Exact number of size-point subsets of [n]^d with affine rank <= r."""
    if min(n, d, size) < 1 or r < 0:
        raise ValueError("need n, d, size >= 1 and r >= 0")
    total_points = n**d
    if size <= r + 1:
        return math.comb(total_points, size)  # rank <= size-1 <= r always
    total = math.comb(total_points, size)
    limit = resolve_budget(budget)
    if total > limit:
        raise BudgetExceeded(f"{total} subsets exceed budget {limit}")
    grid = full_grid(n, d)
    pts_array = np.array(grid.points, dtype=np.int64)
    if threads <= 1:
        return kernels.count_low_rank(pts_array, size, r, 0, len(grid))
    from .census import _first_index_chunks
    from concurrent.futures import ThreadPoolExecutor

    chunks = _first_index_chunks(len(grid), size, threads)
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = pool.map(lambda c: kernels.count_low_rank(pts_array, size, r, c[0], c[1]), chunks)
        return sum(parts)


@dataclass(frozen=True)
class DeletionConfig:
    d: int
    r: int
    s: int
    n: int
    p: Union[Fraction, str] = "auto"
    c6_mode: str = "estimate"
    seed: int = 0
    trials: int = 1
    budget: Optional[int] = None

    def __post_init__(self):
        if min(self.d, self.r, self.n) < 1 or self.s < 2:
            raise ValueError("need d, r, n >= 1 and s >= 2")
        if self.d <= self.r:
            raise ValueError(f"need d > r, got d={self.d}, r={self.r}")
        if self.c6_mode not in ("exact", "estimate"):
            raise ValueError(f"unknown c6_mode {self.c6_mode!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.p != "auto":
            p = Fraction(self.p)
            if not 0 < p <= 1:
                raise ProbabilityOutOfRange(f"p={p} outside (0, 1]")


@dataclass
class DeletionReport:
    output: PointSet
    sampled_size: int
    violations_found: int
    final_size: int
    expected_size_bound: Fraction
    p: Fraction
    c6: Fraction
    seed: int
    trial_index: int


def _tuple_count_exponent(cfg: DeletionConfig) -> int:
    return (cfg.r + 1) * cfg.d + (cfg.s - 1) * cfg.r


def _c6_constant(cfg: DeletionConfig) -> Fraction:
    """Violating-tuple density: exact at n, or at the largest affordable n' <= n."""
    size = cfg.r + cfg.s
    exponent = _tuple_count_exponent(cfg)
    limit = resolve_budget(cfg.budget)
    if cfg.c6_mode == "exact":
        count = count_flat_tuples(cfg.n, cfg.d, cfg.r, size, budget=limit)
        return Fraction(count, cfg.n**exponent)
    n_prime = None
    for candidate in range(cfg.n, 1, -1):
        if math.comb(candidate**cfg.d, size) <= limit:
            n_prime = candidate
            break
    if n_prime is None:
        raise BudgetExceeded("no grid side fits the budget for the density estimate")
    count = count_flat_tuples(n_prime, cfg.d, cfg.r, size, budget=limit)
    return Fraction(count, n_prime**exponent)


def auto_probability(cfg: DeletionConfig, c6: Fraction) -> Fraction:
    """p = (2*c6)^(-1/(r+s-1)) * n^(-r(d+s-1)/(r+s-1)), as an exact rational.

    Materialized with denominator 2^32 by integer root extraction (floor);
    values at or above 1 are clamped to 1/2 with a logged warning.
    """
    q = cfg.r + cfg.s - 1
    if c6 <= 0:
        logger.warning("zero violating-tuple density; clamping auto p to 1/2")
        return Fraction(1, 2)
    inside_num = c6.denominator
    inside_den = 2 * c6.numerator * cfg.n ** (cfg.r * (cfg.d + cfg.s - 1))
    num = kth_root_floor((inside_num * _P_SCALE**q) // inside_den, q)
    p = Fraction(num, _P_SCALE)
    if p >= 1:
        logger.warning("auto p=%s >= 1 at n=%d; clamping to 1/2", p, cfg.n)
        return Fraction(1, 2)
    if p == 0:
        raise ProbabilityOutOfRange("auto p underflowed to 0; grid too large for the scale")
    return p


def resolve_probability(cfg: DeletionConfig) -> tuple[Fraction, Fraction]:
    """(p, c6) for the config; c6 is computed per c6_mode either way."""
    c6 = _c6_constant(cfg)
    if cfg.p == "auto":
        return auto_probability(cfg, c6), c6
    return Fraction(cfg.p), c6


def _greedy_delete(tuples: list[tuple[int, ...]]) -> set[int]:
    """Hitting set: walk tuples in order, delete the member point covering the
    most still-unresolved tuples (ties to the smallest index)."""
    containing: dict[int, list[int]] = {}
    for t_idx, tup in enumerate(tuples):
        for point in tup:
            containing.setdefault(point, []).append(t_idx)
    resolved = [False] * len(tuples)
    deleted: set[int] = set()
    for t_idx, tup in enumerate(tuples):
        if resolved[t_idx]:
            continue
        best_point = None
        best_cover = -1
        for point in tup:
            cover = sum(1 for j in containing[point] if not resolved[j])
            if cover > best_cover or (cover == best_cover and point < best_point):
                best_point = point
                best_cover = cover
        deleted.add(best_point)
        for j in containing[best_point]:
            resolved[j] = True
    return deleted


def deletion_construct(cfg: DeletionConfig, trial_index: int = 0) -> DeletionReport:
    """One sample-then-delete run; the output is re-verified flat-tuple-free."""
    p, c6 = resolve_probability(cfg)
    return _run_trial(cfg, trial_index, p, c6)


def _run_trial(cfg: DeletionConfig, trial_index: int, p: Fraction, c6: Fraction) -> DeletionReport:
    size = cfg.r + cfg.s
    rng = np.random.Generator(np.random.Philox(key=[cfg.seed, trial_index]))
    grid = full_grid(cfg.n, cfg.d)
    den = p.denominator
    num = p.numerator
    draws = rng.integers(0, den, size=len(grid))
    sample = [pt for pt, draw in zip(grid.points, draws) if draw < num]
    limit = resolve_budget(cfg.budget)
    if len(sample) >= size and math.comb(len(sample), size) > limit:
        raise BudgetExceeded(f"{math.comb(len(sample), size)} subsets exceed budget {limit}")
    violations: list[tuple[int, ...]] = []
    if len(sample) >= size:
        pts_array = np.array(sample, dtype=np.int64)
        violations = [tuple(row) for row in kernels.collect_low_rank(pts_array, size, cfg.r).tolist()]
    deleted = _greedy_delete(violations) if violations else set()
    survivors = [pt for i, pt in enumerate(sample) if i not in deleted]
    if len(survivors) >= size:
        check = kernels.find_low_rank(np.array(survivors, dtype=np.int64), size, cfg.r)
        if check is not None:
            raise InvariantViolation("deletion left a flat-incident tuple behind")
    if len(survivors) < len(sample) - len(violations):
        raise InvariantViolation("deleted more points than violating tuples")
    exponent = _tuple_count_exponent(cfg)
    bound = p * cfg.n**cfg.d - c6 * p**size * Fraction(cfg.n**exponent)
    return DeletionReport(
        output=PointSet.of(cfg.d, cfg.n, survivors),
        sampled_size=len(sample),
        violations_found=len(violations),
        final_size=len(survivors),
        expected_size_bound=bound,
        p=p,
        c6=c6,
        seed=cfg.seed,
        trial_index=trial_index,
    )


@dataclass
class DeletionSummary:
    reports: list[DeletionReport]
    p: Fraction
    c6: Fraction
    mean_sampled: Fraction
    mean_final: Fraction
    stderr_final: Optional[float]
    expected_size_bound: Fraction


def run_deletion_trials(cfg: DeletionConfig) -> DeletionSummary:
    """cfg.trials independent constructions on per-trial RNG streams."""
    p, c6 = resolve_probability(cfg)
    reports = [_run_trial(cfg, t, p, c6) for t in range(cfg.trials)]
    finals = [rep.final_size for rep in reports]
    sampled = [rep.sampled_size for rep in reports]
    mean_final = Fraction(sum(finals), len(finals))
    stderr = None
    if len(finals) > 1:
        mean_f = float(mean_final)
        var = sum((f - mean_f) ** 2 for f in finals) / (len(finals) - 1)
        stderr = math.sqrt(var / len(finals))
    return DeletionSummary(
        reports=reports,
        p=p,
        c6=c6,
        mean_sampled=Fraction(sum(sampled), len(sampled)),
        mean_final=mean_final,
        stderr_final=stderr,
        expected_size_bound=reports[0].expected_size_bound,
    )
