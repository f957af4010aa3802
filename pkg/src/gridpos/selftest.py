"""Built-in invariant suite behind `gridpos --selftest`.

Each check prints one line; any failure makes the run exit non-zero.  The
checks re-derive expected values through independent arithmetic (rational
elimination, partition search) rather than trusting the library paths they
exercise.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .additive import bg_check, check_cs, dissect, is_trivial_solution, phi, sum_profile
from .census import build_sum_index, census, compute_delta, count_colliding_pairs, degree_profile
from .constructions import DeletionConfig, deletion_construct, moment_curve
from .kernels import available_backends
from .points import PointSet, dump_points, full_grid, parse_points
from .rank import affine_rank, classify_tuple, TupleKind
from .search import SearchConfig, max_grid_set


def _rational_rank(points) -> int:
    """Independent oracle: Gaussian elimination over exact rationals."""
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


def _random_points(rng, count, d, span) -> list[tuple[int, ...]]:
    pts = set()
    while len(pts) < count:
        pts.add(tuple(int(x) for x in rng.integers(1, span + 1, size=d)))
    return sorted(pts)


def _check_rank_oracle(rng) -> bool:
    for _ in range(200):
        d = int(rng.integers(1, 5))
        m = int(rng.integers(1, 7))
        pts = [tuple(int(x) for x in rng.integers(-20, 21, size=d)) for _ in range(m)]
        if affine_rank(pts) != _rational_rank(pts):
            return False
    return True


def _check_degeneracy_reduction(rng) -> bool:
    # full subset-size definition vs the drop-one test used by classify_tuple
    for k in (2, 4):
        for _ in range(120):
            d = int(rng.integers(2, 5))
            pts = _random_points(rng, k + 2, d, 4)
            if affine_rank(pts) > k:
                continue
            by_definition = any(
                affine_rank(sub) <= j - 2
                for j in range(3, k + 2)
                for sub in itertools.combinations(pts, j)
            )
            got = classify_tuple(pts, k).kind
            want = TupleKind.DEGENERATE if by_definition else TupleKind.NON_DEGENERATE
            if got != want:
                return False
    return True


def _check_census_small() -> bool:
    rep = census(full_grid(3, 2), 1, mode="exhaustive")
    if rep.nondegenerate_tuples != 8:
        return False
    rep = census(full_grid(2, 2), 2, mode="both")
    return (
        rep.nondegenerate_tuples == 1
        and rep.good_pairs == 1
        and rep.pairwise_lower_bound == 1
    )


def _check_sum_index(rng) -> bool:
    V = PointSet.of(2, 6, _random_points(rng, 8, 2, 6))
    idx = build_sum_index(V, 2)
    if idx.total_subsets() != math.comb(len(V), 2):
        return False
    count_colliding_pairs(idx)  # exercises the convexity assertion
    return True


def _check_moment_curve() -> bool:
    for p in (2, 3, 5, 7, 11, 13):
        ps = moment_curve(2, p)
        for sub in itertools.combinations(ps.points, 3):
            if affine_rank(sub) <= 1:
                return False
    return True


def _check_deletion() -> bool:
    cfg = DeletionConfig(d=2, r=1, s=3, n=8, p=Fraction(1, 3), seed=7, trials=1)
    rep1 = deletion_construct(cfg)
    rep2 = deletion_construct(cfg)
    if dump_points(rep1.output) != dump_points(rep2.output):
        return False
    return rep1.final_size >= rep1.sampled_size - rep1.violations_found


def _check_cs_random(rng) -> bool:
    for _ in range(25):
        d = int(rng.integers(1, 3))
        U = {tuple(int(x) for x in rng.integers(-8, 9, size=d)) for _ in range(6)}
        T = {tuple(int(x) for x in rng.integers(-8, 9, size=d)) for _ in range(6)}
        if not check_cs(U, T).holds:
            return False
    return True


def _check_trivial_oracle(rng) -> bool:
    # partition-search form of the definition, positions grouped exhaustively
    def by_partition(values, coeffs):
        n = len(values)
        groups: dict[tuple[int, ...], list[int]] = {}
        for i, v in enumerate(values):
            groups.setdefault(v, []).append(i)
        return all(sum(coeffs[i] for i in idx) == 0 for idx in groups.values())

    for _ in range(120):
        g = int(rng.integers(1, 4))
        coeffs = []
        for _ in range(g):
            c = int(rng.integers(1, 4))
            coeffs.extend([c, -c])
        values = [int(rng.integers(1, 5)) for _ in coeffs]
        total = sum(c * v for c, v in zip(coeffs, values))
        if total != 0:
            continue
        if is_trivial_solution(values, coeffs) != by_partition(
            [(v,) for v in values], coeffs
        ):
            return False
    return True


def _check_search() -> bool:
    cfg = SearchConfig(d=2, k=1, r=3, n=3, node_budget=200_000, use_symmetry=True, seed=0)
    res1 = max_grid_set(cfg)
    res2 = max_grid_set(cfg)
    return (
        res1.optimal
        and len(res1.best_set) == 6
        and res1.nodes == res2.nodes
        and res1.best_set == res2.best_set
    )


def _check_backend_parity(rng) -> bool:
    backends = available_backends()
    if len(backends) < 2:
        return True  # only one backend importable; nothing to compare
    pts = np.array(_random_points(rng, 12, 2, 5), dtype=np.int64)
    outputs = []
    for mod in backends.values():
        nd, dg, edges = mod.census_scan(pts, 2, 0, len(pts), True)
        outputs.append((nd, dg, edges.tolist()))
    return outputs[0] == outputs[1]


def _check_delta_formula() -> bool:
    prof = degree_profile(full_grid(2, 2), 2)
    value = compute_delta(prof, 16, 1, Fraction(1, 4))
    k = 2
    tau = Fraction(1, 4)
    expected = (
        Fraction(2 ** (math.comb(k + 2, 2) - 1) * 16, (k + 2) * 1)
        * sum(
            Fraction(prof.delta[size], 1)
            / (tau ** (size - 1) * 2 ** math.comb(size - 1, 2))
            for size in range(2, k + 3)
        )
    )
    return value == expected


def _check_points_roundtrip() -> bool:
    ps = full_grid(2, 2)
    text = dump_points(ps)
    parsed, warnings = parse_points(text)
    return parsed == ps and not warnings and dump_points(parsed) == text


def _check_additive_profile() -> bool:
    V = PointSet.of(1, 11, [(1,), (2,), (5,), (11,)])
    sums, bij = sum_profile(V, 2)
    if not bij or len(sums) != 6:
        return False
    ok, _ = bg_check(V, 2, 1)
    if not ok:
        return False
    table = phi({0, 1}, {0, 1})
    if table[(0,)] != 2 or table[(1,)] != 1 or table[(-1,)] != 1:
        return False
    parts = dissect({(3,), (4,), (5,)}, 2)
    return parts.part((0,)) == ((2,),) and parts.part((1,)) == ((1,), (2,))


CHECKS = [
    ("rank agrees with rational elimination", _check_rank_oracle, True),
    ("degeneracy reduction matches the subset definition", _check_degeneracy_reduction, True),
    ("small censuses match known values", _check_census_small, False),
    ("sum buckets partition and satisfy convexity", _check_sum_index, True),
    ("power curve is hyperplane-free", _check_moment_curve, False),
    ("deletion is reproducible and accounts sizes", _check_deletion, False),
    ("convolution inequality holds on random pairs", _check_cs_random, True),
    ("triviality test matches partition search", _check_trivial_oracle, True),
    ("search is deterministic and exact on the 3-grid", _check_search, False),
    ("kernel backends agree", _check_backend_parity, True),
    ("weighted degree functional matches direct evaluation", _check_delta_formula, False),
    ("point-set format round-trips", _check_points_roundtrip, False),
    ("sum profiles, difference tables, residue parts behave", _check_additive_profile, False),
]


def run_selftest(verbose: bool = True) -> bool:
    rng = np.random.Generator(np.random.Philox(key=[0, 0]))
    all_ok = True
    for name, fn, needs_rng in CHECKS:
        try:
            ok = fn(rng) if needs_rng else fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok = False
            if verbose:
                print(f"FAIL {name}: {exc!r}")
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'} {name}")
        all_ok = all_ok and ok
    if verbose:
        print("selftest:", "all checks passed" if all_ok else "FAILURES present")
    return all_ok
