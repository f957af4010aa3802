"""Zero-sum equation families over point sets: trivial-solution detection,
B_g-style verification, sum profiles, difference-count tables, and the
convolution inequality check.

A solution to c_1 x_1 + ... + c_g x_g = 0 (coefficients summing to zero) is
trivial when grouping equal values makes every group's coefficient sum
vanish; the groups are forced to be the equality classes, so the test is a
single pass.  Witness searches split the coefficient positions by sign and
meet in the middle on partial sums.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .budget import resolve_budget
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    EmptyInput,
    InvariantViolation,
    LengthMismatch,
    NonBijectiveSigma,
    NotASolution,
)
from .exact import power_floor
from .points import Point, PointSet

Vector = tuple[int, ...]


def _as_vector(x: Union[int, Sequence[int]]) -> Vector:
    if isinstance(x, int):
        return (x,)
    return tuple(int(c) for c in x)


def _as_vectors(xs: Iterable) -> list[Vector]:
    out = [_as_vector(x) for x in xs]
    if out:
        d = len(out[0])
        for v in out:
            if len(v) != d:
                raise DimensionMismatch(f"vector {v} has dimension {len(v)}, expected {d}")
    return out


@dataclass(frozen=True)
class EquationSpec:
    coeffs: tuple[int, ...]
    fold_bound: int = 1
    ambient_dim: int = 1

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("empty coefficient vector")
        if any(c == 0 for c in self.coeffs):
            raise ValueError("coefficients must be nonzero")
        if sum(self.coeffs) != 0:
            raise ValueError("coefficient vector must sum to zero")
        if self.fold_bound < 1:
            raise ValueError("fold bound must be >= 1")


@dataclass(frozen=True)
class SolutionTuple:
    values: tuple[Vector, ...]


def is_trivial_solution(values: Sequence, coeffs: Sequence[int]) -> bool:
    """True iff grouping equal values gives zero coefficient sums everywhere.

    The values must satisfy the equation; anything else is an error, not a
    "False".
    """
    vals = _as_vectors(values)
    if len(vals) != len(coeffs):
        raise LengthMismatch(f"{len(vals)} values vs {len(coeffs)} coefficients")
    if not vals:
        raise EmptyInput("empty solution")
    d = len(vals[0])
    total = [0] * d
    for v, c in zip(vals, coeffs):
        for i in range(d):
            total[i] += c * v[i]
    if any(total):
        raise NotASolution(f"values do not satisfy the equation (residual {tuple(total)})")
    groups: dict[Vector, int] = {}
    for v, c in zip(vals, coeffs):
        groups[v] = groups.get(v, 0) + c
    return all(s == 0 for s in groups.values())


def _scaled_sum(assignment: Sequence[Vector], coeffs: Sequence[int]) -> Vector:
    d = len(assignment[0])
    acc = [0] * d
    for v, c in zip(assignment, coeffs):
        for i in range(d):
            acc[i] += c * v[i]
    return tuple(acc)


def find_nontrivial_solution(
    V: PointSet,
    spec: EquationSpec,
    budget: Optional[int] = None,
) -> Optional[SolutionTuple]:
    """A non-trivial solution with all values in V, or None (exhaustive).

    Positive-coefficient positions are enumerated on one side, negatives on
    the other; equal partial sums collide in a hash join.
    """
    coeffs = spec.coeffs
    pos = [i for i, c in enumerate(coeffs) if c > 0]
    neg = [i for i, c in enumerate(coeffs) if c < 0]
    elems = list(V.points)
    work = len(elems) ** len(pos) + len(elems) ** len(neg)
    limit = resolve_budget(budget)
    if work > limit:
        raise BudgetExceeded(f"{work} half-assignments exceed budget {limit}")
    neg_coeffs = [-coeffs[i] for i in neg]
    table: dict[Vector, list[tuple[Vector, ...]]] = {}
    for assignment in itertools.product(elems, repeat=len(neg)):
        s = _scaled_sum(assignment, neg_coeffs) if neg else (0,) * V.dim
        table.setdefault(s, []).append(assignment)
    pos_coeffs = [coeffs[i] for i in pos]
    combined = [0] * len(coeffs)
    for assignment in itertools.product(elems, repeat=len(pos)):
        s = _scaled_sum(assignment, pos_coeffs) if pos else (0,) * V.dim
        for other in table.get(s, ()):
            for idx, v in zip(pos, assignment):
                combined[idx] = v
            for idx, v in zip(neg, other):
                combined[idx] = v
            if not is_trivial_solution(combined, coeffs):
                return SolutionTuple(values=tuple(combined))
    return None


def _eq5_coeffs(c1: int, c2: int, r: int) -> tuple[int, ...]:
    return (c1,) * r + (-c1,) * r + (-c2,) * r + (c2,) * r


def _lex_first_witness(
    V: PointSet,
    coeffs: tuple[int, ...],
    budget: Optional[int] = None,
) -> Optional[SolutionTuple]:
    """Lexicographically first non-trivial solution: enumerate all but the
    last position in order and solve for the last value exactly."""
    elems = list(V.points)
    members = set(elems)
    g = len(coeffs)
    work = len(elems) ** (g - 1)
    limit = resolve_budget(budget)
    if work > limit:
        raise BudgetExceeded(f"{work} prefixes exceed budget {limit}")
    c_last = coeffs[-1]
    d = V.dim
    for prefix in itertools.product(elems, repeat=g - 1):
        acc = [0] * d
        for v, c in zip(prefix, coeffs):
            for i in range(d):
                acc[i] += c * v[i]
        last = []
        ok = True
        for i in range(d):
            q, rem = divmod(-acc[i], c_last)
            if rem:
                ok = False
                break
            last.append(q)
        if not ok:
            continue
        candidate = tuple(last)
        if candidate not in members:
            continue
        full = prefix + (candidate,)
        if not is_trivial_solution(full, coeffs):
            return SolutionTuple(values=full)
    return None


@dataclass(frozen=True)
class Eq5Witness:
    c1: int
    c2: int
    solution: SolutionTuple


def verify_eq5(
    V: PointSet,
    r: int,
    budget: Optional[int] = None,
    max_coefficient: Optional[int] = None,
) -> tuple[bool, Optional[Eq5Witness]]:
    """Check the 4r-variable scaled-difference equations for every
    coefficient pair (c1, c2) in [1, M]^2 with M = floor(n^(d/(2rd+1)))
    (or an explicit max_coefficient override).

    True iff only trivial solutions exist; otherwise the witness for the
    first failing (c1, c2) is the lexicographically first solution tuple.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    d, n = V.dim, V.side
    M = max_coefficient if max_coefficient is not None else power_floor(n, d, 2 * r * d + 1)
    if M < 1:
        raise ValueError("coefficient cap must be >= 1")
    if len(V) < 2:
        return True, None
    for c1 in range(1, M + 1):
        for c2 in range(1, M + 1):
            coeffs = _eq5_coeffs(c1, c2, r)
            spec = EquationSpec(coeffs=coeffs, fold_bound=M, ambient_dim=d)
            if find_nontrivial_solution(V, spec, budget=budget) is not None:
                witness = _lex_first_witness(V, coeffs, budget=budget)
                if witness is None:
                    raise InvariantViolation("hash-join found a solution but the lex scan did not")
                return False, Eq5Witness(c1=c1, c2=c2, solution=witness)
    return True, None


@dataclass(frozen=True)
class BgWitness:
    coeffs: tuple[int, ...]
    solution: SolutionTuple


def bg_check(
    V: PointSet,
    g: int,
    m: int,
    budget: Optional[int] = None,
) -> tuple[bool, Optional[BgWitness]]:
    """True iff V has only trivial solutions to
    c_1 x_1 + ... + c_g x_g = c_1 x'_1 + ... + c_g x'_g
    for every coefficient vector with entries in [1, m]."""
    if g < 1 or m < 1:
        raise ValueError("g and m must be >= 1")
    for cs in itertools.product(range(1, m + 1), repeat=g):
        coeffs = tuple(cs) + tuple(-c for c in cs)
        spec = EquationSpec(coeffs=coeffs, fold_bound=m, ambient_dim=V.dim)
        found = find_nontrivial_solution(V, spec, budget=budget)
        if found is not None:
            return False, BgWitness(coeffs=coeffs, solution=found)
    return True, None


def sum_profile(
    V: PointSet,
    r: int,
    budget: Optional[int] = None,
) -> tuple[set[Vector], bool]:
    """All r-subset sums of V, and whether they are pairwise distinct."""
    if r < 1 or r > len(V):
        raise ValueError(f"r={r} outside [1, |V|={len(V)}]")
    total = math.comb(len(V), r)
    limit = resolve_budget(budget)
    if total > limit:
        raise BudgetExceeded(f"{total} subsets exceed budget {limit}")
    sums = set()
    for sub in itertools.combinations(V.points, r):
        sums.add(tuple(sum(c) for c in zip(*sub)))
    return sums, len(sums) == total


def sigma_preimages(
    V: PointSet,
    r: int,
    budget: Optional[int] = None,
) -> dict[Vector, tuple[Point, ...]]:
    """sum vector -> the unique r-subset realizing it; requires distinct sums."""
    if r < 1 or r > len(V):
        raise ValueError(f"r={r} outside [1, |V|={len(V)}]")
    total = math.comb(len(V), r)
    limit = resolve_budget(budget)
    if total > limit:
        raise BudgetExceeded(f"{total} subsets exceed budget {limit}")
    out: dict[Vector, tuple[Point, ...]] = {}
    for sub in itertools.combinations(V.points, r):
        s = tuple(sum(c) for c in zip(*sub))
        if s in out:
            raise NonBijectiveSigma(f"sum {s} realized by {out[s]} and {sub}")
        out[s] = sub
    return out


@dataclass(frozen=True)
class PhiTable:
    counts: dict[Vector, int]

    def __getitem__(self, x) -> int:
        return self.counts.get(_as_vector(x), 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def sorted_items(self):
        return sorted(self.counts.items())


def phi(U: Iterable, T: Iterable) -> PhiTable:
    """Difference-count table: counts[x] = #{(u, t) in U x T : u - t = x}."""
    us = _as_vectors(U)
    ts = _as_vectors(T)
    if us and ts and len(us[0]) != len(ts[0]):
        raise DimensionMismatch("U and T have different dimensions")
    counts: dict[Vector, int] = {}
    for u in us:
        for t in ts:
            x = tuple(a - b for a, b in zip(u, t))
            counts[x] = counts.get(x, 0) + 1
    return PhiTable(counts=counts)


@dataclass(frozen=True)
class CsReport:
    lhs: Fraction
    rhs: int
    holds: bool


def check_cs(U: Iterable, T: Iterable) -> CsReport:
    """Exact check of (|U||T|)^2 / |U+T| <= sum_x phi_UU(x) * phi_TT(x)."""
    us = _as_vectors(U)
    ts = _as_vectors(T)
    if not us or not ts:
        raise EmptyInput("both sets must be non-empty")
    if len(us[0]) != len(ts[0]):
        raise DimensionMismatch("U and T have different dimensions")
    uset = set(us)
    tset = set(ts)
    if len(uset) != len(us) or len(tset) != len(ts):
        raise ValueError("U and T must not contain repeats")
    sumset = {tuple(a + b for a, b in zip(u, t)) for u in uset for t in tset}
    lhs = Fraction((len(uset) * len(tset)) ** 2, len(sumset))
    phi_uu = phi(uset, uset)
    phi_tt = phi(tset, tset)
    rhs = sum(c * phi_tt.counts.get(x, 0) for x, c in phi_uu.counts.items())
    return CsReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs)


@dataclass(frozen=True)
class Dissection:
    j: int
    parts: dict[Vector, tuple[Vector, ...]]

    def part(self, w) -> tuple[Vector, ...]:
        return self.parts.get(_as_vector(w), ())

    def total(self) -> int:
        return sum(len(p) for p in self.parts.values())


def dissect(sums: Iterable, j: int) -> Dissection:
    """Split sum vectors by residue mod j: parts[w] = {u : j*u + w in sums}."""
    if j < 1:
        raise ValueError("j must be >= 1")
    vecs = _as_vectors(sums)
    parts: dict[Vector, list[Vector]] = {}
    for s in vecs:
        w = tuple(c % j for c in s)
        u = tuple((c - r) // j for c, r in zip(s, w))
        parts.setdefault(w, []).append(u)
    out = Dissection(j=j, parts={w: tuple(sorted(p)) for w, p in parts.items()})
    if out.total() != len(vecs):
        raise InvariantViolation("residue parts do not partition the sums")
    return out


def stratified_phi(
    dissection: Dissection,
    w,
    preimages: dict[Vector, tuple[Point, ...]],
    i: int,
) -> PhiTable:
    """Difference counts over one residue part, restricted to ordered pairs
    whose realizing subsets share exactly i points."""
    if i < 0:
        raise ValueError("stratum index must be >= 0")
    j = dissection.j
    wvec = _as_vector(w)
    part = dissection.part(wvec)
    subsets = {}
    for u in part:
        s = tuple(j * c + r for c, r in zip(u, wvec))
        if s not in preimages:
            raise NonBijectiveSigma(f"sum {s} missing from the preimage map")
        subsets[u] = frozenset(preimages[s])
    counts: dict[Vector, int] = {}
    for u1 in part:
        for u2 in part:
            if len(subsets[u1] & subsets[u2]) != i:
                continue
            x = tuple(a - b for a, b in zip(u1, u2))
            counts[x] = counts.get(x, 0) + 1
    return PhiTable(counts=counts)


@dataclass(frozen=True)
class MultifoldBound:
    d: int
    r: int
    k: Optional[int]
    exponent: Fraction
    direct_count_exponent: Optional[Fraction]
    modulus_cap: Optional[int]  # largest coefficient bound used at side n
    box_side: Optional[int]  # companion residue-box side at n

    @property
    def exponent_float(self) -> float:
        return float(self.exponent)


def multifold_bound(
    d: int,
    r: Optional[int] = None,
    k: Optional[int] = None,
    n: Optional[int] = None,
) -> MultifoldBound:
    """Exponent (d/2r)(1 - 1/(2rd+1)) of the extremal-size bound, exactly.

    With k given, r defaults to floor((k+2)/4) and the direct distinct-sums
    exponent d/floor((k+2)/2) is filled in for comparison.  With n given,
    the integer report constants floor(n^(d/(2rd+1))) and its companion
    floor(n^(1 - d/(2rd+1))) are evaluated by exact root extraction.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    direct = None
    if r is None:
        if k is None:
            raise ValueError("give r or k")
        if k < 2:
            raise ValueError("k must be >= 2 to derive r")
        r = (k + 2) // 4
    if k is not None:
        direct = Fraction(d, (k + 2) // 2)
    if r < 1:
        raise ValueError("r must be >= 1")
    q = 2 * r * d + 1
    exponent = Fraction(d, 2 * r) * (1 - Fraction(1, q))
    cap = box = None
    if n is not None:
        if n < 1:
            raise ValueError("n must be >= 1")
        cap = power_floor(n, d, q)
        box = power_floor(n, q - d, q)
    return MultifoldBound(
        d=d,
        r=r,
        k=k,
        exponent=exponent,
        direct_count_exponent=direct,
        modulus_cap=cap,
        box_side=box,
    )


@dataclass(frozen=True)
class DistinctSumsCertificate:
    bijective: bool
    subsets: int  # C(|V|, k/2+1)
    sum_space: int  # (k*n)^d
    holds: bool


def distinct_sums_certificate(
    V: PointSet,
    k: int,
    budget: Optional[int] = None,
) -> DistinctSumsCertificate:
    """For V free of (k+2)-point k-flat incidences (k even, |V| >= k+2), the
    (k/2+1)-subset sums are distinct, so C(|V|, k/2+1) <= (k*n)^d."""
    if k < 2 or k % 2 != 0:
        raise ValueError("k must be even and >= 2")
    r = k // 2 + 1
    _, bijective = sum_profile(V, r, budget=budget)
    subsets = math.comb(len(V), r)
    space = (k * V.side) ** V.dim
    return DistinctSumsCertificate(
        bijective=bijective,
        subsets=subsets,
        sum_space=space,
        holds=bijective and subsets <= space,
    )
