"""Lattice point sets and their on-disk text format.

Points are plain tuples of Python ints.  A PointSet pins the ambient
dimension d and grid side n, keeps its points canonically sorted, and
rejects duplicates or coordinates outside [1, n].

Text format (shared project-wide): first line "d n", then one point per
line as d space-separated base-10 integers.  Blank lines and lines starting
with '#' are ignored on input.  Serialization is canonical (sorted points,
single spaces, '\n' endings), so parse-then-serialize is byte-identical
for canonical files.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FormatError

Point = tuple[int, ...]


@dataclass(frozen=True)
class PointSet:
    dim: int
    side: int
    points: tuple[Point, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.side < 1:
            raise ValueError("side must be >= 1")
        for p in self.points:
            if len(p) != self.dim:
                raise ValueError(f"point {p} has dimension {len(p)}, expected {self.dim}")
            for c in p:
                if not 1 <= c <= self.side:
                    raise ValueError(f"coordinate {c} of {p} outside [1, {self.side}]")
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate points")
        if list(self.points) != sorted(self.points):
            raise ValueError("points not in canonical (sorted) order; use PointSet.of")

    @classmethod
    def of(cls, dim: int, side: int, points: Iterable[Sequence[int]]) -> "PointSet":
        """Build a PointSet, canonicalizing order and tuple-ifying points."""
        pts = sorted(tuple(int(c) for c in p) for p in points)
        return cls(dim, side, tuple(pts))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return p in set(self.points)


def full_grid(n: int, d: int) -> PointSet:
    """The full grid {1..n}^d."""
    pts = tuple(itertools.product(range(1, n + 1), repeat=d))
    return PointSet(d, n, pts)


def dump_points(ps: PointSet) -> str:
    lines = [f"{ps.dim} {ps.side}"]
    lines.extend(" ".join(str(c) for c in p) for p in ps.points)
    return "\n".join(lines) + "\n"


def parse_points(text: str) -> tuple[PointSet, list[str]]:
    """Parse the shared text format.

    Returns (point set, warnings).  Comment and blank lines are dropped; a
    non-canonical point order is accepted but canonicalized with a warning.
    Malformed lines raise FormatError with the offending line number.
    """
    header = None
    raw: list[tuple[int, Point]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise FormatError(f"non-integer token in {stripped!r}", line=lineno)
        if header is None:
            if len(values) != 2:
                raise FormatError("header must be 'd n'", line=lineno)
            d, n = values
            if d < 1 or n < 1:
                raise FormatError("header values must be positive", line=lineno)
            header = (d, n)
            continue
        d, n = header
        if len(values) != d:
            raise FormatError(f"expected {d} coordinates, got {len(values)}", line=lineno)
        for c in values:
            if not 1 <= c <= n:
                raise FormatError(f"coordinate {c} outside [1, {n}]", line=lineno)
        raw.append((lineno, tuple(values)))
    if header is None:
        raise FormatError("missing 'd n' header", line=1)
    d, n = header
    warnings = []
    pts = [p for _, p in raw]
    seen: dict[Point, int] = {}
    for lineno, p in raw:
        if p in seen:
            raise FormatError(f"duplicate point {p} (first at line {seen[p]})", line=lineno)
        seen[p] = lineno
    if pts != sorted(pts):
        warnings.append("points were not in canonical order; canonicalized")
    return PointSet.of(d, n, pts), warnings


def parse_integers(text: str, side: int | None = None) -> tuple[PointSet, list[str]]:
    """Parse the simple 1-d format: one integer per line.

    The grid side defaults to the largest value present unless given.
    """
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 1:
            raise FormatError("expected a single integer per line", line=lineno)
        try:
            v = int(tokens[0])
        except ValueError:
            raise FormatError(f"non-integer token {tokens[0]!r}", line=lineno)
        if v < 1:
            raise FormatError(f"value {v} must be >= 1", line=lineno)
        values.append((lineno, v))
    if not values:
        raise FormatError("empty input", line=1)
    seen: dict[int, int] = {}
    for lineno, v in values:
        if v in seen:
            raise FormatError(f"duplicate value {v} (first at line {seen[v]})", line=lineno)
        seen[v] = lineno
    n = side if side is not None else max(v for _, v in values)
    warnings = []
    flat = [v for _, v in values]
    if flat != sorted(flat):
        warnings.append("values were not in canonical order; canonicalized")
    return PointSet.of(1, n, [(v,) for v in flat]), warnings


def parse_vector_list(text: str) -> list[tuple[int, ...]]:
    """Parse a plain list of integer vectors (no header, any values).

    Accepts one vector per line, space-separated; used for difference-set
    inputs that are not grid point sets.  Duplicates are rejected.
    """
    vectors: list[tuple[int, ...]] = []
    dim = None
    seen: dict[tuple[int, ...], int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            vec = tuple(int(t) for t in stripped.split())
        except ValueError:
            raise FormatError(f"non-integer token in {stripped!r}", line=lineno)
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise FormatError(f"expected {dim} coordinates, got {len(vec)}", line=lineno)
        if vec in seen:
            raise FormatError(f"duplicate vector {vec} (first at line {seen[vec]})", line=lineno)
        seen[vec] = lineno
        vectors.append(vec)
    if not vectors:
        raise FormatError("empty input", line=1)
    return vectors


def load_vector_list(path: str) -> list[tuple[int, ...]]:
    with open(path, "r", encoding="ascii") as fh:
        return parse_vector_list(fh.read())


def load_points(path: str, side: int | None = None) -> tuple[PointSet, list[str]]:
    """Load a point set from a file, sniffing between the two formats."""
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if len(stripped.split()) == 2:
            return parse_points(text)
        return parse_integers(text, side=side)
    raise FormatError("empty input", line=1)


def write_points(path: str, ps: PointSet) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dump_points(ps))
