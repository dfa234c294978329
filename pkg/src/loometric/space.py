"""Finite metric spaces over exact rational distances.

Everything downstream (patterns, embeddings, Gromov-Hausdorff search) compares
distances for *exact* equality, so the distance matrix is stored as
``fractions.Fraction`` entries and floats are converted through their decimal
string form rather than their binary expansion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def to_fraction(value) -> Fraction:
    """Convert an int, str ("p/q" or decimal), Fraction or float to Fraction.

    Floats go through ``str()`` so a literal like 0.1 becomes exactly 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


class MetricValidationError(ValueError):
    """A raw matrix failed one of the metric axioms."""

    kind = "invalid"

    def __init__(self, message: str, witness: Sequence[int]):
        super().__init__(message)
        self.witness = tuple(witness)

    def to_json(self) -> dict:
        return {"kind": self.kind, "witness": list(self.witness), "message": str(self)}


class Asymmetric(MetricValidationError):
    kind = "asymmetric"


class NonzeroDiagonal(MetricValidationError):
    kind = "nonzero-diagonal"


class ZeroOffDiagonal(MetricValidationError):
    kind = "zero-off-diagonal"


class NegativeEntry(MetricValidationError):
    kind = "negative-entry"


class TriangleViolation(MetricValidationError):
    kind = "triangle-violation"


class EmptyThresholds(ValueError):
    """isolation_strip called with no thresholds."""


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A labeled point set with a validated symmetric rational distance matrix.

    Instances are immutable and safe to share across threads.  Construct via
    :func:`validate_metric`; direct construction skips the axiom checks.
    """

    labels: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def d_label(self, a: str, b: str) -> Fraction:
        return self.dist[self.index(a)][self.index(b)]

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def diameter(self) -> Fraction:
        return max((v for row in self.dist for v in row), default=Fraction(0))

    def min_positive_distance(self) -> Fraction | None:
        values = [self.dist[i][j] for i in range(self.n) for j in range(i + 1, self.n)]
        return min(values) if values else None

    def pair_key(self, pair: tuple[int, int]) -> tuple[str, str]:
        return (self.labels[pair[0]], self.labels[pair[1]])

    def canonical_pair(self, i: int, j: int) -> tuple[int, int]:
        """Orient an index pair so the lexicographically smaller label comes first."""
        return (i, j) if self.labels[i] <= self.labels[j] else (j, i)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        """All off-diagonal pairs, canonically oriented, sorted by label pair."""
        pairs = [self.canonical_pair(i, j)
                 for i, j in itertools.combinations(range(self.n), 2)]
        pairs.sort(key=self.pair_key)
        return pairs

    def subset_diameter(self, indices: Iterable[int]) -> Fraction:
        idx = list(indices)
        return max((self.dist[i][j] for i, j in itertools.combinations(idx, 2)),
                   default=Fraction(0))

    def restrict(self, labels: Sequence[str]) -> "FiniteMetricSpace":
        """Sub-space on the given labels (kept in the given order)."""
        idx = [self.index(a) for a in labels]
        return FiniteMetricSpace(
            labels=tuple(labels),
            dist=tuple(tuple(self.dist[i][j] for j in idx) for i in idx),
        )

    def permuted(self, order: Sequence[int]) -> "FiniteMetricSpace":
        """Relabeled copy: position k of the result is old position order[k]."""
        return FiniteMetricSpace(
            labels=tuple(self.labels[i] for i in order),
            dist=tuple(tuple(self.dist[i][j] for j in order) for i in order),
        )


def validate_metric(labels: Sequence[str], matrix: Sequence[Sequence]) -> FiniteMetricSpace:
    """Check the metric axioms on a raw square matrix and build the space.

    Raises the structured error naming the first violated axiom, scanning
    diagonal/negativity first, then symmetry, then the triangle inequality
    (all in row-major index order).
    """
    labels = tuple(str(a) for a in labels)
    n = len(labels)
    if len(set(labels)) != n:
        raise ValueError("labels must be pairwise distinct")
    if len(matrix) != n:
        raise ValueError(f"matrix has {len(matrix)} rows for {n} labels")
    rows = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
        rows.append(tuple(to_fraction(v) for v in row))
    d = tuple(rows)

    for i in range(n):
        if d[i][i] != 0:
            raise NonzeroDiagonal(f"d[{i}][{i}] = {d[i][i]} != 0", (i,))
    for i in range(n):
        for j in range(n):
            if d[i][j] < 0:
                raise NegativeEntry(f"d[{i}][{j}] = {d[i][j]} < 0", (i, j))
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                raise Asymmetric(f"d[{i}][{j}] = {d[i][j]} != d[{j}][{i}] = {d[j][i]}", (i, j))
            if d[i][j] == 0:
                raise ZeroOffDiagonal(f"d[{i}][{j}] = 0 for distinct points", (i, j))
    for i in range(n):
        for j in range(i + 1, n):
            dij = d[i][j]
            for k in range(n):
                if k == i or k == j:
                    continue
                if dij > d[i][k] + d[k][j]:
                    raise TriangleViolation(
                        f"d[{i}][{j}] = {dij} > d[{i}][{k}] + d[{k}][{j}] = {d[i][k] + d[k][j]}",
                        (i, j, k),
                    )
    return FiniteMetricSpace(labels=labels, dist=d)


@dataclass(frozen=True)
class PatternBlock:
    """One distance-equality class: its representative value and its pairs."""

    value: Fraction
    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class DistancePattern:
    """Partition of the off-diagonal pairs by distance equality.

    Blocks are sorted by representative value ascending; pairs inside a block
    are canonically oriented and sorted by label pair.
    """

    blocks: tuple[PatternBlock, ...]

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def block_index_of(self) -> dict[tuple[int, int], int]:
        """Map each canonical pair to the index of its block."""
        out: dict[tuple[int, int], int] = {}
        for b, block in enumerate(self.blocks):
            for p in block.pairs:
                out[p] = b
        return out


def distance_pattern(space: FiniteMetricSpace, tolerance: Fraction | None = None) -> DistancePattern:
    """Group point pairs by distance equality.

    The default mode compares exactly.  With ``tolerance`` set, distances are
    grouped by single linkage on the sorted value list: two values land in the
    same block when they are chained by gaps <= tolerance.  The representative
    value of a block is its smallest member.
    """
    groups: dict[Fraction, list[tuple[int, int]]] = {}
    for pair in space.sorted_pairs():
        groups.setdefault(space.d(*pair), []).append(pair)
    values = sorted(groups)

    if tolerance is None:
        merged = [[v] for v in values]
    else:
        tolerance = to_fraction(tolerance)
        if tolerance < 0:
            raise ValueError("tolerance must be non-negative")
        merged = []
        for v in values:
            if merged and v - merged[-1][-1] <= tolerance:
                merged[-1].append(v)
            else:
                merged.append([v])

    blocks = []
    for chain in merged:
        pairs = [p for v in chain for p in groups[v]]
        pairs.sort(key=space.pair_key)
        blocks.append(PatternBlock(value=chain[0], pairs=tuple(pairs)))
    return DistancePattern(blocks=tuple(blocks))


def is_injective(space: FiniteMetricSpace):
    """Whether all off-diagonal distances are pairwise distinct.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is the
    lexicographically smallest pair of pairs sharing a distance, as label pairs.
    """
    groups: dict[Fraction, list[tuple[int, int]]] = {}
    for pair in space.sorted_pairs():
        groups.setdefault(space.d(*pair), []).append(pair)
    best = None
    for pairs in groups.values():
        if len(pairs) >= 2:
            cand = (space.pair_key(pairs[0]), space.pair_key(pairs[1]))
            if best is None or cand < best:
                best = cand
    if best is None:
        return True, None
    return False, best


def points_ge_r(space: FiniteMetricSpace, r: Fraction, active: Sequence[int] | None = None) -> tuple[str, ...]:
    """The points whose nearest neighbor is at distance >= r.

    ``active`` optionally restricts both the candidates and the neighbors to a
    sub-space given by indices.  A point with no neighbors (n = 1) qualifies
    vacuously.  Result labels follow the space's positional order.
    """
    r = to_fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    idx = list(range(space.n)) if active is None else list(active)
    out = []
    for i in idx:
        if all(space.dist[i][j] >= r for j in idx if j != i):
            out.append(space.labels[i])
    return tuple(out)


@dataclass(frozen=True)
class StripFiltration:
    """Result of repeatedly removing r-separated points at decreasing radii."""

    thresholds: tuple[Fraction, ...]
    layers: tuple[tuple[str, ...], ...]
    residue: tuple[str, ...]


def isolation_strip(space: FiniteMetricSpace, thresholds: Sequence) -> StripFiltration:
    """Peel off, at each threshold r in turn, the points that have no remaining
    neighbor closer than r.

    Thresholds must be strictly decreasing positive rationals.  Layers plus the
    residue partition the point set; re-running on the residue with the same
    thresholds removes nothing.
    """
    ths = tuple(to_fraction(t) for t in thresholds)
    if not ths:
        raise EmptyThresholds("at least one threshold is required")
    if any(t <= 0 for t in ths):
        raise ValueError("thresholds must be positive")
    if any(a <= b for a, b in zip(ths, ths[1:])):
        raise ValueError("thresholds must be strictly decreasing")

    remaining = list(range(space.n))
    layers = []
    for r in ths:
        layer = points_ge_r(space, r, active=remaining)
        taken = {space.index(a) for a in layer}
        remaining = [i for i in remaining if i not in taken]
        layers.append(layer)
    residue = tuple(space.labels[i] for i in remaining)
    return StripFiltration(thresholds=ths, layers=tuple(layers), residue=residue)
