"""Hausdorff and Gromov-Hausdorff distances, plus partition/cover witness checks.

The Gromov-Hausdorff distance is computed as half the minimum distortion over
correspondences (relations covering both point sets), the standard equivalent
of the infimum over common isometric embeddings for compact spaces.  All
comparisons are exact: matrices are rescaled to integers by the common
denominator before the search.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .embed import build_dendrogram
from .space import FiniteMetricSpace


class EmptySubset(ValueError):
    """Hausdorff distance needs nonempty subsets."""


class EmptySpace(ValueError):
    """Gromov-Hausdorff between an empty and a nonempty space is undefined here."""


class NotAPartition(ValueError):
    """Blocks must be disjoint, nonempty, and exhaust the point set."""


class NotACover(ValueError):
    """Cover members must union to the whole point set."""


@dataclass(frozen=True)
class Correspondence:
    """Index pairs (i, j) relating two spaces, covering both sides."""

    pairs: tuple[tuple[int, int], ...]

    def covers(self, nx: int, ny: int) -> bool:
        return ({i for i, _ in self.pairs} == set(range(nx))
                and {j for _, j in self.pairs} == set(range(ny)))


@dataclass(frozen=True)
class GhResult:
    """Gromov-Hausdorff value with its correspondence and proof quality.

    proof == "exact" means value is the true distance (lower == upper == value);
    proof == "bounds" means the node budget ran out and value is the best
    incumbent (an upper bound), with lower a cheap admissible bound.
    """

    value: Fraction
    correspondence: Correspondence
    proof: str
    lower: Fraction
    upper: Fraction


@dataclass(frozen=True)
class PartitionWitness:
    """A partition certifying separation-with-small-mesh membership."""

    blocks: tuple[tuple[str, ...], ...]
    N: int
    M: int
    kind: str  # "injectivity" for the pairwise check, "dimension" for covers
    search_space: str


def hausdorff(ambient: FiniteMetricSpace, A: Sequence[str], B: Sequence[str]) -> Fraction:
    """Hausdorff distance between two nonempty label subsets inside a space."""
    if not A or not B:
        raise EmptySubset("both subsets must be nonempty")
    ia = [ambient.index(a) for a in A]
    ib = [ambient.index(b) for b in B]
    ab = max(min(ambient.dist[i][j] for j in ib) for i in ia)
    ba = max(min(ambient.dist[i][j] for i in ia) for j in ib)
    return max(ab, ba)


# ---------------------------------------------------------------------------
# Gromov-Hausdorff


def _scaled_ints(X: FiniteMetricSpace, Y: FiniteMetricSpace):
    denoms = [v.denominator for row in X.dist for v in row]
    denoms += [v.denominator for row in Y.dist for v in row]
    scale = lcm(*denoms) if denoms else 1
    dx = [[int(v * scale) for v in row] for row in X.dist]
    dy = [[int(v * scale) for v in row] for row in Y.dist]
    return scale, dx, dy


def _greedy_correspondence(dx: list[list[int]], dy: list[list[int]]):
    """Deterministic greedy correspondence and its distortion (integer scale)."""
    nx, ny = len(dx), len(dy)
    order = sorted(range(nx), key=lambda i: (-max(dx[i]), i))
    pairs: list[tuple[int, int]] = []
    distortion = 0
    for i in order:
        best_j, best_inc = 0, None
        for j in range(ny):
            inc = max((abs(dx[i][p] - dy[j][q]) for p, q in pairs), default=0)
            if best_inc is None or inc < best_inc:
                best_j, best_inc = j, inc
        pairs.append((i, best_j))
        distortion = max(distortion, best_inc)
    covered = {j for _, j in pairs}
    for j in range(ny):
        if j in covered:
            continue
        best_i, best_inc = 0, None
        for i in range(nx):
            inc = max((abs(dx[i][p] - dy[j][q]) for p, q in pairs), default=0)
            if best_inc is None or inc < best_inc:
                best_i, best_inc = i, inc
        pairs.append((best_i, j))
        distortion = max(distortion, best_inc)
    return sorted(pairs), distortion


def _multiset_lower(dx: list[list[int]], dy: list[list[int]]) -> int:
    """Distortion lower bound: any distance on one side must sit within the
    distortion of some distance (or 0, via repeated points) on the other."""
    ax = sorted({0} | {dx[i][j] for i in range(len(dx)) for j in range(i + 1, len(dx))})
    ay = sorted({0} | {dy[i][j] for i in range(len(dy)) for j in range(i + 1, len(dy))})

    def one_sided(avals, bvals):
        worst = 0
        for a in avals:
            k = bisect_left(bvals, a)
            near = min(
                (abs(a - bvals[t]) for t in (k - 1, k) if 0 <= t < len(bvals)))
            worst = max(worst, near)
        return worst

    return max(one_sided(ax, ay), one_sided(ay, ax))


def gh_exact(X: FiniteMetricSpace, Y: FiniteMetricSpace, budget: int = 2_000_000) -> GhResult:
    """Gromov-Hausdorff distance by branch-and-bound over correspondences.

    Minimal correspondences decompose into a map X -> Y plus a partner for each
    uncovered Y point, and dropping relation pairs never increases distortion,
    so searching that family is exact.  X points are assigned in decreasing
    eccentricity order; the running partial distortion is the (monotone) bound,
    with the greedy correspondence as the initial incumbent.  If the node
    budget runs out, the incumbent is returned with a bounds proof.  Feasible
    exactly up to |X|, |Y| around 7.
    """
    if X.n == 0 and Y.n == 0:
        zero = Fraction(0)
        return GhResult(zero, Correspondence(()), "exact", zero, zero)
    if X.n == 0 or Y.n == 0:
        raise EmptySpace("both spaces must be nonempty")

    scale, dx, dy = _scaled_ints(X, Y)
    nx, ny = X.n, Y.n
    greedy_pairs, greedy_dist = _greedy_correspondence(dx, dy)
    diam_gap = abs(max(max(r) for r in dx) - max(max(r) for r in dy))
    lower = max(diam_gap, _multiset_lower(dx, dy))

    best = greedy_dist
    best_pairs = greedy_pairs
    order = sorted(range(nx), key=lambda i: (-max(dx[i]), i))
    chosen: list[tuple[int, int]] = []
    nodes = 0
    exhausted = False

    def increment(i: int, j: int) -> int:
        return max((abs(dx[i][p] - dy[j][q]) for p, q in chosen), default=0)

    def assign_x(t: int, cur: int) -> None:
        nonlocal best, best_pairs, nodes, exhausted
        if exhausted or best <= lower:
            return
        if t == nx:
            covered = {j for _, j in chosen}
            uncovered = [j for j in range(ny) if j not in covered]
            cover_y(0, uncovered, cur)
            return
        i = order[t]
        for j in range(ny):
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            new = max(cur, increment(i, j))
            if new >= best:
                continue
            chosen.append((i, j))
            assign_x(t + 1, new)
            chosen.pop()
            if exhausted:
                return

    def cover_y(u: int, uncovered: list[int], cur: int) -> None:
        nonlocal best, best_pairs, nodes, exhausted
        if exhausted or best <= lower:
            return
        if u == len(uncovered):
            if cur < best:
                best = cur
                best_pairs = sorted(chosen)
            return
        j = uncovered[u]
        for i in range(nx):
            nodes += 1
            if nodes > budget:
                exhausted = True
                return
            new = max(cur, increment(i, j))
            if new >= best:
                continue
            chosen.append((i, j))
            cover_y(u + 1, uncovered, new)
            chosen.pop()
            if exhausted:
                return

    assign_x(0, 0)

    value = Fraction(best, 2 * scale)
    lower_frac = Fraction(min(lower, best), 2 * scale)
    corr = Correspondence(tuple(best_pairs))
    if exhausted:
        return GhResult(value, corr, "bounds", lower_frac, value)
    return GhResult(value, corr, "exact", value, value)


def gh_bounds(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> tuple[Fraction, Fraction]:
    """Cheap Gromov-Hausdorff bracket: diameter/distance-multiset lower bound
    and the greedy correspondence's distortion as the upper bound."""
    if X.dist == Y.dist:
        return Fraction(0), Fraction(0)
    if X.n == 0 or Y.n == 0:
        raise EmptySpace("both spaces must be nonempty")
    scale, dx, dy = _scaled_ints(X, Y)
    diam_gap = abs(max(max(r) for r in dx) - max(max(r) for r in dy))
    lower = max(diam_gap, _multiset_lower(dx, dy))
    _, upper = _greedy_correspondence(dx, dy)
    return Fraction(lower, 2 * scale), Fraction(upper, 2 * scale)


def correspondence_distortion(X: FiniteMetricSpace, Y: FiniteMetricSpace,
                              pairs: Sequence[tuple[int, int]]) -> Fraction:
    """Exact distortion of a correspondence given as index pairs."""
    worst = Fraction(0)
    for (i, j), (p, q) in itertools.combinations_with_replacement(pairs, 2):
        gap = abs(X.dist[i][p] - Y.dist[j][q])
        if gap > worst:
            worst = gap
    return worst


# ---------------------------------------------------------------------------
# witness-set checks


def _resolve_blocks(space: FiniteMetricSpace, blocks: Sequence[Sequence[str]],
                    require_partition: bool) -> list[list[int]]:
    idx_blocks = [[space.index(a) for a in blk] for blk in blocks]
    flat = [i for blk in idx_blocks for i in blk]
    if require_partition:
        if any(not blk for blk in idx_blocks):
            raise NotAPartition("empty block")
        if len(flat) != len(set(flat)) or set(flat) != set(range(space.n)):
            raise NotAPartition("blocks must be disjoint and exhaust the point set")
    else:
        if set(flat) != set(range(space.n)):
            raise NotACover("cover members must union to the whole point set")
    return idx_blocks


def check_mnm(space: FiniteMetricSpace, blocks: Sequence[Sequence[str]],
              N: int, M: int):
    """Membership test for the mesh-and-separation partition condition.

    True iff every block has diameter < 1/N and, for any two *distinct*
    unordered block pairs, all cross-block distances differ by more than 1/M.
    Returns (ok, violation) with the first violation described as a dict.
    """
    if N < 1 or M < 1:
        raise ValueError("N and M must be positive integers")
    idx_blocks = _resolve_blocks(space, blocks, require_partition=True)
    inv_n = Fraction(1, N)
    inv_m = Fraction(1, M)

    for b, blk in enumerate(idx_blocks):
        diam = space.subset_diameter(blk)
        if diam >= inv_n:
            return False, {"kind": "mesh", "block": b, "diameter": diam, "limit": inv_n}

    block_pairs = list(itertools.combinations(range(len(idx_blocks)), 2))
    for (p1, p2) in itertools.combinations(block_pairs, 2):
        (i, j), (ii, jj) = p1, p2
        for x in idx_blocks[i]:
            for y in idx_blocks[j]:
                dxy = space.dist[x][y]
                for xx in idx_blocks[ii]:
                    for yy in idx_blocks[jj]:
                        gap = abs(dxy - space.dist[xx][yy])
                        if gap <= inv_m:
                            return False, {
                                "kind": "separation",
                                "block_pair_a": p1, "block_pair_b": p2,
                                "points": (space.labels[x], space.labels[y],
                                           space.labels[xx], space.labels[yy]),
                                "gap": gap, "limit": inv_m,
                            }
    return True, None


def _dendrogram_cuts(tree) -> list[list[tuple[str, ...]]]:
    """Horizontal cuts: for each threshold h (descending through the node
    diameters), the maximal nodes of diameter <= h.  Coarsest first."""
    def frontier_at(node, h):
        if node.diameter <= h:
            return [node.points]
        return [blk for child in node.children for blk in frontier_at(child, h)]

    cuts = []
    seen = set()
    for h in sorted({node.diameter for node in tree.walk()}, reverse=True):
        cut = frontier_at(tree, h)
        key = tuple(sorted(cut))
        if key not in seen:
            seen.add(key)
            cuts.append(cut)
    return cuts


def find_mnm_partition(space: FiniteMetricSpace, N: int, M: int) -> PartitionWitness | None:
    """First passing partition among the cluster hierarchy's horizontal cuts.

    Cuts are tried coarsest first.  The search is deliberately restricted to
    dendrogram cuts (all partitions would be a Bell-number blowup), so None
    means only that no *cut* passes; the witness records this as its
    search_space.  Compare with exhaustive_mnm_partition on small spaces.
    """
    if space.n == 0:
        return PartitionWitness(blocks=(), N=N, M=M, kind="injectivity",
                                search_space="dendrogram-cuts")
    tree = build_dendrogram(space)
    for cut in _dendrogram_cuts(tree):
        ok, _ = check_mnm(space, cut, N, M)
        if ok:
            return PartitionWitness(blocks=tuple(tuple(b) for b in cut), N=N, M=M,
                                    kind="injectivity", search_space="dendrogram-cuts")
    return None


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def exhaustive_mnm_partition(space: FiniteMetricSpace, N: int, M: int) -> PartitionWitness | None:
    """Test oracle: try every partition (n <= 8 only) and return the first pass."""
    if space.n > 8:
        raise ValueError("exhaustive partition search is limited to 8 points")
    if space.n == 0:
        return PartitionWitness(blocks=(), N=N, M=M, kind="injectivity",
                                search_space="exhaustive")
    for part in _set_partitions(list(space.labels)):
        ok, _ = check_mnm(space, part, N, M)
        if ok:
            return PartitionWitness(blocks=tuple(tuple(b) for b in part), N=N, M=M,
                                    kind="injectivity", search_space="exhaustive")
    return None


def cover_order(space: FiniteMetricSpace, cover: Sequence[Sequence[str]]) -> int:
    """Largest k such that some k+1 cover members share a common point.

    For finite spaces a common intersection is witnessed pointwise, so this is
    (max membership count over points) - 1.  A disjoint partition has order 0;
    the empty space gives -1.
    """
    _resolve_blocks(space, cover, require_partition=False)
    counts = {label: 0 for label in space.labels}
    for member in cover:
        for a in set(member):
            counts[a] += 1
    if not counts:
        return -1
    return max(counts.values()) - 1


def check_dimension_witness(space: FiniteMetricSpace, cover: Sequence[Sequence[str]],
                            N: int, M: int, n: int):
    """Membership test for the dimension-flavored cover condition.

    True iff the cover's mesh is < 1/N and, for every (n+2)-element subfamily V
    and every member U of V, the distance from U to the intersection of the
    other n+1 members exceeds 1/M (vacuous when that intersection is empty).
    Returns (ok, violation).
    """
    if N < 1 or M < 1:
        raise ValueError("N and M must be positive integers")
    if n < 0:
        raise ValueError("n must be non-negative")
    idx_cover = _resolve_blocks(space, cover, require_partition=False)
    inv_n = Fraction(1, N)
    inv_m = Fraction(1, M)

    for c, member in enumerate(idx_cover):
        diam = space.subset_diameter(member)
        if diam >= inv_n:
            return False, {"kind": "mesh", "member": c, "diameter": diam, "limit": inv_n}

    sets = [set(member) for member in idx_cover]
    if len(sets) >= n + 2:
        for family in itertools.combinations(range(len(sets)), n + 2):
            for u in family:
                partial = None
                for v in family:
                    if v == u:
                        continue
                    partial = sets[v] if partial is None else partial & sets[v]
                    if not partial:
                        break
                if not partial or not sets[u]:
                    continue
                sep = min(space.dist[x][y] for x in sets[u] for y in partial)
                if sep <= inv_m:
                    return False, {
                        "kind": "separation", "subfamily": family, "excluded": u,
                        "distance": sep, "limit": inv_m,
                    }
    return True, None
