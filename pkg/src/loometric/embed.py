"""Construction and verification of pattern-preserving (loose) embeddings.

A loose embedding maps points to R^n injectively so that two image distances
are equal exactly when the two source distances are.  Verification compares
squared Euclidean distances in exact rational arithmetic: for non-negative
reals, x = y iff x^2 = y^2, so squaring removes every irrational square root
without changing the equality pattern.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterator, Mapping, Sequence

import numpy as np

from .obstruction import SimplexWitness, dim_lower_bound, max_regular_simplex
from .space import (
    DistancePattern,
    FiniteMetricSpace,
    distance_pattern,
    is_injective,
    to_fraction,
    validate_metric,
)


class NotInjective(ValueError):
    """The operation requires pairwise-distinct distances."""


class GenericityExhausted(RuntimeError):
    """Random placement kept colliding past its retry budget."""

    def __init__(self, node_path: tuple[int, ...]):
        super().__init__(f"placement retries exhausted at node {node_path!r}")
        self.node_path = node_path


class EpsTooLarge(ValueError):
    """Perturbation radius must stay below a quarter of the minimum distance."""


class DimMismatch(ValueError):
    """Embedding coordinates do not match the declared dimension or point set."""


# ---------------------------------------------------------------------------
# cluster tree


@dataclass(frozen=True)
class ClusterNode:
    """Node of the nested-partition hierarchy: a point subset and its children."""

    path: tuple[int, ...]
    points: tuple[str, ...]
    diameter: Fraction
    children: tuple["ClusterNode", ...]

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["ClusterNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


def _components(space: FiniteMetricSpace, idx: list[int], thr: Fraction) -> list[list[int]]:
    """Connected components of idx under the graph linking pairs at distance < thr."""
    parent = {i: i for i in idx}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in itertools.combinations(idx, 2):
        if space.dist[i][j] < thr:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in idx:
        groups.setdefault(find(i), []).append(i)
    comps = [sorted(g, key=lambda v: space.labels[v]) for g in groups.values()]
    comps.sort(key=lambda g: space.labels[g[0]])
    return comps


def build_dendrogram(space: FiniteMetricSpace) -> ClusterNode:
    """Single-linkage nested partition of the space.

    Children of a node are the connected components of its points under the
    relation d < diameter/2.  When that threshold fails to split a node (a
    connected chain, say), it is halved until the node breaks apart, which is
    guaranteed once the threshold drops below the minimum pairwise distance.
    Children are ordered by their smallest member label.
    """
    if space.n == 0:
        raise ValueError("cannot build a hierarchy on the empty space")

    def node(path: tuple[int, ...], idx: list[int]) -> ClusterNode:
        points = tuple(space.labels[i] for i in idx)
        if len(idx) == 1:
            return ClusterNode(path=path, points=points, diameter=Fraction(0), children=())
        diam = space.subset_diameter(idx)
        thr = diam / 2
        comps = _components(space, idx, thr)
        while len(comps) == 1:
            thr = thr / 2
            comps = _components(space, idx, thr)
        children = tuple(node(path + (t,), comp) for t, comp in enumerate(comps))
        return ClusterNode(path=path, points=points, diameter=diam, children=children)

    root_idx = sorted(range(space.n), key=lambda v: space.labels[v])
    return node((), root_idx)


# ---------------------------------------------------------------------------
# interval assignment on the real line


@dataclass(frozen=True)
class IntervalAssignment:
    """Closed rational intervals for every tree node: siblings disjoint,
    children nested in their parent, lengths shrinking along every path."""

    tree: ClusterNode
    intervals: Mapping[tuple[int, ...], tuple[Fraction, Fraction]]

    def leaf_positions(self) -> dict[str, Fraction]:
        """Each point at the midpoint of its leaf interval."""
        out = {}
        for node in self.tree.walk():
            if node.is_leaf:
                lo, hi = self.intervals[node.path]
                out[node.points[0]] = (lo + hi) / 2
        return out


_GRID = 1 << 40


def _place_children(rng: random.Random, lo: Fraction, hi: Fraction, k: int,
                    budget: int, path: tuple[int, ...]) -> list[tuple[Fraction, Fraction]]:
    """Sample k disjoint sub-intervals whose cross-distance ranges are pairwise
    disjoint: distinct sibling pairs can never produce a coincident distance.

    Positions come from a fine rational grid; the common interval length is cut
    to a quarter of the smallest gap between pairwise position differences, so
    the separation property holds by construction once the differences are
    distinct.  Resampling is only needed on a grid-level collision.
    """
    width = hi - lo
    for _ in range(budget):
        nums = sorted(rng.sample(range(_GRID // 8, _GRID - _GRID // 8), k))
        pos = [lo + width * Fraction(m, _GRID) for m in nums]
        diffs = sorted(pos[u] - pos[t] for t in range(k) for u in range(t + 1, k))
        if any(b <= a for a, b in zip(diffs, diffs[1:])):
            continue
        gaps = [b - a for a, b in zip(diffs, diffs[1:])]
        min_gap = min(gaps) if gaps else width
        min_pos_gap = min(b - a for a, b in zip(pos, pos[1:]))
        length = min(min_pos_gap, min_gap, width / 8) / 4
        return [(p, p + length) for p in pos]
    raise GenericityExhausted(path)


def _assign_intervals(tree: ClusterNode, rng: random.Random, node_budget: int) -> IntervalAssignment:
    intervals: dict[tuple[int, ...], tuple[Fraction, Fraction]] = {
        tree.path: (Fraction(0), Fraction(1))
    }
    queue = [tree]
    while queue:
        node = queue.pop(0)
        if node.children:
            lo, hi = intervals[node.path]
            placed = _place_children(rng, lo, hi, len(node.children), node_budget, node.path)
            for child, iv in zip(node.children, placed):
                intervals[child.path] = iv
            queue.extend(node.children)
    return IntervalAssignment(tree=tree, intervals=intervals)


def interval_assignment(tree: ClusterNode, seed: int, node_budget: int = 64) -> IntervalAssignment:
    """Seeded nested interval placement for a cluster tree."""
    return _assign_intervals(tree, random.Random(seed), node_budget)


# ---------------------------------------------------------------------------
# embeddings and the verification oracle


@dataclass(frozen=True)
class Violation:
    """Witness that a map is not a loose embedding."""

    kind: str  # "pattern" or "coincident-points"
    direction: str | None  # which implication broke, for kind == "pattern"
    pair_a: tuple[str, str]
    pair_b: tuple[str, str]
    source_values: tuple[Fraction, Fraction] | None = None
    image_sq_values: tuple[Fraction, Fraction] | None = None


@dataclass(frozen=True)
class Embedding:
    """Rational coordinates in R^target_dim for each point, plus the oracle's
    verdict: "unverified", "loose", or "violated" (with the witness)."""

    target_dim: int
    labels: tuple[str, ...]
    points: tuple[tuple[Fraction, ...], ...]
    status: str = "unverified"
    violation: Violation | None = None

    def coord_map(self) -> dict[str, tuple[Fraction, ...]]:
        return dict(zip(self.labels, self.points))


def _sqdist(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum(((x - y) * (x - y) for x, y in zip(a, b)), Fraction(0))


def verify_loose(source: FiniteMetricSpace, emb: Embedding) -> Embedding:
    """Decide whether emb preserves the distance-equality pattern of source.

    Both implications are checked: equal source distances must have equal image
    distances and conversely, over all unordered pairs of pairs.  Squared image
    distances are compared as exact rationals.  On failure the violation holds
    the lexicographically smallest offending pair of pairs and the direction.
    """
    if sorted(emb.labels) != sorted(source.labels):
        raise DimMismatch("embedding labels do not match the space's point set")
    for pt in emb.points:
        if len(pt) != emb.target_dim:
            raise DimMismatch(
                f"coordinate vector of length {len(pt)} in a dim-{emb.target_dim} embedding")
    coord = emb.coord_map()

    seen: dict[tuple[Fraction, ...], str] = {}
    for label in sorted(source.labels):
        pt = tuple(coord[label])
        if pt in seen:
            v = Violation(kind="coincident-points", direction=None,
                          pair_a=(seen[pt], label), pair_b=(seen[pt], label))
            return replace(emb, status="violated", violation=v)
        seen[pt] = label

    pairs = source.sorted_pairs()
    src = {p: source.d(*p) for p in pairs}
    img = {p: _sqdist(coord[source.labels[p[0]]], coord[source.labels[p[1]]]) for p in pairs}

    def first_mixed(groups: dict, other: dict):
        best = None
        for plist in groups.values():
            ref = other[plist[0]]
            for q in plist[1:]:
                if other[q] != ref:
                    cand = (plist[0], q)
                    key = (source.pair_key(cand[0]), source.pair_key(cand[1]))
                    if best is None or key < best[0]:
                        best = (key, cand)
                    break
        return best

    src_groups: dict[Fraction, list] = {}
    img_groups: dict[Fraction, list] = {}
    for p in pairs:  # pairs already label-sorted, so groups stay sorted
        src_groups.setdefault(src[p], []).append(p)
        img_groups.setdefault(img[p], []).append(p)

    broke_fwd = first_mixed(src_groups, img)   # source equal, image unequal
    broke_bwd = first_mixed(img_groups, src)   # image equal, source unequal
    if broke_fwd is None and broke_bwd is None:
        return replace(emb, status="loose", violation=None)

    if broke_bwd is None or (broke_fwd is not None and broke_fwd[0] <= broke_bwd[0]):
        (pa, pb), direction = broke_fwd[1], "source-equal-image-unequal"
    else:
        (pa, pb), direction = broke_bwd[1], "image-equal-source-unequal"
    v = Violation(
        kind="pattern",
        direction=direction,
        pair_a=source.pair_key(pa),
        pair_b=source.pair_key(pb),
        source_values=(src[pa], src[pb]),
        image_sq_values=(img[pa], img[pb]),
    )
    return replace(emb, status="violated", violation=v)


def embed_line_branching(space: FiniteMetricSpace, seed: int, *,
                         node_budget: int = 64, max_attempts: int = 16) -> Embedding:
    """Embed an injective-distance space into R by nested interval branching.

    Builds the cluster hierarchy, assigns seeded nested intervals whose sibling
    cross-distance ranges are disjoint, and places each point at its leaf
    midpoint.  A final global check rejects the rare placement where distances
    from unrelated subtrees coincide, and the returned embedding always carries
    the oracle's verdict.  Deterministic for a fixed seed.
    """
    inj, witness = is_injective(space)
    if not inj:
        raise NotInjective(f"pairs {witness[0]} and {witness[1]} share a distance")
    if space.n == 0:
        return verify_loose(space, Embedding(target_dim=1, labels=(), points=()))

    tree = build_dendrogram(space)
    rng = random.Random(seed)
    n_pairs = space.n * (space.n - 1) // 2
    for _ in range(max_attempts):
        assignment = _assign_intervals(tree, rng, node_budget)
        positions = assignment.leaf_positions()
        coords = tuple((positions[label],) for label in space.labels)
        gaps = {abs(a[0] - b[0]) for a, b in itertools.combinations(coords, 2)}
        if len(gaps) != n_pairs:
            continue  # cross-subtree coincidence; redraw everything
        emb = verify_loose(space, Embedding(target_dim=1, labels=space.labels, points=coords))
        if emb.status == "loose":
            return emb
    raise GenericityExhausted(tree.path)


# ---------------------------------------------------------------------------
# perturbation to injective distances


def perturb_to_injective(space: FiniteMetricSpace, eps, seed: int, *,
                         max_attempts: int = 64) -> FiniteMetricSpace:
    """Nudge every distance by at most eps so all become pairwise distinct.

    The offset added to d(i,j) is (eps/2)*(r_i + r_j) with seeded point weights
    r in [0, 1]; such offsets form a metric themselves, so the triangle
    inequality survives every draw and only injectivity needs rejection
    sampling.  The identity correspondence then certifies a Gromov-Hausdorff
    distance of at most eps between input and output.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if space.n <= 1:
        return space
    mind = space.min_positive_distance()
    if eps >= mind / 4:
        raise EpsTooLarge(f"eps = {eps} must be < (min distance)/4 = {mind / 4}")
    if is_injective(space)[0]:
        return space

    rng = random.Random(seed)
    grid = 1 << 20
    half = eps / 2
    for _ in range(max_attempts):
        weights = [Fraction(rng.randrange(grid + 1), grid) for _ in range(space.n)]
        rows = []
        for i in range(space.n):
            row = []
            for j in range(space.n):
                if i == j:
                    row.append(Fraction(0))
                else:
                    row.append(space.dist[i][j] + half * (weights[i] + weights[j]))
            rows.append(tuple(row))
        candidate = FiniteMetricSpace(labels=space.labels, dist=tuple(rows))
        if is_injective(candidate)[0]:
            # cheap draws make revalidation affordable; it must never fire
            return validate_metric(candidate.labels, candidate.dist)
    raise RuntimeError("injectivity not reached within the retry budget")


# ---------------------------------------------------------------------------
# numerical solver for R^n targets


@dataclass(frozen=True)
class InfeasibleReport:
    """Outcome of a failed embedding search."""

    target_dim: int
    best_residual: float | None
    restarts_used: int
    certificate: SimplexWitness | None
    reason: str


def pattern_block_pairs(pattern: DistancePattern) -> list[np.ndarray]:
    """Index-pair arrays per pattern block, for the penalty function."""
    return [np.array(block.pairs, dtype=np.int64).reshape(-1, 2) for block in pattern.blocks]


def penalty_and_grad(block_pairs: list[np.ndarray], X: np.ndarray, s: np.ndarray,
                     margin: float, separation_weight: float = 1.0):
    """Stress value and analytic gradients for the embedding search.

    Terms: per-block coincidence stress sum (|xi-xj|^2 - s_b)^2, plus squared
    hinges pushing distinct block values apart by at least `margin` and away
    from zero.  Returns (value, dX, ds).
    """
    X = np.asarray(X, dtype=float)
    s = np.asarray(s, dtype=float)
    gX = np.zeros_like(X)
    gs = np.zeros_like(s)
    value = 0.0
    for b, pairs in enumerate(block_pairs):
        diff = X[pairs[:, 0]] - X[pairs[:, 1]]
        q = np.einsum("ij,ij->i", diff, diff)
        r = q - s[b]
        value += float(r @ r)
        coef = (4.0 * r)[:, None] * diff
        np.add.at(gX, pairs[:, 0], coef)
        np.add.at(gX, pairs[:, 1], -coef)
        gs[b] -= 2.0 * float(r.sum())
    nb = len(s)
    for a in range(nb):
        for b in range(a + 1, nb):
            gap = margin - abs(s[a] - s[b])
            if gap > 0:
                value += separation_weight * gap * gap
                sign = 1.0 if s[a] >= s[b] else -1.0
                gs[a] -= separation_weight * 2.0 * gap * sign
                gs[b] += separation_weight * 2.0 * gap * sign
        gap0 = margin - s[a]
        if gap0 > 0:
            value += separation_weight * gap0 * gap0
            gs[a] -= separation_weight * 2.0 * gap0
    return value, gX, gs


def _descend(block_pairs, X, s, margin, max_iters):
    """Backtracking gradient descent on the penalty; returns (X, s, residual)."""
    f, gX, gs = penalty_and_grad(block_pairs, X, s, margin)
    step = 0.05
    for _ in range(max_iters):
        gnorm2 = float((gX * gX).sum() + (gs * gs).sum())
        if f < 1e-20 or gnorm2 < 1e-24:
            break
        accepted = False
        while step > 1e-14:
            Xn = X - step * gX
            sn = s - step * gs
            fn, gXn, gsn = penalty_and_grad(block_pairs, Xn, sn, margin)
            if fn <= f - 1e-4 * step * gnorm2:
                X, s, f, gX, gs = Xn, sn, fn, gXn, gsn
                step *= 1.25
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
    return X, s, f


# exact rationalization -----------------------------------------------------


_SQUARE_SEARCH_LIMIT = 2_000_000  # bounded search keeps snap attempts cheap


@lru_cache(maxsize=8192)
def _two_squares(m: int) -> tuple[int, ...] | None:
    a = isqrt(m)
    while 2 * a * a >= m:
        b2 = m - a * a
        b = isqrt(b2)
        if b * b == b2 and b >= 1:
            return (a, b)
        a -= 1
    return None


@lru_cache(maxsize=8192)
def _three_squares(m: int, tries: int = 40) -> tuple[int, ...] | None:
    mm = m
    while mm % 4 == 0:
        mm //= 4
    if mm % 8 == 7:
        return None
    a = isqrt(m)
    count = 0
    while a >= 1 and count < tries:
        rest = m - a * a
        r = isqrt(rest)
        if r * r == rest and r >= 1:
            return (a, r)
        two = _two_squares(rest)
        if two:
            return (a,) + two
        a -= 1
        count += 1
    return None


@lru_cache(maxsize=8192)
def _int_square_decomposition(m: int) -> tuple[int, ...] | None:
    """Some xs with sum(x^2) = m, len <= 4; None if the bounded search gives up."""
    if m == 0:
        return ()
    if m > _SQUARE_SEARCH_LIMIT:
        return None
    r = isqrt(m)
    if r * r == m:
        return (r,)
    two = _two_squares(m)
    if two:
        return two
    three = _three_squares(m)
    if three:
        return three
    a = r
    count = 0
    while a >= 1 and count < 20:
        sub = _three_squares(m - a * a)
        if sub:
            return (a,) + sub
        rest = m - a * a
        rr = isqrt(rest)
        if rr * rr == rest:
            return (a, rr)
        a -= 1
        count += 1
    return None


def _rational_square_decomposition(alpha: Fraction) -> list[Fraction] | None:
    ints = _int_square_decomposition(alpha.numerator * alpha.denominator)
    if ints is None:
        return None
    return [Fraction(x, alpha.denominator) for x in ints]


def _psd_rational_columns(G: list[list[Fraction]], max_cols: int) -> list[list[Fraction]] | None:
    """Rational column vectors v with sum v v^T = G, at most max_cols of them.

    Pivoted rank-one peeling: each positive pivot alpha is written as a sum of
    at most four rational squares, each contributing one column.  Returns None
    when G is not PSD or the column budget (or the square search) runs out.
    """
    m = len(G)
    work = [list(row) for row in G]
    remaining = list(range(m))
    cols: list[list[Fraction]] = []
    while True:
        positive = [i for i in remaining if work[i][i] > 0]
        if not positive:
            if any(work[i][i] < 0 for i in remaining):
                return None
            if any(work[i][j] != 0 for i in remaining for j in remaining):
                return None
            return cols
        chosen = None
        for i in positive:
            dec = _rational_square_decomposition(work[i][i])
            if dec is not None and (chosen is None or len(dec) < len(chosen[1])):
                chosen = (i, dec)
                if len(dec) == 1:
                    break
        if chosen is None:
            return None
        p, parts = chosen
        alpha = work[p][p]
        g = {i: work[i][p] for i in remaining}
        for a in parts:
            coef = a / alpha
            col = [Fraction(0)] * m
            for i in remaining:
                col[i] = coef * g[i]
            cols.append(col)
        if len(cols) > max_cols:
            return None
        for i in remaining:
            if i == p:
                continue
            gi = g[i]
            if gi == 0:
                continue
            for j in remaining:
                if j != p:
                    work[i][j] -= gi * g[j] / alpha
        remaining.remove(p)


def _try_exact_realization(space: FiniteMetricSpace, pattern: DistancePattern,
                           cvals: Sequence[Fraction], n: int) -> Embedding | None:
    """Exact rational coordinates whose squared distances equal cvals blockwise.

    Builds the squared-distance matrix from the block values, forms the Gram
    matrix about each base point in turn, and factors it rationally.  Any
    success is re-checked by the oracle before being returned.
    """
    if any(c <= 0 for c in cvals) or len(set(cvals)) != len(cvals):
        return None
    if any(c.numerator * c.denominator > 100_000 for c in cvals):
        return None  # keep the square decompositions in bounded-search range
    block_of = pattern.block_index_of()
    npts = space.n
    D = [[Fraction(0)] * npts for _ in range(npts)]
    for (i, j), b in block_of.items():
        D[i][j] = D[j][i] = cvals[b]
    attempted: dict[tuple, None] = {}
    for base in range(npts):
        others = [i for i in range(npts) if i != base]
        G = [[(D[base][i] + D[base][j] - D[i][j]) / 2 for j in others] for i in others]
        key = tuple(tuple(row) for row in G)
        if key in attempted:  # symmetric spaces repeat the same Gram matrix
            continue
        attempted[key] = None
        columns = _psd_rational_columns(G, n)
        if columns is None:
            continue
        coords = [[Fraction(0)] * n for _ in range(npts)]
        for k, col in enumerate(columns):
            for t, i in enumerate(others):
                coords[i][k] = col[t]
        emb = verify_loose(space, Embedding(
            target_dim=n, labels=space.labels,
            points=tuple(tuple(c) for c in coords)))
        if emb.status == "loose":
            return emb
    return None


_SNAP_DENOMS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 48, 100, 1000)
_NICE_VALUES = tuple(sorted(
    [Fraction(1), Fraction(2), Fraction(3), Fraction(4), Fraction(5), Fraction(6),
     Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(8, 5), Fraction(16, 5),
     Fraction(10, 3)]))


def _snap_candidates(s: np.ndarray, include_combos: bool) -> Iterator[tuple[Fraction, ...]]:
    """Rational block-value candidates derived from the numeric solution."""
    seen: set[tuple[Fraction, ...]] = set()

    def emit(cand: tuple[Fraction, ...]):
        if cand not in seen:
            seen.add(cand)
            return cand
        return None

    floats = [float(x) for x in s]
    for q in _SNAP_DENOMS:
        cand = tuple(Fraction(x).limit_denominator(q) for x in floats)
        out = emit(cand)
        if out:
            yield out
    smin = min(floats)
    if smin > 0:
        normalized = [x / smin for x in floats]
        for q in _SNAP_DENOMS:
            cand = tuple(Fraction(x).limit_denominator(q) for x in normalized)
            out = emit(cand)
            if out:
                yield out
    if include_combos and 1 <= len(floats) <= 5:
        order = np.argsort(s, kind="stable")
        for combo in itertools.combinations(_NICE_VALUES, len(floats)):
            cand = [Fraction(0)] * len(floats)
            for rank, b in enumerate(order):
                cand[b] = combo[rank]
            out = emit(tuple(cand))
            if out:
                yield out


def _default_margin(pattern: DistancePattern) -> float:
    values = sorted(float(b.value) for b in pattern.blocks)
    gaps = [b - a for a, b in zip(values, values[1:]) if b > a]
    if not gaps:
        return 1e-3
    return max(0.1 * min(gaps), 1e-3)


def _random_injective_embedding(space: FiniteMetricSpace, n: int,
                                rng: np.random.Generator, attempts: int = 32) -> Embedding | None:
    grid = 1 << 24
    n_pairs = space.n * (space.n - 1) // 2
    for _ in range(attempts):
        raw = rng.integers(0, grid, size=(space.n, n))
        pts = tuple(tuple(Fraction(int(v), grid) for v in row) for row in raw)
        sq = {_sqdist(a, b) for a, b in itertools.combinations(pts, 2)}
        if len(sq) != n_pairs:
            continue
        emb = verify_loose(space, Embedding(target_dim=n, labels=space.labels, points=pts))
        if emb.status == "loose":
            return emb
    return None


def _regular_simplex_embedding(space: FiniteMetricSpace, n: int) -> Embedding | None:
    """Exact equidistant configurations: cube corners for 4 points in R^3,
    scaled standard basis vectors otherwise (needs n >= point count)."""
    npts = space.n
    candidates: list[list[tuple[int, ...]]] = []
    if npts == 4 and n >= 3:
        candidates.append([(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)])
    if n >= npts:
        candidates.append([tuple(1 if k == i else 0 for k in range(npts)) for i in range(npts)])
    for cand in candidates:
        pts = tuple(
            tuple(Fraction(v) for v in row) + (Fraction(0),) * (n - len(row))
            for row in cand)
        emb = verify_loose(space, Embedding(target_dim=n, labels=space.labels, points=pts))
        if emb.status == "loose":
            return emb
    return None


def solve_loose_embedding(space: FiniteMetricSpace, n: int, *,
                          margin: float | None = None, max_iters: int = 300,
                          restarts: int = 8, seed: int = 0):
    """Search for a verified loose embedding into R^n.

    Pipeline: the equidistant-subset bound short-circuits impossible targets
    with a certificate; injective-distance spaces go through a direct seeded
    placement (the interval construction when n = 1); a single-block space gets
    an explicit equidistant configuration.  Everything else runs multi-restart
    gradient descent on the coincidence-stress penalty, then snaps the block
    values to rationals and re-solves coordinates exactly via a rational Gram
    factorization.  Successes always pass the oracle (which alone certifies);
    otherwise an InfeasibleReport with the best residual is returned.  The
    search is incomplete: an InfeasibleReport without a certificate does not
    prove that no loose embedding exists.  Deterministic for fixed inputs.
    """
    if n < 1:
        raise ValueError("target dimension must be >= 1")
    npts = space.n
    if npts == 0:
        return verify_loose(space, Embedding(target_dim=n, labels=(), points=()))
    if npts == 1:
        return verify_loose(space, Embedding(
            target_dim=n, labels=space.labels, points=((Fraction(0),) * n,)))

    if dim_lower_bound(space) > n:
        return InfeasibleReport(
            target_dim=n, best_residual=None, restarts_used=0,
            certificate=max_regular_simplex(space), reason="equidistant-obstruction")

    pattern = distance_pattern(space)
    rng = np.random.default_rng(seed)
    injective = pattern.block_count == npts * (npts - 1) // 2
    if injective:
        if n == 1:
            return embed_line_branching(space, seed)
        emb = _random_injective_embedding(space, n, rng)
        if emb is not None:
            return emb
    if pattern.block_count == 1:
        emb = _regular_simplex_embedding(space, n)
        if emb is not None:
            return emb
        # rescaling by a rational square moves between common values, so only
        # squarefree side values need checking; no numeric search can help
        for c in (1, 2, 3, 5, 6, 7, 10, 11, 13, 15):
            emb = _try_exact_realization(space, pattern, (Fraction(c),), n)
            if emb is not None:
                return emb
        return InfeasibleReport(target_dim=n, best_residual=None, restarts_used=0,
                                certificate=None, reason="no-exact-realization-found")

    block_pairs = pattern_block_pairs(pattern)
    src_vals = np.array([float(b.value) for b in pattern.blocks])
    margin_f = float(margin) if margin is not None else _default_margin(pattern)
    scale = float(np.sqrt(src_vals.max()))
    best_residual = None
    tried: set[tuple[Fraction, ...]] = set()
    for restart in range(restarts):
        X0 = rng.standard_normal((npts, n)) * scale
        s0 = src_vals * (1.0 + 0.05 * rng.standard_normal(len(src_vals)))
        _, s_opt, residual = _descend(block_pairs, X0, s0, margin_f, max_iters)
        best_residual = residual if best_residual is None else min(best_residual, residual)
        for cand in _snap_candidates(s_opt, include_combos=(restart == 0)):
            if cand in tried:
                continue
            tried.add(cand)
            emb = _try_exact_realization(space, pattern, cand, n)
            if emb is not None:
                return emb
    return InfeasibleReport(
        target_dim=n, best_residual=best_residual, restarts_used=restarts,
        certificate=None, reason="no-exact-realization-found")
