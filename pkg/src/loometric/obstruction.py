"""Equidistant-subset obstructions to pattern-preserving Euclidean embeddings.

A set of k pairwise-equidistant points cannot sit in R^m for m < k-1, and a
pattern-preserving map sends equidistant sets to equidistant sets, so the
largest equidistant subset gives a lower bound on the usable target dimension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .space import DistancePattern, FiniteMetricSpace, distance_pattern


class TooSmall(ValueError):
    """The space has fewer than two points."""


@dataclass(frozen=True)
class SimplexWitness:
    """A pairwise-equidistant subset: point labels (sorted) and the common side."""

    points: tuple[str, ...]
    side: Fraction

    @property
    def size(self) -> int:
        return len(self.points)


def _block_graph(space: FiniteMetricSpace, pairs) -> tuple[list[int], dict[int, set[int]]]:
    """Vertices touched by a pattern block and their same-distance adjacency."""
    adj: dict[int, set[int]] = {}
    for i, j in pairs:
        adj.setdefault(i, set()).add(j)
        adj.setdefault(j, set()).add(i)
    verts = sorted(adj, key=lambda v: space.labels[v])
    return verts, adj


def _greedy_color(P: list[int], adj: dict[int, set[int]]) -> tuple[list[int], list[int]]:
    """Order P so greedy color numbers are nondecreasing; return (order, bounds)."""
    classes: list[list[int]] = []
    for v in P:
        for cls in classes:
            if all(u not in adj[v] for u in cls):
                cls.append(v)
                break
        else:
            classes.append([v])
    order, bounds = [], []
    for k, cls in enumerate(classes):
        for v in cls:
            order.append(v)
            bounds.append(k + 1)
    return order, bounds


def _max_clique_size(P: list[int], adj: dict[int, set[int]], initial_best: int = 0) -> int:
    """Branch-and-bound maximum clique size with a greedy coloring bound."""
    best = initial_best

    def expand(rsize: int, cand: list[int]) -> None:
        nonlocal best
        if not cand:
            if rsize > best:
                best = rsize
            return
        order, bounds = _greedy_color(cand, adj)
        for i in range(len(order) - 1, -1, -1):
            if rsize + bounds[i] <= best:
                return
            v = order[i]
            nxt = [u for u in order[:i] if u in adj[v]]
            expand(rsize + 1, nxt)

    expand(0, P)
    return best


def _lex_min_clique(space: FiniteMetricSpace, verts: list[int], adj: dict[int, set[int]], size: int) -> list[int]:
    """The size-`size` clique whose sorted label tuple is lexicographically least."""
    chosen: list[int] = []
    cand = list(verts)  # already label-sorted
    while len(chosen) < size:
        for pos, v in enumerate(cand):
            rest = [u for u in cand[pos + 1:] if u in adj[v]]
            if 1 + _max_clique_size(rest, adj) >= size - len(chosen):
                chosen.append(v)
                cand = rest
                break
        else:  # pragma: no cover - guarded by the size search
            raise RuntimeError("clique reconstruction failed")
    return chosen


def max_regular_simplex(space: FiniteMetricSpace, pattern: DistancePattern | None = None) -> SimplexWitness:
    """Largest pairwise-equidistant subset.

    Ties on cardinality go to the smaller common side, then to the
    lexicographically smallest label set.  Search runs as a maximum clique per
    distance class over the same-distance graph; classes are scanned in
    ascending value order so tie-breaking is by first strict improvement, and a
    class is skipped when its cheap clique upper bound cannot beat the incumbent.
    """
    if space.n < 2:
        raise TooSmall("need at least 2 points")
    if pattern is None:
        pattern = distance_pattern(space)

    best_size = 0
    best_block = None
    cache: dict[int, tuple[list[int], dict[int, set[int]]]] = {}
    for b, block in enumerate(pattern.blocks):
        verts, adj = _block_graph(space, block.pairs)
        cache[b] = (verts, adj)
        m = len(block.pairs)
        ub = min(len(verts), (1 + isqrt(1 + 8 * m)) // 2)
        if ub <= best_size:
            continue
        if m == len(verts) * (len(verts) - 1) // 2:
            size = len(verts)  # complete same-distance graph: the whole vertex set
        else:
            size = _max_clique_size(verts, adj, initial_best=best_size)
        if size > best_size:
            best_size = size
            best_block = b

    verts, adj = cache[best_block]
    members = _lex_min_clique(space, verts, adj, best_size)
    points = tuple(sorted(space.labels[v] for v in members))
    return SimplexWitness(points=points, side=pattern.blocks[best_block].value)


def dim_lower_bound(space: FiniteMetricSpace) -> int:
    """Minimum Euclidean dimension any pattern-preserving embedding needs.

    Equals (largest equidistant subset) - 1; a space with fewer than two points
    gives 0 by convention.
    """
    if space.n < 2:
        return 0
    return max_regular_simplex(space).size - 1


def brute_force_max_simplex(space: FiniteMetricSpace) -> SimplexWitness:
    """Independent oracle: exhaustive subset enumeration (exponential; n <= ~12)."""
    if space.n < 2:
        raise TooSmall("need at least 2 points")
    if space.n > 14:
        raise ValueError("brute force limited to 14 points")
    best: SimplexWitness | None = None
    order = sorted(range(space.n), key=lambda v: space.labels[v])
    for k in range(space.n, 1, -1):
        for combo in itertools.combinations(order, k):
            side = space.dist[combo[0]][combo[1]]
            if all(space.dist[i][j] == side for i, j in itertools.combinations(combo, 2)):
                cand = SimplexWitness(points=tuple(sorted(space.labels[v] for v in combo)), side=side)
                if best is None or (cand.side, cand.points) < (best.side, best.points):
                    best = cand
        if best is not None:
            return best
    raise RuntimeError("unreachable: every pair is equidistant with itself")
