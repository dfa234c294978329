"""Shared fixtures-by-construction for the test suite."""

import random
from fractions import Fraction

import loometric as lm


def line_space(labels, xs):
    pts = [lm.to_fraction(x) for x in xs]
    return lm.validate_metric(labels, [[abs(a - b) for b in pts] for a in pts])


def equilateral(n=3, side=1, prefix="p"):
    s = lm.to_fraction(side)
    labels = [f"{prefix}{i}" for i in range(n)]
    return lm.validate_metric(
        labels, [[s if i != j else 0 for j in range(n)] for i in range(n)])


def square_like():
    """Four points, four 'side' distances 1 and two 'diagonal' distances 2."""
    return lm.validate_metric(
        ["a", "b", "c", "d"],
        [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])


def triangle_123():
    return lm.validate_metric(["a", "b", "c"], [[0, 1, 2], [1, 0, 3], [2, 3, 0]])


def random_space(seed, n, dim=3):
    return lm.sample_hypercube_space(random.Random(seed), n, dim=dim)


def cluster_space(seed, clusters=2, per_cluster=2, gap=5, spread="0.01"):
    """Tight clusters of collinear points separated by large gaps."""
    rng = random.Random(seed)
    spread = lm.to_fraction(spread)
    xs, labels = [], []
    for c in range(clusters):
        base = lm.to_fraction(gap) * c
        for k in range(per_cluster):
            xs.append(base + spread * Fraction(rng.randrange(1, 1000), 1000) * k)
            labels.append(f"c{c}k{k}")
    return line_space(labels, xs)


def stretched_simplex(n=5, stretch="1.01"):
    """Regular simplex with one edge stretched (still metric)."""
    labels = [f"p{i}" for i in range(n)]
    rows = [[Fraction(0) if i == j else Fraction(1) for j in range(n)] for i in range(n)]
    rows[0][1] = rows[1][0] = lm.to_fraction(stretch)
    return lm.validate_metric(labels, rows)
