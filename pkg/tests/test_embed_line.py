import itertools
import random
from fractions import Fraction

import pytest

import loometric as lm
from helpers import equilateral, line_space, random_space, triangle_123


class TestDendrogram:
    def test_two_points(self):
        s = lm.validate_metric(["a", "b"], [[0, 1], [1, 0]])
        tree = lm.build_dendrogram(s)
        assert [c.points for c in tree.children] == [("a",), ("b",)]
        assert all(c.is_leaf for c in tree.children)

    def test_two_cluster_line(self):
        s = line_space(["a", "b", "c", "d"], [0, "0.1", 10, "10.1"])
        tree = lm.build_dendrogram(s)
        assert [set(c.points) for c in tree.children] == [{"a", "b"}, {"c", "d"}]
        for child in tree.children:
            assert [g.points for g in child.children] == [(child.points[0],), (child.points[1],)]

    def test_single_point_is_leaf(self):
        tree = lm.build_dendrogram(lm.validate_metric(["x"], [[0]]))
        assert tree.is_leaf
        assert tree.points == ("x",)

    def test_connected_chain_still_splits(self):
        # at threshold diam/2 the whole chain is one component; halving must split it
        s = line_space(["a", "b", "c", "d"], [0, 1, 2, 3])
        tree = lm.build_dendrogram(s)
        assert len(tree.children) >= 2
        leaves = [n.points[0] for n in tree.walk() if n.is_leaf]
        assert sorted(leaves) == ["a", "b", "c", "d"]

    def test_partition_structure(self):
        rng = random.Random(2)
        for t in range(15):
            s = random_space(600 + t, rng.randint(2, 10))
            tree = lm.build_dendrogram(s)
            for node in tree.walk():
                if node.is_leaf:
                    continue
                union = sorted(a for c in node.children for a in c.points)
                assert union == sorted(node.points)
                assert all(c.diameter <= node.diameter for c in node.children)


class TestIntervalAssignment:
    def test_nesting_disjointness_shrink(self):
        rng = random.Random(8)
        for t in range(10):
            s = random_space(800 + t, rng.randint(2, 9))
            tree = lm.build_dendrogram(s)
            assignment = lm.interval_assignment(tree, seed=t)
            for node in tree.walk():
                lo, hi = assignment.intervals[node.path]
                assert lo < hi
                ivs = [assignment.intervals[c.path] for c in node.children]
                for (alo, ahi), (blo, bhi) in itertools.combinations(ivs, 2):
                    assert ahi < blo or bhi < alo  # siblings strictly disjoint
                for clo, chi in ivs:
                    assert lo <= clo and chi <= hi  # nested
                    assert chi - clo < hi - lo      # strictly shrinking

    def test_cross_distance_ranges_disjoint(self):
        s = equilateral(6)  # root with six singleton children: worst fan-out
        tree = lm.build_dendrogram(s)
        assignment = lm.interval_assignment(tree, seed=5)
        ivs = [assignment.intervals[c.path] for c in tree.children]
        ranges = []
        for (alo, ahi), (blo, bhi) in itertools.combinations(ivs, 2):
            lo = min(abs(blo - ahi), abs(alo - bhi))
            hi = max(abs(bhi - alo), abs(blo - ahi))
            ranges.append((min(lo, hi), max(lo, hi)))
        for (l1, h1), (l2, h2) in itertools.combinations(ranges, 2):
            assert h1 < l2 or h2 < l1


class TestEmbedLineBranching:
    def test_two_points(self):
        s = lm.validate_metric(["a", "b"], [[0, 7], [7, 0]])
        emb = lm.embed_line_branching(s, seed=0)
        assert emb.status == "loose"
        assert emb.points[0] != emb.points[1]

    def test_three_distinct_distances(self):
        emb = lm.embed_line_branching(triangle_123(), seed=0)
        assert emb.status == "loose"
        gaps = {abs(a[0] - b[0]) for a, b in itertools.combinations(emb.points, 2)}
        assert len(gaps) == 3

    def test_equilateral_rejected(self):
        with pytest.raises(lm.NotInjective):
            lm.embed_line_branching(equilateral(3), seed=0)

    def test_deterministic_given_seed(self):
        s = random_space(123, 9)
        s = lm.perturb_to_injective(s, Fraction(1, 10_000), seed=1)
        a = lm.embed_line_branching(s, seed=77)
        b = lm.embed_line_branching(s, seed=77)
        assert a == b

    def test_random_injective_spaces_verify(self):
        rng = random.Random(14)
        for t in range(15):
            s = random_space(1500 + t, rng.randint(2, 14))
            s = lm.perturb_to_injective(s, Fraction(1, 100_000), seed=t)
            emb = lm.embed_line_branching(s, seed=t)
            assert emb.status == "loose"
            assert emb.target_dim == 1
