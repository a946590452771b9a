"""Observables: balls, degree counts, diameters, batch reductions."""

from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sgtrees import (
    PlantedTree,
    StatsError,
    UnrootedPlaneTree,
    ball_code,
    batch_degree_count,
    batch_max_two_degrees,
    degree_clt_report,
    diameters_of_codes,
    empirical_tv,
    enumerate_planted,
    max_degree_report,
    measure,
)


def path_tree(n: int) -> UnrootedPlaneTree:
    return UnrootedPlaneTree.from_planted(PlantedTree((1,) * (n - 1) + (0,)))


def star_tree(n: int) -> UnrootedPlaneTree:
    return UnrootedPlaneTree.from_planted(PlantedTree((n - 1,) + (0,) * (n - 1)))


def bfs_diameter(u: UnrootedPlaneTree) -> int:
    def ecc(start):
        dist = {start: 0}
        frontier = [start]
        far = 0
        while frontier:
            nxt = []
            for v in frontier:
                for w in u.neighbors[v]:
                    if w not in dist:
                        dist[w] = dist[v] + 1
                        far = max(far, dist[w])
                        nxt.append(w)
            frontier = nxt
        return far

    return max(ecc(v) for v in range(u.size))


class TestBallCode:
    def test_path_center_radius_one(self):
        u = path_tree(4)
        mid = next(v for v in range(4) if len(u.neighbors[v]) == 2)
        assert ball_code(u, mid, 1) == (2, 1, 2)

    def test_star_center(self):
        u = star_tree(4)
        hub = next(v for v in range(4) if len(u.neighbors[v]) == 3)
        assert ball_code(u, hub, 0) == (3,)
        assert ball_code(u, hub, 1) == (3, 1, 1, 1)

    def test_leaf_of_star(self):
        u = star_tree(4)
        leaf = next(v for v in range(4) if len(u.neighbors[v]) == 1)
        assert ball_code(u, leaf, 1) == (1, 3)
        assert ball_code(u, leaf, 2) == (1, 3, 1, 1)

    def test_relabelling_invariance(self):
        # ball code must not depend on vertex labelling of equal shapes
        from sgtrees import corner_root

        u1 = UnrootedPlaneTree.from_planted(PlantedTree((2, 1, 0, 2, 0, 0)))
        u2 = UnrootedPlaneTree.from_planted(corner_root(u1, 3))
        c1 = sorted(ball_code(u1, v, 2) for v in range(u1.size))
        c2 = sorted(ball_code(u2, v, 2) for v in range(u2.size))
        assert c1 == c2


class TestMeasure:
    def test_path_four(self):
        u = path_tree(4)
        rep = measure(u)
        assert rep.n == 4
        assert rep.diameter == 3
        assert rep.height_from_center == 2
        assert rep.max_degree == 2
        assert rep.second_max_degree == 2
        assert rep.degree_hist[1] == 2 and rep.degree_hist[2] == 2

    def test_star(self):
        rep = measure(star_tree(6))
        assert rep.diameter == 2
        assert rep.max_degree == 5
        assert rep.second_max_degree == 1


class TestBatchReductions:
    def brute_counts(self, code, d):
        t = PlantedTree(code)
        u = UnrootedPlaneTree.from_planted(t)
        return sum(1 for v in range(u.size) if len(u.neighbors[v]) == d)

    def test_degree_count_against_brute_force(self):
        codes = [t.code for t in enumerate_planted(6)]
        arr = np.array(codes, dtype=np.int64)
        for d in (1, 2, 3, 4):
            fast = batch_degree_count(arr, d)
            slow = [self.brute_counts(c, d) for c in codes]
            assert fast.tolist() == slow

    def test_max_two_degrees_against_brute_force(self):
        codes = [t.code for t in enumerate_planted(7)]
        arr = np.array(codes, dtype=np.int64)
        mx, mx2 = batch_max_two_degrees(arr)
        for i, c in enumerate(codes):
            degs = sorted(
                (len(UnrootedPlaneTree.from_planted(PlantedTree(c)).neighbors[v]) for v in range(len(c))),
                reverse=True,
            )
            assert mx[i] == degs[0]
            assert mx2[i] == degs[1]

    def test_diameters_against_bfs(self):
        codes = [t.code for t in enumerate_planted(7)]
        arr = np.array(codes, dtype=np.int64)
        fast = diameters_of_codes(arr)
        slow = [bfs_diameter(UnrootedPlaneTree.from_planted(PlantedTree(c))) for c in codes]
        assert fast.tolist() == slow

    @given(st.integers(min_value=2, max_value=9))
    def test_path_diameter(self, n):
        arr = np.array([(1,) * (n - 1) + (0,)], dtype=np.int64)
        assert diameters_of_codes(arr).tolist() == [n - 1]


class TestReports:
    def test_degree_clt_rejects_noncritical(self, w_pow3):
        from sgtrees import RngStream

        with pytest.raises(StatsError):
            degree_clt_report(w_pow3, 100, 10, RngStream(0))

    def test_max_degree_rejects_critical(self, w_ones):
        from sgtrees import RngStream

        with pytest.raises(StatsError):
            max_degree_report(w_ones, 100, 10, RngStream(0))


class TestEmpiricalTv:
    def test_disjoint_is_one(self):
        assert empirical_tv(Counter({"a": 3}), Counter({"b": 5})) == 1

    def test_identical_is_zero(self):
        c = Counter({"a": 3, "b": 1})
        assert empirical_tv(c, c) == 0

    def test_half_l1(self):
        a = Counter({"x": 1, "y": 1})
        b = Counter({"x": 1, "z": 1})
        assert abs(empirical_tv(a, b) - 0.5) < 1e-12
