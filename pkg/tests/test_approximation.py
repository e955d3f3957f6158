import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghkit.approximation import (
    MapPair,
    all_maps,
    best_pair,
    check_budget,
    complete_distortion_map,
    defect,
    distortion,
    restrict_pair,
)
from ghkit.errors import (
    BallNotNested,
    BudgetExceeded,
    CoverageFailure,
    DistortionTooLarge,
    IndexOutOfRange,
    PointedConstraintViolated,
)
from ghkit.metric_core import PointedSpace, cycle_space, path_space
from ghkit.sequences import cycle_pointed, lattice_space

from _spaces import PATH3, PT, SEG1, SEG2, random_space


def completion_instance(rng, nX, nY):
    """A random map and the smallest eps (plus slack) meeting the completion preconditions."""
    X, Y = random_space(rng, nX), random_space(rng, nY)
    f = rng.integers(nY, size=nX)
    cover = Y.d[:, np.unique(f)].min(axis=1).max()
    eps = max(distortion(X, Y, f), cover) + 0.01
    return X, Y, f, eps


class TestDefect:
    def test_identity(self):
        assert defect(SEG2, SEG2, MapPair([0, 1], [0, 1])).defect == 0

    def test_collapse(self):
        rep = defect(SEG2, PT, MapPair([0, 0], [0]))
        assert rep.dis_f == 2 and rep.defect == 2

    def test_index_identity(self):
        rep = defect(SEG2, SEG1, MapPair([0, 1], [0, 1]))
        assert rep.defect == 1
        assert rep.roundtrip_X == rep.roundtrip_Y == 0

    def test_strict_membership(self):
        rep = defect(SEG2, SEG1, MapPair([0, 1], [0, 1]))
        assert not rep.in_isom(1.0)
        assert rep.in_isom(1.0 + 1e-12)

    def test_bad_index(self):
        with pytest.raises(IndexOutOfRange):
            defect(SEG2, SEG1, MapPair([0, 2], [0, 1]))

    def test_pointed_constraint(self):
        with pytest.raises(PointedConstraintViolated):
            defect(SEG2, SEG2, MapPair([0, 1], [0, 1], pointed=(0, 1)))


class TestDistortion:
    @pytest.mark.parametrize(
        "X, Y, f, expected",
        [(SEG1, PATH3, [0, 1], 0.0), (SEG2, SEG1, [0, 1], 1.0), (PATH3, PT, [0, 0, 0], 2.0)],
    )
    def test_examples(self, X, Y, f, expected):
        assert distortion(X, Y, f) == expected


class TestCompletion:
    def test_bijective_isometry(self):
        pair = complete_distortion_map(PATH3, PATH3, [2, 1, 0], 0.1)
        assert pair.g == (2, 1, 0)
        assert defect(PATH3, PATH3, pair).defect == 0

    def test_index_identity(self):
        pair = complete_distortion_map(SEG2, SEG1, [0, 1], 1.01)
        assert defect(SEG2, SEG1, pair).defect <= 1.01

    def test_coverage_failure(self):
        with pytest.raises(CoverageFailure):
            complete_distortion_map(SEG1, PATH3, [0, 1], 1.0)

    def test_distortion_too_large(self):
        with pytest.raises(DistortionTooLarge):
            complete_distortion_map(SEG2, SEG1, [0, 1], 1.0)

    def test_pointed_matches_bases(self):
        X, Y = PointedSpace(PATH3, 0), PointedSpace(PATH3, 2)
        pair = complete_distortion_map(X, Y, [2, 1, 0], 0.5)
        assert pair.pointed == (0, 2) and pair.g[2] == 0

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**31))
    def test_defect_below_three_eps(self, nX, nY, seed):
        X, Y, f, eps = completion_instance(np.random.default_rng(seed), nX, nY)
        assert defect(X, Y, complete_distortion_map(X, Y, f, eps)).defect < 3 * eps


class TestBestPair:
    def test_self(self, rng):
        X = random_space(rng, 4)
        _, eps, _ = best_pair(X, X)
        assert eps == 0

    def test_seg2_point(self):
        pair, eps, _ = best_pair(SEG2, PT)
        assert eps == 2 and pair.f == (0, 0)

    def test_seg2_seg1(self):
        _, eps, _ = best_pair(SEG2, SEG1)
        assert eps == 1

    def test_matches_brute_force(self, rng):
        for _ in range(10):
            X, Y = random_space(rng, 3), random_space(rng, 3)
            brute = min(
                defect(X, Y, MapPair(f, g)).defect for f in all_maps(3, 3) for g in all_maps(3, 3)
            )
            assert best_pair(X, Y)[1] == brute

    def test_pointed_respects_bases(self, rng):
        X = PointedSpace(random_space(rng, 4), 1)
        Y = PointedSpace(random_space(rng, 3), 2)
        pair, eps, rep = best_pair(X, Y, pointed=True)
        assert pair.f[1] == 2 and pair.g[2] == 1
        assert rep.defect == eps

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            check_budget(7, 2)
        with pytest.raises(BudgetExceeded):
            best_pair(path_space(5), path_space(5), budget=100)

    def test_all_maps_order(self):
        assert all_maps(2, 2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]


def rotation_pair(n, s):
    return MapPair((np.arange(n) + s) % n, (np.arange(n) - s) % n)


class TestRestrictPair:
    def test_identity_same_bases(self):
        X = PointedSpace(PATH3, 1)
        res = restrict_pair(X, X, MapPair([0, 1, 2], [0, 1, 2]), 1, 1)
        assert res.report.defect == 0

    def test_c12_rotation(self):
        X, Y = cycle_pointed(12), PointedSpace(cycle_space(12), 1)
        res = restrict_pair(X, Y, rotation_pair(12, 1), 5, 2, 0, 0)
        assert res.eps == 0 and res.surplus == 0
        assert res.report.defect <= res.bound + 1e-9

    def test_maps_into_small_balls(self):
        X, Y = cycle_pointed(10), PointedSpace(cycle_space(10), 3)
        res = restrict_pair(X, Y, rotation_pair(10, 3), 4, 2, 1, 2)
        assert set(res.f) <= set(res.y_ball) and set(res.g) <= set(res.x_ball)
        assert res.f[res.x_ball.index(1)] == 2 and res.g[res.y_ball.index(2)] == 1

    def test_not_nested(self):
        X = cycle_pointed(12)
        with pytest.raises(BallNotNested):
            restrict_pair(X, X, rotation_pair(12, 0), 2, 2, 1, 0)

    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
    def test_derived_bound_on_cycles(self, k):
        n = 2 * k
        for s in range(n):
            X, Y = cycle_pointed(n), PointedSpace(cycle_space(n), s)
            pair = rotation_pair(n, s)
            for R in range(1, k + 1):
                for r in range(1, R + 1):
                    for qa in range(n):
                        try:
                            res = restrict_pair(X, Y, pair, R, r, 0, qa)
                        except BallNotNested:
                            continue
                        assert res.report.defect <= res.bound_derived + 1e-9

    def test_derived_bound_on_random_pairs(self, rng):
        for _ in range(100):
            X = PointedSpace(random_space(rng, 6), 0)
            Y = PointedSpace(random_space(rng, 6), 0)
            f, g = rng.integers(6, size=6), rng.integers(6, size=6)
            f[0], g[0] = 0, 0
            R = float(max(X.d[0].max(), Y.d[0].max()))
            r = float(rng.uniform(0.5, R))
            res = restrict_pair(X, Y, MapPair(f, g), R, r, int(rng.integers(6)), int(rng.integers(6)))
            assert res.report.defect <= res.bound_derived + 1e-9

    def test_lattice_mesh_term(self):
        X = lattice_space(0.25, 3)
        n = X.n
        f = np.clip(np.arange(n) + 1, 0, n - 1)
        g = np.clip(np.arange(n) - 1, 0, n - 1)
        f[X.base], g[X.base] = X.base, X.base
        res = restrict_pair(X, X, MapPair(f, g), 3, 1, X.base + 2, X.base + 2)
        assert res.report.defect <= res.bound + 2 * 0.25
