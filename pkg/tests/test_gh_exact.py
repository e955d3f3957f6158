import numpy as np
import pytest

from ghkit.admissible import validate_admissible
from ghkit.errors import BudgetExceeded
from ghkit.gh_exact import gh, gh_bounds, gh_exact, gh_oracle, gh_pointed_exact, relation_bound
from ghkit.metric_core import PointedSpace, diameter, one_point, path_space

from _spaces import PATH3, PT, SEG1, SEG2, corpus_pairs, random_pointed, random_space

PT_P = PointedSpace(PT, 0)


class TestOracle:
    def test_self(self, rng):
        X = random_space(rng, 4)
        assert gh_oracle(X, X)[0] == 0

    def test_point(self):
        assert gh_oracle(SEG2, PT)[0] == 1

    def test_segments(self):
        assert gh_oracle(SEG2, SEG1)[0] == 0.5


class TestExact:
    def test_point_witness(self):
        res = gh_exact(SEG2, PT)
        assert res.value == 1
        assert res.witness.cross.tolist() == [[1.0], [1.0]]

    def test_self_witness_floor(self, rng):
        X = random_space(rng, 4)
        res = gh_exact(X, X)
        assert res.value == 0
        validate_admissible(X, X, res.witness.cross)
        assert res.witness.cross.min() > 0

    def test_segments(self):
        assert gh_exact(SEG2, SEG1).value == 0.5

    @pytest.mark.parametrize("pointed", [False, True])
    def test_witness_objective(self, pointed):
        for X, Y in corpus_pairs()[:40]:
            res = gh_pointed_exact(X, Y) if pointed else gh_exact(X.space, Y.space)
            validate_admissible(res.witness.left, res.witness.right, res.witness.cross)
            assert res.objective() == pytest.approx(res.value, abs=1e-6)

    @pytest.mark.parametrize("pointed", [False, True])
    def test_agrees_with_oracle(self, pointed):
        for X, Y in corpus_pairs()[40:80]:
            if pointed:
                assert gh_pointed_exact(X, Y).value == pytest.approx(gh_oracle(X, Y, pointed=True)[0], abs=1e-9)
            else:
                assert gh_exact(X.space, Y.space).value == pytest.approx(gh_oracle(X.space, Y.space)[0], abs=1e-9)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            gh_exact(path_space(6), path_space(2))

    def test_dispatch(self):
        assert gh(SEG2, PT) == 1


class TestPointed:
    def test_eccentricity(self, rng):
        for _ in range(10):
            X = random_pointed(rng, 5)
            assert gh_pointed_exact(X, PT_P).value == pytest.approx(X.d[X.base].max(), abs=1e-9)

    @pytest.mark.parametrize("base, expected", [(0, 2.0), (1, 1.0), (2, 2.0)])
    def test_segment_samples(self, base, expected):
        X = PointedSpace(PATH3, base)
        assert gh_pointed_exact(X, PT_P).value == pytest.approx(expected, abs=1e-9)
        assert gh_exact(PATH3, one_point()).value == 1.0

    def test_self(self, rng):
        X = random_pointed(rng, 4)
        assert gh_pointed_exact(X, X).value == 0

    def test_base_choice_matters(self):
        a = gh_pointed_exact(PointedSpace(PATH3, 0), PointedSpace(PATH3, 1)).value
        assert a > 0
        assert gh_exact(PATH3, PATH3).value == 0


class TestBounds:
    @pytest.mark.parametrize(
        "X, Y, expected",
        [(SEG2, PT, (1.0, 4.0)), (SEG2, SEG2, (0.0, 0.0)), (SEG2, SEG1, (0.5, 2.0))],
    )
    def test_examples(self, X, Y, expected):
        assert gh_bounds(X, Y) == expected

    def test_relation_bound_is_upper(self, rng):
        for _ in range(20):
            X, Y = random_space(rng, 4), random_space(rng, 4)
            f, g = rng.integers(4, size=4), rng.integers(4, size=4)
            assert relation_bound(X, Y, f, g) >= gh_exact(X, Y).value - 1e-9

    def test_relation_bound_of_optimal_assignment(self, rng):
        for _ in range(20):
            X, Y = random_space(rng, 4), random_space(rng, 3)
            res = gh_exact(X, Y)
            assert relation_bound(X, Y, res.a, res.b) == pytest.approx(res.value, abs=1e-9)

    def test_diameter_bound(self):
        for X, Y in corpus_pairs()[:40]:
            assert abs(diameter(X) - diameter(Y)) <= 2 * gh_exact(X.space, Y.space).value + 1e-9
