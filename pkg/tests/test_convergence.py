import numpy as np
import pytest

from ghkit.convergence import (
    anchor_pairs,
    ball_curve,
    compare_balls,
    converge,
    greedy_net,
    parse_h,
    point_limit,
    rebase,
    select_radius_schedule,
    tail_sup,
    transport_map,
    verdict,
)
from ghkit.errors import AmbiguousLimitPoint, BadDescriptor, NoFeasibleSchedule
from ghkit.gh_exact import gh_pointed_exact
from ghkit.metric_core import PointedSpace, closed_ball, cycle_space, restrict_pointed
from ghkit.sequences import (
    Reference,
    constant,
    cycle_pointed,
    lattice_reference,
    lattice_space,
    rescaled,
    scaled_lattice,
)

from _spaces import PATH3, random_pointed

C8 = cycle_pointed(8)
REFLECT = (-np.arange(8)) % 8


class TestGreedyNet:
    def test_covers(self):
        P = lattice_space(0.25, 2)
        net, rho = greedy_net(P, 5)
        assert net[0] == P.base and len(net) == 5
        assert rho == pytest.approx(P.d[:, net].min(axis=1).max())
        assert rho == pytest.approx(0.5)

    def test_small_space_is_its_own_net(self):
        net, rho = greedy_net(PointedSpace(PATH3, 1), 5)
        assert sorted(net) == [0, 1, 2] and rho == 0


class TestCompareBalls:
    def test_exact_cell(self):
        cell = compare_balls(cycle_pointed(6), cycle_pointed(4), 1.0)
        assert cell.mode == "exact" and cell.lo == cell.hi == 0

    def test_sandwich_contains_exact_value(self, rng):
        for _ in range(15):
            X, Y = random_pointed(rng, 5), random_pointed(rng, 5)
            r = 2.0
            A = restrict_pointed(X, closed_ball(X, r))
            B = restrict_pointed(Y, closed_ball(Y, r))
            exact = gh_pointed_exact(A, B).value
            cell = compare_balls(X, Y, r, n_max=3)
            if cell.mode == "sandwich":
                assert cell.lo - 1e-9 <= exact <= cell.hi + 1e-9

    def test_maps_use_global_indices(self):
        X = lattice_space(0.1, 2)
        cell = compare_balls(X, lattice_space(0.25, 2), 1.0, scaled_lattice(2.0))
        ball = set(closed_ball(X, 1.0).indices)
        assert set(cell.f) == ball
        assert cell.f[X.base] == lattice_space(0.25, 2).base


class TestCurves:
    def test_constant_sequence_is_zero(self):
        X = random_pointed(np.random.default_rng(42), 5)
        cells = ball_curve(constant(X), Reference(X), 2.0, range(1, 6))
        assert [c.hi for c in cells] == [0.0] * 5

    def test_lattice_curve_bound(self):
        idx = list(range(1, 9))
        for c in ball_curve(scaled_lattice(2.0), lattice_reference(2.0, 1 / 16), 1.0, idx):
            assert c.hi <= 1 / (2 * c.index) + 1 / 16 + 1e-9

    def test_rescaled_rate(self):
        X = PointedSpace(cycle_space(5), 0)
        # r / alpha_i stays between the same two distances of C5, so no point
        # enters or leaves the ball along the sequence
        alpha = lambda i: 1 + 1 / (i + 3)
        for r in (1.5, 2.5):
            for c in ball_curve(rescaled(X, alpha), Reference(X), r, range(1, 8)):
                assert c.hi <= abs(alpha(c.index) - 1) * r + 1e-9

    def test_report_shapes(self):
        rep = converge(constant(C8), Reference(C8), [1, 2], [1, 2, 3])
        assert rep.table().shape == (2, 3)
        assert rep.verdict == "converged"
        assert len(rep.rows()) == 6
        assert rep.to_dict()["diam_curve"] == [4.0] * 3

    def test_verdict_rejects_growth(self):
        assert verdict([1, 2, 3], [0.0, 0.0, 0.0], 0.1)[0] == "converged"
        assert verdict([1, 2, 3], [0.0, 0.01, 0.02], 0.1)[0] == "undecided"
        assert verdict([1, 2, 3], [0.5, 0.4, 0.3], 0.1)[0] == "undecided"


class TestSchedule:
    radii = [1.0, 2.0, 4.0, 8.0]
    indices = list(range(1, 65))

    def table(self, fn):
        return np.array([[fn(r, i) for i in self.indices] for r in self.radii])

    def test_sqrt_schedule(self):
        s = select_radius_schedule(self.table(lambda r, i: r / i), self.radii, self.indices)
        for i, ri in zip(self.indices, s.radii):
            # the continuous choice is sqrt(i); the tabulated one is the largest grid radius below it
            assert ri == max(r for r in self.radii if r <= np.sqrt(i))
        assert s.exceptional == []
        assert s.success == list(range(64, 65))

    def test_zero_table(self):
        s = select_radius_schedule(np.zeros((4, 64)), self.radii, self.indices)
        assert s.radii == [8.0] * 64

    def test_constant_one_fails(self):
        with pytest.raises(NoFeasibleSchedule):
            select_radius_schedule(np.ones((4, 64)), self.radii, self.indices)

    def test_tail_sup(self):
        assert tail_sup(np.array([[1.0, 3.0, 2.0, 0.0]])).tolist() == [[3.0, 3.0, 2.0, 0.0]]

    def test_nondecreasing_radii(self, rng):
        table = rng.random((4, 30)) / np.arange(1, 31)
        s = select_radius_schedule(table, self.radii, list(range(1, 31)), "3*x")
        chosen = [r for r in s.radii if r is not None]
        assert chosen == sorted(chosen)

    @pytest.mark.parametrize("h, x, y", [("id", 0.25, 0.25), ("sqrt", 0.25, 0.5), ("2*x", 0.25, 0.5), ("pow:2", 0.5, 0.25)])
    def test_parse_h(self, h, x, y):
        assert parse_h(h)(x) == pytest.approx(y)

    def test_parse_h_rejects(self):
        with pytest.raises(BadDescriptor):
            parse_h("exp")


class TestPointLimits:
    def test_constant_identity(self):
        pairs = {i: np.arange(8) for i in range(1, 10)}
        assert point_limit(Reference(C8), lambda i: 3, pairs, range(1, 10), tau=0.5).representatives == [3]

    def test_lattice_half(self):
        seq, ref = scaled_lattice(2.0), lattice_reference(2.0, 1 / 64)
        idx = list(range(1, 17))
        pairs = {i: f for i, (f, g) in anchor_pairs(seq, ref, idx).items()}
        labels = lambda i: np.array([float(s) for s in seq(i).space.labels])
        q = lambda i: int(np.argmin(np.abs(labels(i) - 0.5)))
        lim = point_limit(ref, q, pairs, idx)
        assert lim.unique
        assert ref.space.space.labels[lim.representatives[0]] == "0.5"

    def test_alternating_reflection_is_ambiguous(self):
        idx = list(range(1, 21))
        pairs = {i: (np.arange(8) if i % 2 == 0 else REFLECT) for i in idx}
        lim = point_limit(Reference(C8), lambda i: 2, pairs, idx, tau=0.5)
        assert sorted(lim.representatives) == [2, 6]
        with pytest.raises(AmbiguousLimitPoint):
            rebase(constant(C8), Reference(C8), lambda i: 2, pairs, idx, tau=0.5)

    def test_rebase_unchanged(self):
        pairs = {i: np.arange(8) for i in range(1, 6)}
        seq, ref = rebase(constant(C8), Reference(C8), lambda i: 0, pairs, range(1, 6), tau=0.5)
        assert seq(3).base == 0 and ref.space.base == 0

    def test_rebased_lattice_converges(self):
        seq, ref = scaled_lattice(3.0), lattice_reference(3.0, 1 / 32)
        idx = list(range(2, 13))
        pairs = {i: f for i, (f, g) in anchor_pairs(seq, ref, idx).items()}
        labels = lambda i: np.array([float(s) for s in seq(i).space.labels])
        q = lambda i: int(np.argmin(np.abs(labels(i) - 0.5)))
        s2, r2 = rebase(seq, ref, q, pairs, idx)
        hi = [c.hi for c in ball_curve(s2, r2, 1.0, idx)]
        assert hi[-1] <= 3 * ref.mesh + 1e-3


class TestTransport:
    def test_identity_on_constant(self):
        rep = transport_map(constant(C8), Reference(C8), constant(C8), Reference(C8),
                            lambda i: np.arange(8), 1.0, range(1, 6), tau=0.5)
        assert len(rep.candidates) == 1
        assert rep.candidates[0].tolist() == list(range(8))
        assert rep.eps == [0.0] * 5

    def test_doubling(self):
        sX, rX = scaled_lattice(1.0), lattice_reference(1.0, 1 / 16)
        sY, rY = scaled_lattice(2.0, lambda i: 2 / i), lattice_reference(2.0, 1 / 8)
        rep = transport_map(sX, rX, sY, rY, lambda i: np.arange(sX(i).n), 2.0, range(1, 9))
        assert len(rep.candidates) == 1
        assert max(rep.violations) <= 1e-9
        h = rep.candidates[0]
        assert np.abs(rY.space.d[np.ix_(h, h)] - 2 * rX.space.d).max() <= 2 * rY.mesh + 1e-9

    def test_alternating_isometries(self):
        rep = transport_map(constant(C8), Reference(C8), constant(C8), Reference(C8),
                            lambda i: np.arange(8) if i % 2 == 0 else REFLECT, 1.0, range(1, 21), tau=0.5)
        assert sorted(h.tolist() for h in rep.candidates) == sorted([list(range(8)), REFLECT.tolist()])
