"""epsilon-approximation pairs: measurement, exhaustive search, completion of a
single distortion map, and restriction to balls around new base points.

A pair ``(f, g)`` lies in ``Isom_eps`` iff its :attr:`ApproximationReport.defect`
is strictly below ``eps``.  Since the defect of a finite pair is attained,
``Isom_eps`` is non-empty exactly when ``eps > eps_star``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import PAIR_BUDGET, PAIR_MAX_POINTS, TAU_METRIC
from .errors import (
    BallNotNested,
    BudgetExceeded,
    CoverageFailure,
    DistortionTooLarge,
    IndexOutOfRange,
    PointedConstraintViolated,
)
from .metric_core import PointedSpace, SpaceLike, as_space, closed_ball


@dataclass(frozen=True)
class MapPair:
    f: tuple[int, ...]
    g: tuple[int, ...]
    pointed: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(v) for v in self.f))
        object.__setattr__(self, "g", tuple(int(v) for v in self.g))
        if self.pointed is not None:
            object.__setattr__(self, "pointed", (int(self.pointed[0]), int(self.pointed[1])))

    def swapped(self) -> "MapPair":
        pt = None if self.pointed is None else (self.pointed[1], self.pointed[0])
        return MapPair(self.g, self.f, pt)


@dataclass(frozen=True)
class ApproximationReport:
    dis_f: float
    dis_g: float
    roundtrip_X: float
    roundtrip_Y: float
    defect: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "defect", max(self.dis_f, self.dis_g, self.roundtrip_X, self.roundtrip_Y))

    def in_isom(self, eps: float) -> bool:
        return self.defect < eps


def distortion(X: SpaceLike, Y: SpaceLike, f) -> float:
    dX, dY = as_space(X).d, as_space(Y).d
    f = np.asarray(f, dtype=int)
    if f.size == 0:
        return 0.0
    return float(np.abs(dY[np.ix_(f, f)] - dX).max())


def _check_map(m, n_dom: int, n_cod: int, name: str) -> None:
    if len(m) != n_dom:
        raise IndexOutOfRange(f"map {name} has {len(m)} entries, domain has {n_dom}")
    bad = [v for v in m if not 0 <= v < n_cod]
    if bad:
        raise IndexOutOfRange(f"map {name} hits {bad[0]} outside codomain of size {n_cod}")


def defect(X: SpaceLike, Y: SpaceLike, pair: MapPair) -> ApproximationReport:
    dX, dY = as_space(X).d, as_space(Y).d
    _check_map(pair.f, dX.shape[0], dY.shape[0], "f")
    _check_map(pair.g, dY.shape[0], dX.shape[0], "g")
    if pair.pointed is not None:
        p, q = pair.pointed
        if pair.f[p] != q or pair.g[q] != p:
            raise PointedConstraintViolated(p=p, q=q, f_p=pair.f[p], g_q=pair.g[q])
    f, g = np.asarray(pair.f), np.asarray(pair.g)
    return ApproximationReport(
        dis_f=float(np.abs(dY[np.ix_(f, f)] - dX).max()),
        dis_g=float(np.abs(dX[np.ix_(g, g)] - dY).max()),
        roundtrip_X=float(dX[g[f], np.arange(len(f))].max()),
        roundtrip_Y=float(dY[f[g], np.arange(len(g))].max()),
    )


def complete_distortion_map(X: SpaceLike, Y: SpaceLike, f, eps: float) -> MapPair:
    """Build ``h : Y -> X`` so that ``(f, h)`` has defect below ``3 eps``.

    On ``f(X)`` the map ``h`` picks the smallest preimage; any other ``y`` is
    first moved to its nearest point of ``f(X)`` (smallest index on ties).
    For pointed inputs with ``f(p) = q`` the base points are matched.
    """
    dX, dY = as_space(X).d, as_space(Y).d
    f = np.asarray(f, dtype=int)
    _check_map(f.tolist(), dX.shape[0], dY.shape[0], "f")
    dis = float(np.abs(dY[np.ix_(f, f)] - dX).max())
    if not dis < eps:
        raise DistortionTooLarge(distortion=dis, eps=eps)
    image = np.unique(f)
    to_image = dY[:, image]
    near = to_image.min(axis=1)
    if not np.all(near < eps):
        y = int(np.argmax(near >= eps))
        raise CoverageFailure(point=y, distance=float(near[y]), eps=eps)
    preimage = {int(y): int(np.flatnonzero(f == y)[0]) for y in image}
    h = [preimage[int(image[np.argmin(to_image[y])])] for y in range(dY.shape[0])]
    pointed = None
    if isinstance(X, PointedSpace) and isinstance(Y, PointedSpace):
        if f[X.base] != Y.base:
            raise PointedConstraintViolated(p=X.base, q=Y.base, f_p=int(f[X.base]))
        h[Y.base] = X.base
        pointed = (X.base, Y.base)
    return MapPair(tuple(f.tolist()), tuple(h), pointed)


# ------------------------------------------------------------- pair search


def all_maps(n_dom: int, n_cod: int) -> np.ndarray:
    """Every map ``{0..n_dom-1} -> {0..n_cod-1}`` as rows, in lexicographic order."""
    if n_dom == 0:
        return np.zeros((1, 0), dtype=np.intp)
    grids = np.indices((n_cod,) * n_dom).reshape(n_dom, -1).T
    return np.ascontiguousarray(grids, dtype=np.intp)


def pair_count(nX: int, nY: int) -> float:
    return float(nY) ** nX * float(nX) ** nY


def check_budget(nX: int, nY: int, budget: float = PAIR_BUDGET, max_points: int = PAIR_MAX_POINTS) -> None:
    count = pair_count(nX, nY)
    if max(nX, nY) > max_points or count > budget:
        raise BudgetExceeded(sizes=[nX, nY], estimate=count, budget=budget)


def _map_distortions(F: np.ndarray, dX: np.ndarray, dY: np.ndarray) -> np.ndarray:
    return np.abs(dY[F[:, :, None], F[:, None, :]] - dX[None]).max(axis=(1, 2))


def best_pair(X: SpaceLike, Y: SpaceLike, pointed: bool = False, budget: float = PAIR_BUDGET):
    """Exhaustive minimum-defect pair.

    Returns ``(pair, eps_star, report)``.  Among minimizers the pair with the
    lexicographically smallest ``(f, g)`` wins.  Maps ``f`` are visited in
    order of increasing distortion, and the scan stops once ``dis(f)`` alone
    exceeds the incumbent; for each surviving ``f`` all admissible ``g`` are
    scored at once.
    """
    dX, dY = as_space(X).d, as_space(Y).d
    nX, nY = dX.shape[0], dY.shape[0]
    check_budget(nX, nY, budget)
    F, G = all_maps(nX, nY), all_maps(nY, nX)
    base = None
    if pointed:
        if not (isinstance(X, PointedSpace) and isinstance(Y, PointedSpace)):
            raise TypeError("pointed search needs PointedSpace inputs")
        p, q = X.base, Y.base
        F, G = F[F[:, p] == q], G[G[:, q] == p]
        base = (p, q)
    dis_f = _map_distortions(F, dX, dY)
    dis_g = _map_distortions(G, dY, dX)
    ar_x, ar_y = np.arange(nX), np.arange(nY)

    best, key = math.inf, None
    for fi in np.argsort(dis_f, kind="stable"):
        if dis_f[fi] > best:
            break
        f = F[fi]
        mask = dis_g <= best
        if not mask.any():
            continue
        gi = np.flatnonzero(mask)
        Gs = G[gi]
        rt_x = dX[Gs[:, f], ar_x].max(axis=1)
        rt_y = dY[f[Gs], ar_y].max(axis=1)
        score = np.maximum(np.maximum(rt_x, rt_y), np.maximum(dis_g[gi], dis_f[fi]))
        j = int(np.argmin(score))
        cand = (int(fi), int(gi[j]))
        if score[j] < best or (score[j] == best and cand < key):
            best, key = float(score[j]), cand
    pair = MapPair(F[key[0]].tolist(), G[key[1]].tolist(), base)
    return pair, best, defect(dX, dY, pair)


# ------------------------------------------------------ ball restriction


@dataclass(frozen=True)
class RestrictedPair:
    """Pair between ``B_r(p')`` and ``B_r(q')``; maps use global indices."""

    x_ball: tuple[int, ...]
    y_ball: tuple[int, ...]
    f: tuple[int, ...]
    g: tuple[int, ...]
    eps: float
    delta_f: float
    delta_g: float
    report: ApproximationReport
    surplus: float

    @property
    def delta(self) -> float:
        return max(self.delta_f, self.delta_g)

    @property
    def bound(self) -> float:
        """The constant as stated: ``4 eps + delta``."""
        return 4 * self.eps + self.delta

    @property
    def bound_derived(self) -> float:
        """What the argument actually delivers, including projection surplus."""
        return 4 * self.eps + self.delta_f + self.delta_g + 2 * self.surplus

    def local_pair(self) -> MapPair:
        xi = {x: k for k, x in enumerate(self.x_ball)}
        yi = {y: k for k, y in enumerate(self.y_ball)}
        return MapPair([yi[v] for v in self.f], [xi[v] for v in self.g])


def _project(d: np.ndarray, targets: np.ndarray, ball: np.ndarray, inside: np.ndarray) -> np.ndarray:
    """Nearest ball point (lowest index on ties) for targets outside the ball."""
    out = targets.copy()
    for k, t in enumerate(targets):
        if not inside[t]:
            out[k] = ball[np.argmin(d[t, ball])]
    return out


def restrict_pair(
    X: PointedSpace,
    Y: PointedSpace,
    pair: MapPair,
    R: float,
    r: float,
    p_alt: int | None = None,
    q_alt: int | None = None,
    eps: float | None = None,
    tol: float = TAU_METRIC,
) -> RestrictedPair:
    """Move a pair on ``R``-balls around ``(p, q)`` to ``r``-balls around
    ``(p', q')``.

    The shortest-geodesic point used to pull images back into the small ball
    is replaced by the nearest point of the closed ball.  On spaces where
    geodesics are sampled this is the same point; elsewhere the excess over
    ``eps + delta_f`` is reported as ``surplus``.  ``eps`` defaults to the
    measured defect of ``pair`` on the ``R``-balls.
    """
    if r > R:
        raise ValueError("need r <= R")
    p, q = X.base, Y.base
    p_alt = p if p_alt is None else int(p_alt)
    q_alt = q if q_alt is None else int(q_alt)
    dX, dY = X.d, Y.d
    BX, BY = closed_ball(X, R, p, tol).array(), closed_ball(Y, R, q, tol).array()
    bx, by = closed_ball(X, r, p_alt, tol).array(), closed_ball(Y, r, q_alt, tol).array()
    if not (set(bx) <= set(BX) and set(by) <= set(BY)):
        raise BallNotNested(r=r, R=R, p_alt=p_alt, q_alt=q_alt)
    f, g = np.asarray(pair.f), np.asarray(pair.g)
    if f[p] != q or g[q] != p:
        raise PointedConstraintViolated(p=p, q=q, f_p=int(f[p]), g_q=int(g[q]))
    if eps is None:
        sub = MapPair(
            [int(np.searchsorted(BY, v)) if v in BY else -1 for v in f[BX]],
            [int(np.searchsorted(BX, v)) if v in BX else -1 for v in g[BY]],
        )
        if min(sub.f + sub.g) < 0:
            raise BallNotNested(detail="pair does not map R-balls into R-balls")
        eps = defect(dX[np.ix_(BX, BX)], dY[np.ix_(BY, BY)], sub).defect
    delta_f = float(dY[f[p_alt], q_alt])
    delta_g = float(dX[p_alt, g[q_alt]])

    in_y = np.zeros(Y.n, dtype=bool)
    in_y[by] = True
    in_x = np.zeros(X.n, dtype=bool)
    in_x[bx] = True
    ft = _project(dY, f[bx], by, in_y)
    ft[bx == p_alt] = q_alt
    gt = _project(dX, g[by], bx, in_x)
    gt[by == q_alt] = p_alt

    moved_f = dY[f[bx], ft].max()
    moved_g = dX[g[by], gt].max()
    surplus = max(0.0, moved_f - (eps + delta_f), moved_g - (eps + delta_g))

    local = MapPair(np.searchsorted(by, ft), np.searchsorted(bx, gt))
    report = defect(dX[np.ix_(bx, bx)], dY[np.ix_(by, by)], local)
    return RestrictedPair(
        tuple(bx.tolist()), tuple(by.tolist()), tuple(ft.tolist()), tuple(gt.tolist()),
        float(eps), delta_f, delta_g, report, float(surplus),
    )
