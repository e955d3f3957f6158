"""Exact Gromov-Hausdorff distance for small finite spaces.

Two independent paths compute the same number:

* :func:`gh_oracle` enumerates all map pairs ``(f, g)`` and returns half the
  smallest distortion of the relation ``graph(f) ∪ graph(g)^T``.
* :func:`gh_exact` searches assignment pairs ``a: X -> Y``, ``b: Y -> X``.
  For one assignment and a level ``t`` it builds the graph on ``X ⨿ Y`` with
  the intra-space distances and the cross edges ``(x, a(x))``, ``(b(y), y)``
  at weight ``t``, and takes all-pairs shortest paths.  Any admissible
  metric obeying these cross bounds is dominated by the shortest-path metric,
  so a feasible witness exists iff the completion restricts exactly to
  ``d_X`` and ``d_Y``.  The minimal feasible ``t`` is located by bisection
  and then snapped to the exact breakpoint.

Branch-and-bound over assignments uses the exact pairwise form of the
shortest-path test: with cross edges of weights ``w1, w2`` the only possible
shortcuts are single excursions, so the completion restricts exactly iff
``w1 + w2 >= |d_X(x1, x2) - d_Y(y1, y2)|`` for every pair of edges.

Pointed variant: an extra edge ``(p, q)`` of weight ``s`` enters the objective
``t + s``.  Its minimal feasible value is ``s(t) = max(0, D - t)`` for a
constant ``D`` of the assignment, so ``t + s(t)`` is nondecreasing and the
optimum sits at the smallest feasible ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .admissible import AdmissibleMetric, hausdorff_under, validate_admissible
from .approximation import all_maps, best_pair
from .config import GH_MAX_POINTS, PAIR_BUDGET, TAU_METRIC, TAU_SOLVER
from .errors import BudgetExceeded
from .metric_core import PointedSpace, SpaceLike, as_space, diameter


@dataclass(frozen=True, eq=False)
class GHResult:
    value: float
    witness: AdmissibleMetric
    a: tuple[int, ...]
    b: tuple[int, ...]
    t: float
    s: float = 0.0
    pointed: tuple[int, int] | None = None

    def objective(self) -> float:
        """The objective re-evaluated on the witness metric."""
        return hausdorff_under(self.witness, self.pointed)


def _check_size(nX: int, nY: int, max_points: int = GH_MAX_POINTS, budget: float = PAIR_BUDGET) -> None:
    count = float(nY) ** nX * float(nX) ** nY
    if max(nX, nY) > max_points or count > budget:
        raise BudgetExceeded(sizes=[nX, nY], estimate=count, budget=budget)


# ------------------------------------------------------------------ oracle


def _pair_terms(dX, dY, p=None, q=None):
    """Per-map distortion (and base-point spread) of every ``f`` and ``g``."""
    F, G = all_maps(dX.shape[0], dY.shape[0]), all_maps(dY.shape[0], dX.shape[0])
    dis_f = np.abs(dY[F[:, :, None], F[:, None, :]] - dX[None]).max(axis=(1, 2))
    dis_g = np.abs(dX[G[:, :, None], G[:, None, :]] - dY[None]).max(axis=(1, 2))
    if p is None:
        return F, G, dis_f, dis_g, None, None
    st_f = np.abs(dX[p][None, :] - dY[q][F]).max(axis=1)
    st_g = np.abs(dX[p][G] - dY[q][None, :]).max(axis=1)
    return F, G, dis_f, dis_g, st_f, st_g


def gh_oracle(X: SpaceLike, Y: SpaceLike, pointed: bool = False, budget: float = PAIR_BUDGET):
    """Exact value by enumerating all map pairs; returns ``(value, (f, g))``.

    Unpointed: ``1/2 min dis(graph f ∪ graph g^T)``.  Pointed:
    ``min max(dis/2, max_{(x,y) in R} |d_X(p,x) - d_Y(q,y)|)``.
    """
    dX, dY = as_space(X).d, as_space(Y).d
    nX, nY = dX.shape[0], dY.shape[0]
    _check_size(nX, nY, budget=budget)
    p = q = None
    if pointed:
        p, q = X.base, Y.base
    F, G, dis_f, dis_g, st_f, st_g = _pair_terms(dX, dY, p, q)
    # objective contributions that depend on one map only
    if pointed:
        own_f = np.maximum(dis_f / 2, st_f)
        own_g = np.maximum(dis_g / 2, st_g)
    else:
        own_f, own_g = dis_f / 2, dis_g / 2
    lower = abs(diameter(dX) - diameter(dY)) / 2
    ar = np.arange(nX)[:, None]
    dXG = dX[ar, G[:, None, :]]  # (|G|, nX, nY): d_X(x, g(y))
    best, arg = math.inf, None
    for fi in np.argsort(own_f, kind="stable"):
        if own_f[fi] >= best:
            break
        keep = np.flatnonzero(own_g < best)
        if keep.size == 0:
            break
        cross = np.abs(dXG[keep] - dY[F[fi]][None]).max(axis=(1, 2)) / 2
        score = np.maximum(np.maximum(cross, own_g[keep]), own_f[fi])
        j = int(np.argmin(score))
        if score[j] < best:
            best, arg = float(score[j]), (F[fi].tolist(), G[keep[j]].tolist())
            if best <= lower:
                break
    return best, arg


# ------------------------------------------------------- completion test


def shortest_path_completion(dX, dY, edges, t: float, pq=None, s: float = 0.0) -> np.ndarray:
    """All-pairs shortest paths on ``X ⨿ Y`` with cross edges ``edges`` at
    weight ``t`` and optionally ``pq`` at weight ``s``.

    Plain Floyd-Warshall on a dense array: ``scipy.sparse.csgraph`` reads zero
    entries of a dense input as missing edges, and zero-weight cross edges are
    legitimate here.
    """
    n, m = dX.shape[0], dY.shape[0]
    D = np.full((n + m, n + m), np.inf)
    D[:n, :n] = dX
    D[n:, n:] = dY
    for x, y in edges:
        D[x, n + y] = D[n + y, x] = min(D[x, n + y], t)
    if pq is not None:
        p, q = pq
        D[p, n + q] = D[n + q, p] = min(D[p, n + q], s)
    for k in range(n + m):
        np.minimum(D, D[:, k, None] + D[None, k, :], out=D)
    return D


def restricts_exactly(D: np.ndarray, dX, dY, tol: float) -> bool:
    n = dX.shape[0]
    return bool(np.all(D[:n, :n] >= dX - tol) and np.all(D[n:, n:] >= dY - tol))


def _minimal_level(feasible, lo: float, hi: float, breakpoints: np.ndarray, width: float) -> float:
    """Smallest feasible level: bisection to ``width``, then snap to the
    smallest feasible breakpoint in the final bracket."""
    if feasible(lo):
        return lo
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    for c in breakpoints[(breakpoints >= lo - width) & (breakpoints <= hi)]:
        if feasible(float(c)):
            return float(c)
    return hi


def _assignment_edges(a, b):
    return [(x, int(y)) for x, y in enumerate(a)] + [(int(x), y) for y, x in enumerate(b)]


def _solve_assignment(dX, dY, a, b, pq, width: float, rtol: float):
    """Exact minimal levels ``(t, s)`` for one assignment via the
    shortest-path test."""
    edges = _assignment_edges(a, b)
    hi = diameter(dX) + diameter(dY) + 1.0
    lo = abs(diameter(dX) - diameter(dY)) / 2
    xs = np.array([e[0] for e in edges])
    ys = np.array([e[1] for e in edges])
    diffs = np.abs(dX[np.ix_(xs, xs)] - dY[np.ix_(ys, ys)])
    t_bp = np.unique(np.append(diffs.ravel() / 2, lo))

    t = _minimal_level(
        lambda t: restricts_exactly(shortest_path_completion(dX, dY, edges, t), dX, dY, rtol),
        lo, hi, t_bp, width,
    )
    if pq is None:
        return t, 0.0
    p, q = pq
    st = np.abs(dX[p, xs] - dY[q, ys])
    s_bp = np.unique(np.clip(np.append(st - t, 0.0), 0.0, None))
    s = _minimal_level(
        lambda s: restricts_exactly(shortest_path_completion(dX, dY, edges, t, pq, s), dX, dY, rtol),
        0.0, hi, s_bp, width,
    )
    return t, s


# ----------------------------------------------------- assignment search


class _Done(Exception):
    pass


def _search(dX: np.ndarray, dY: np.ndarray, pq, lower: float, exact_value):
    """Depth-first search over ``a(0), ..., a(n-1), b(0), ..., b(m-1)`` in
    lexicographic order with strict pruning, so the first optimal assignment
    in that order is kept.  ``exact_value(a, b)`` scores a leaf."""
    n, m = dX.shape[0], dY.shape[0]
    X, Y = dX.tolist(), dY.tolist()
    pX = X[pq[0]] if pq else None
    pY = Y[pq[1]] if pq else None
    K = n + m
    ex, ey = [0] * K, [0] * K
    state = {"best": math.inf, "arg": None}

    def bound(tt2, st):
        return max(tt2 / 2, st)

    def rec(k, tt2, st):
        if k == K:
            a, b = tuple(ey[:n]), tuple(ex[n:])
            val = exact_value(a, b)
            if val < state["best"]:
                state["best"], state["arg"] = val, (a, b)
                if val <= lower:
                    raise _Done
            return
        if k < n:
            pairs = [(k, y) for y in range(m)]
        else:
            pairs = [(x, k - n) for x in range(n)]
        for x, y in pairs:
            best = state["best"]
            cap = 2 * best
            rx, ry = X[x], Y[y]
            new = tt2
            for i in range(k):
                v = rx[ex[i]] - ry[ey[i]]
                if v < 0:
                    v = -v
                if v > new:
                    new = v
                    if new >= cap:
                        break
            if new >= cap:
                continue
            new_st = st
            if pX is not None:
                v = abs(pX[x] - pY[y])
                if v > new_st:
                    new_st = v
            if bound(new, new_st) >= best:
                continue
            ex[k], ey[k] = x, y
            rec(k + 1, new, new_st)

    try:
        rec(0, 0.0, 0.0)
    except _Done:
        pass
    return state["best"], state["arg"]


def _solve(X: SpaceLike, Y: SpaceLike, pointed: bool, tol_solver: float, budget: float) -> GHResult:
    dX, dY = as_space(X).d, as_space(Y).d
    nX, nY = dX.shape[0], dY.shape[0]
    _check_size(nX, nY, budget=budget)
    pq = (X.base, Y.base) if pointed else None
    scale = max(1.0, diameter(dX), diameter(dY))
    rtol = 1e-12 * scale
    lower = abs(diameter(dX) - diameter(dY)) / 2
    if pq:
        lower = max(lower, abs(dX[pq[0]].max() - dY[pq[1]].max()))
    levels = {}

    def exact_value(a, b):
        t, s = _solve_assignment(dX, dY, a, b, pq, tol_solver / 4, rtol)
        levels[(a, b)] = (t, s)
        return t + s

    value, (a, b) = _search(dX, dY, pq, lower + rtol, exact_value)
    t, s = levels[(a, b)]
    # floor cross entries away from zero so the joint matrix stays a metric
    D = shortest_path_completion(dX, dY, _assignment_edges(a, b), max(t, tol_solver), pq, max(s, tol_solver))
    witness = validate_admissible(dX, dY, D[:nX, nX:], TAU_METRIC * scale)
    return GHResult(value, witness, a, b, t, s, pq)


def gh_exact(X: SpaceLike, Y: SpaceLike, tol_solver: float = TAU_SOLVER, budget: float = PAIR_BUDGET) -> GHResult:
    return _solve(as_space(X), as_space(Y), False, tol_solver, budget)


def gh_pointed_exact(X: PointedSpace, Y: PointedSpace, tol_solver: float = TAU_SOLVER, budget: float = PAIR_BUDGET) -> GHResult:
    return _solve(X, Y, True, tol_solver, budget)


def gh(X: SpaceLike, Y: SpaceLike, pointed: bool = False, **kw) -> float:
    if pointed:
        return gh_pointed_exact(X, Y, **kw).value
    return gh_exact(X, Y, **kw).value


# ----------------------------------------------------------------- bounds


def relation_bound(X: SpaceLike, Y: SpaceLike, f, g, pointed: tuple[int, int] | None = None) -> float:
    """Value of the GH objective for the relation ``graph f ∪ graph g^T``.

    The shortest-path completion realizes it, so it is an upper bound on the
    (pointed) GH distance for any maps, with no size limit.
    """
    dX, dY = as_space(X).d, as_space(Y).d
    xs = np.concatenate([np.arange(dX.shape[0]), np.asarray(g, dtype=int)])
    ys = np.concatenate([np.asarray(f, dtype=int), np.arange(dY.shape[0])])
    value = 0.0
    for lo in range(0, xs.size, 512):
        blk = slice(lo, lo + 512)
        value = max(value, float(np.abs(dX[np.ix_(xs[blk], xs)] - dY[np.ix_(ys[blk], ys)]).max()) / 2)
    if pointed is not None:
        p, q = pointed
        value = max(value, float(np.abs(dX[p, xs] - dY[q, ys]).max()))
    return value


def gh_bounds(X: SpaceLike, Y: SpaceLike, pointed: bool = False, budget: float = PAIR_BUDGET) -> tuple[float, float]:
    """``[max(|diam X - diam Y| / 2, eps*/2), 2 eps*]`` from the best pair."""
    _, eps_star, _ = best_pair(X, Y, pointed=pointed, budget=budget)
    lo = max(abs(diameter(X) - diameter(Y)) / 2, eps_star / 2)
    return lo, 2 * eps_star
