"""Pointed-GH convergence harness for generated sequences of finite spaces.

For each index ``i`` and radius ``r`` the harness compares the closed ball
``B_r(p_i)`` of the ``i``-th space with ``B_r(p)`` of a finite reference
sample.  Small balls are compared exactly; larger ones get a certified
interval (a "sandwich" cell) built from

* a lower bound from diameters, eccentricities and the best pair between
  greedy nets of the two balls, and
* an upper bound from the best of: the net pair padded by the net radii, the
  net pair extended to the full balls, and the anchor-based nearest-point
  pair supplied by the generator.

All limits are finite samples with a declared mesh, so a verdict of
"converged" always means "small up to the reference mesh".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .approximation import MapPair, best_pair, defect
from .clustering import accumulation_clusters, large_size
from .config import TAU_SOLVER
from .errors import AmbiguousLimitPoint, BadDescriptor, NoFeasibleSchedule, NotBiLipschitz
from .gh_exact import gh_pointed_exact, relation_bound
from .metric_core import PointedSpace, closed_ball, diameter, restrict_pointed
from .sequences import Reference, SpaceSequence, labels_of

N_MAX = 5


# ------------------------------------------------------------------ nets


def greedy_net(P: PointedSpace, k: int) -> tuple[np.ndarray, float]:
    """Farthest-point sample of at most ``k`` points starting at the base.

    Returns the net (indices into ``P``) and its covering radius.
    """
    d = P.d
    net = [P.base]
    near = d[P.base].copy()
    while len(net) < min(k, P.n):
        nxt = int(np.argmax(near))
        if near[nxt] == 0:
            break
        net.append(nxt)
        np.minimum(near, d[nxt], out=near)
    return np.array(net), float(near.max())


# ----------------------------------------------------------------- cells


@dataclass
class Cell:
    index: int
    radius: float
    lo: float
    hi: float
    mode: str  # "exact" or "sandwich"
    f: dict = field(default_factory=dict, repr=False)  # ball of X_i -> reference, global indices
    g: dict = field(default_factory=dict, repr=False)
    net_radii: tuple[float, float] = (0.0, 0.0)
    sizes: tuple[int, int] = (0, 0)
    source: str = ""

    def row(self) -> dict:
        return {"index": self.index, "radius": self.radius, "lo": self.lo, "hi": self.hi, "mode": self.mode}


def _lift(local, dom: np.ndarray, cod: np.ndarray) -> dict:
    return {int(dom[k]): int(cod[v]) for k, v in enumerate(local)}


def _anchor_pair(seq: SpaceSequence | None, A: PointedSpace, B: PointedSpace):
    if seq is None:
        return None
    try:
        cost = seq.anchor_cost(labels_of(A), labels_of(B))
    except (BadDescriptor, IndexError, ValueError):
        return None
    if not np.all(np.isfinite(cost)):
        return None
    f = np.argmin(cost, axis=1)
    g = np.argmin(cost, axis=0)
    f[A.base], g[B.base] = B.base, A.base
    return f, g


def compare_balls(
    X: PointedSpace,
    ref: PointedSpace,
    r: float,
    seq: SpaceSequence | None = None,
    index: int = 0,
    n_max: int = N_MAX,
    tol_solver: float = TAU_SOLVER,
) -> Cell:
    """One harness cell: pointed GH of the closed ``r``-balls, exact or bounded."""
    A, ballA = closed_ball_pointed(X, r)
    B, ballB = closed_ball_pointed(ref, r)
    ia, ib = ballA.array(), ballB.array()
    if A.n <= n_max and B.n <= n_max:
        res = gh_pointed_exact(A, B, tol_solver=tol_solver)
        return Cell(index, r, res.value, res.value, "exact", _lift(res.a, ia, ib), _lift(res.b, ib, ia),
                    sizes=(A.n, B.n), source="exact")

    netA, rhoA = greedy_net(A, n_max)
    netB, rhoB = greedy_net(B, n_max)
    # restricted spaces list their points in sorted order
    netA, netB = np.sort(netA), np.sort(netB)
    NA, NB = restrict_pointed(A, netA), restrict_pointed(B, netB)
    pair, eps_star, _ = best_pair(NA, NB, pointed=True)

    lo = max(
        abs(diameter(A) - diameter(B)) / 2,
        abs(A.d[A.base].max() - B.d[B.base].max()),
        eps_star / 2 - rhoA - rhoB,
        0.0,
    )
    candidates = [(2 * eps_star + rhoA + rhoB, "nets", None)]

    # extend the net pair to the full balls through nearest net points
    nearA = netA[np.argmin(A.d[:, netA], axis=1)]
    nearB = netB[np.argmin(B.d[:, netB], axis=1)]
    posA = {int(v): k for k, v in enumerate(netA)}
    posB = {int(v): k for k, v in enumerate(netB)}
    fe = np.array([netB[pair.f[posA[int(v)]]] for v in nearA])
    ge = np.array([netA[pair.g[posB[int(v)]]] for v in nearB])
    fe[A.base], ge[B.base] = B.base, A.base
    candidates.append((relation_bound(A, B, fe, ge, (A.base, B.base)), "extended", (fe, ge)))

    anchored = _anchor_pair(seq, A, B)
    if anchored is not None:
        candidates.append((relation_bound(A, B, *anchored, (A.base, B.base)), "anchors", anchored))

    hi, source, maps = min(candidates, key=lambda c: c[0])
    if maps is None:
        maps = candidates[1][2]
    return Cell(index, r, float(lo), float(hi), "sandwich", _lift(maps[0], ia, ib), _lift(maps[1], ib, ia),
                (rhoA, rhoB), (A.n, B.n), source)


def closed_ball_pointed(X: PointedSpace, r: float):
    ball = closed_ball(X, r)
    return restrict_pointed(X, ball), ball


def ball_curve(seq: SpaceSequence, reference: Reference, r: float, indices: Sequence[int], n_max: int = N_MAX) -> list[Cell]:
    ref = reference.space
    return [compare_balls(seq(i), ref, r, seq, i, n_max) for i in indices]


# -------------------------------------------------------------- reports


def _slope(x, y) -> float:
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.size < 2:
        return 0.0
    return float(np.polyfit(x, y, 1)[0])


def verdict(indices, hi, tol: float) -> tuple[str, dict]:
    """Converged iff the last third of the upper bounds is below ``tol`` and
    the least-squares slope of the upper bounds is not positive."""
    n = len(hi)
    tail = np.asarray(hi[n - max(1, math.ceil(n / 3)):])
    slope = _slope(indices, hi)
    ok = bool(tail.max() < tol) and slope <= 1e-12
    return ("converged" if ok else "undecided"), {"tail_max": float(tail.max()), "slope": slope, "tol": tol}


@dataclass
class ConvergenceReport:
    radii: list
    indices: list
    cells: dict  # radius -> list[Cell]
    verdicts: dict
    details: dict
    diam_curve: list
    diam_reference: float
    cover_cells: list
    h_ref: float
    tol_verdict: float

    @property
    def verdict(self) -> str:
        return "converged" if all(v == "converged" for v in self.verdicts.values()) else "undecided"

    def hi(self, r) -> np.ndarray:
        return np.array([c.hi for c in self.cells[r]])

    def lo(self, r) -> np.ndarray:
        return np.array([c.lo for c in self.cells[r]])

    def table(self) -> np.ndarray:
        """Upper bounds as a ``len(radii) x len(indices)`` array."""
        return np.array([self.hi(r) for r in self.radii])

    def rows(self) -> list[dict]:
        return [c.row() for r in self.radii for c in self.cells[r]]

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "indices": list(self.indices),
            "verdict": self.verdict,
            "verdicts": {str(r): v for r, v in self.verdicts.items()},
            "details": {str(r): v for r, v in self.details.items()},
            "h_ref": self.h_ref,
            "tol_verdict": self.tol_verdict,
            "diam_curve": self.diam_curve,
            "diam_reference": self.diam_reference,
            "cover_hi": [c.hi for c in self.cover_cells],
            "curve": self.rows(),
        }


def converge(
    seq: SpaceSequence,
    reference: Reference,
    radii: Sequence[float],
    indices: Sequence[int],
    n_max: int = N_MAX,
    tol_verdict: float | None = None,
) -> ConvergenceReport:
    h = reference.mesh
    tol = 3 * h + 1e-3 if tol_verdict is None else tol_verdict
    cells, verdicts, details = {}, {}, {}
    for r in radii:
        cells[r] = ball_curve(seq, reference, r, indices, n_max)
        verdicts[r], details[r] = verdict(indices, [c.hi for c in cells[r]], tol)
    ref = reference.space
    ecc_ref = float(ref.d[ref.base].max())
    diam_curve, cover = [], []
    for i in indices:
        X = seq(i)
        diam_curve.append(diameter(X))
        rc = max(float(X.d[X.base].max()), ecc_ref)
        cover.append(compare_balls(X, ref, rc, seq, i, n_max))
    return ConvergenceReport(list(radii), list(indices), cells, verdicts, details, diam_curve,
                             diameter(ref), cover, h, tol)


# ------------------------------------------------------------- schedules


def parse_h(h) -> Callable[[float], float]:
    """``"id"``, ``"sqrt"``, ``"c*x"`` / ``"linear:c"``, ``"pow:a"``, or a callable."""
    if callable(h):
        return h
    t = str(h).strip().lower()
    if t in ("id", "identity", "x"):
        return lambda x: x
    if t == "sqrt":
        return math.sqrt
    try:
        if t.startswith("linear:"):
            c = float(t.split(":", 1)[1])
            return lambda x: c * x
        if t.endswith("*x"):
            c = float(t[:-2])
            return lambda x: c * x
        if t.startswith("pow:"):
            a = float(t.split(":", 1)[1])
            return lambda x: x**a
    except ValueError:
        pass
    raise BadDescriptor(f"unknown h descriptor {h!r}")


@dataclass
class Schedule:
    indices: list
    radii: list  # chosen radius per index, None where no radius is feasible
    exceptional: list  # indices with no feasible radius
    success: list  # indices where the largest tabulated radius is feasible
    monotone_table: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {"indices": self.indices, "schedule": self.radii, "exceptional": self.exceptional, "success": self.success}


def tail_sup(table: np.ndarray) -> np.ndarray:
    """``eps^r_i := max_{j >= i} eps^r_j`` along each row."""
    return np.maximum.accumulate(table[:, ::-1], axis=1)[:, ::-1]


def _schedule(table, radii, indices, h) -> Schedule:
    table = np.asarray(table, dtype=float)
    radii = [float(r) for r in radii]
    if table.shape != (len(radii), len(indices)):
        raise ValueError(f"table shape {table.shape} does not match {len(radii)} radii x {len(indices)} indices")
    hf = parse_h(h)
    E = tail_sup(table)
    thresh = np.array([hf(1.0 / r) for r in radii])[:, None]
    feasible = E <= thresh + 1e-12
    chosen, exceptional, success = [], [], []
    top = int(np.argmax(radii))
    for col, i in enumerate(indices):
        ok = np.flatnonzero(feasible[:, col])
        if ok.size == 0:
            chosen.append(None)
            exceptional.append(i)
            continue
        k = int(ok[np.argmax(np.asarray(radii)[ok])])
        chosen.append(radii[k])
        if k == top:
            success.append(i)
    return Schedule(list(indices), chosen, exceptional, success, E)


def select_radius_schedule(table, radii, indices, h="id") -> Schedule:
    """Finite version of the radius-schedule lemma.

    Rows are monotonized by tail suprema (so each row is nonincreasing), the
    candidate sets ``R_i = {r : eps^r_i <= h(1/r)}`` then grow with ``i``,
    and ``r_i := max R_i``.  The schedule succeeds when ``r_i`` reaches the
    largest tabulated radius; the indices before that are the finite
    exceptional prefix and are reported.
    """
    s = _schedule(table, radii, indices, h)
    if not s.success:
        raise NoFeasibleSchedule(exceptional=s.exceptional, schedule=s.radii,
                                 detail="largest radius never becomes feasible")
    return s


# ------------------------------------------------- points, bases, maps


def _image_clusters(ref: PointedSpace, images: list[int], tau: float):
    img = np.asarray(images)
    D = ref.d[np.ix_(img, img)]
    return img, accumulation_clusters(D, tau)


@dataclass
class PointLimit:
    representatives: list  # reference indices
    clusters: list
    images: list

    @property
    def unique(self) -> bool:
        return len(self.representatives) == 1


def point_limit(reference: Reference, q: Callable[[int], int], pairs: dict, indices: Sequence[int], tau: float | None = None) -> PointLimit:
    """Cluster ``f_i(q_i)`` in the reference sample.

    ``pairs[i]`` maps points of ``X_i`` to reference points (any mapping type,
    e.g. the ``f`` dict of a harness cell).  ``tau`` defaults to twice the
    reference mesh.
    """
    tau = 2 * reference.mesh if tau is None else tau
    images = [int(pairs[i][q(i)]) for i in indices]
    img, clusters = _image_clusters(reference.space, images, tau)
    reps = [int(img[c.representative]) for c in clusters]
    return PointLimit(reps, clusters, images)


def rebase(seq: SpaceSequence, reference: Reference, q: Callable[[int], int], pairs: dict, indices, tau=None):
    """Move base points to ``q_i`` and the reference base to the limit of
    ``q_i`` (which must be unique)."""
    lim = point_limit(reference, q, pairs, indices, tau)
    if not lim.unique:
        raise AmbiguousLimitPoint(candidates=lim.representatives)
    return seq.rebased(q), reference.rebased(lim.representatives[0])


def anchor_pairs(seq: SpaceSequence, reference: Reference, indices) -> dict:
    """Nearest-anchor maps ``X_i -> reference`` and back, by index."""
    out = {}
    for i in indices:
        X = seq(i)
        cost = seq.anchor_cost(labels_of(X), labels_of(reference.space))
        out[i] = (np.argmin(cost, axis=1), np.argmin(cost, axis=0))
    return out


@dataclass
class TransportReport:
    indices: list
    maps: list  # h_i as index arrays on the reference of X
    violations: list  # max over pairs of d(h x, h x') - (alpha d(x,x') + (alpha+1) eps_i)
    eps: list
    candidates: list  # representative maps of accumulation clusters


def transport_map(
    seqX: SpaceSequence,
    refX: Reference,
    seqY: SpaceSequence,
    refY: Reference,
    f: Callable[[int], np.ndarray],
    alpha: float,
    indices: Sequence[int],
    tau: float | None = None,
    tol: float = 1e-9,
) -> TransportReport:
    """Compose ``h_i = f^Y_i o f_i o g^X_i`` on the reference of ``X`` and
    cluster the resulting maps under the sup distance.

    ``f(i)`` is an index array mapping ``X_i`` to ``Y_i``.  The approximation
    pairs are the nearest-anchor pairs of the generators.  Each cluster
    representative is checked to be ``alpha``-bi-Lipschitz up to the
    cluster tolerance.
    """
    pX = anchor_pairs(seqX, refX, indices)
    pY = anchor_pairs(seqY, refY, indices)
    dXr, dYr = refX.space.d, refY.space.d
    maps, viol, eps = [], [], []
    for i in indices:
        fX, gX = pX[i]
        fY, gY = pY[i]
        Xi, Yi = seqX(i), seqY(i)
        e = max(defect(Xi, refX.space, MapPair(fX, gX)).defect, defect(Yi, refY.space, MapPair(fY, gY)).defect)
        h = fY[np.asarray(f(i))[gX]]
        maps.append(h)
        eps.append(e)
        viol.append(float((dYr[np.ix_(h, h)] - (alpha * dXr + (alpha + 1) * e)).max()))
    tau = 2 * max(refX.mesh, refY.mesh) + tol if tau is None else tau
    H = np.array(maps)
    D = np.array([[float(dYr[a, b].max()) for b in H] for a in H])
    clusters = accumulation_clusters(D, tau)
    candidates = []
    for c in clusters:
        h = H[c.representative]
        ratio_hi = dYr[np.ix_(h, h)] - alpha * dXr
        ratio_lo = dXr / alpha - dYr[np.ix_(h, h)]
        worst = max(float(ratio_hi.max()), float(ratio_lo.max()))
        if worst > tau:
            a, b = np.unravel_index(np.argmax(np.maximum(ratio_hi, ratio_lo)), ratio_hi.shape)
            raise NotBiLipschitz(x=int(a), y=int(b), excess=worst, alpha=alpha)
        candidates.append(h)
    return TransportReport(list(indices), maps, viol, eps, candidates)
