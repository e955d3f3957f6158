"""Finite stand-ins for ultralimit arguments.

Accumulation points, common subsequences and sublimit spaces are all
certified by explicit index sets.  An index set drawn from a prefix of length
``N`` is accepted as "large" (the surrogate for ultrafilter measure one) when
it has at least ``ceil(sqrt(N))`` elements; see :mod:`ghkit.clustering`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .clustering import accumulation_clusters, large_size
from .config import TAU_SOLVER
from .errors import NoCommonSubsequence, NoFeasibleSchedule
from .gh_exact import gh_pointed_exact
from .metric_core import PointedSpace, closed_ball, restrict_pointed


@dataclass(frozen=True)
class Accumulation:
    value: float
    indices: tuple[int, ...]  # certificate: terms within tau of value


def accumulation_points(a: Sequence[float], tau: float, min_size: int | None = None) -> list[Accumulation]:
    """Accumulation points of a bounded real prefix, one per qualifying
    single-linkage cluster, in increasing order."""
    a = np.asarray(a, dtype=float)
    D = np.abs(a[:, None] - a[None, :])
    out = [Accumulation(float(a[c.representative]), c.certificate) for c in accumulation_clusters(D, tau, min_size)]
    return sorted(out, key=lambda acc: acc.value)


def common_subsequence(seqs: Sequence[Sequence[float]], targets: Sequence[float], tau: float, N: int | None = None) -> list[int]:
    """Indices ``i < N`` at which every sequence is within ``tau`` of its target."""
    if len(seqs) != len(targets):
        raise ValueError("need one target per sequence")
    arr = [np.asarray(s, dtype=float) for s in seqs]
    N = min(len(s) for s in arr) if N is None else int(N)
    ok = np.ones(N, dtype=bool)
    for s, t in zip(arr, targets):
        ok &= np.abs(s[:N] - t) <= tau
    idx = np.flatnonzero(ok).tolist()
    need = large_size(N)
    if len(idx) < need:
        raise NoCommonSubsequence(found=len(idx), required=need, targets=list(map(float, targets)))
    return idx


@dataclass
class Sublimit:
    medoid_index: int
    space: PointedSpace  # the medoid's r-ball
    spread: float
    distances: np.ndarray  # pairwise pointed GH of r-balls along the subsequence
    subseq: list


def sublimit_space(spaces, subseq: Sequence[int], r: float, tol_solver: float = TAU_SOLVER) -> Sublimit:
    """Medoid of the ``r``-balls along ``subseq`` under exact pointed GH.

    ``spaces`` is indexable by sequence index (a list, dict or generator).
    The spread is the medoid's largest distance to the other members, so
    every member is within ``spread`` of the returned space.
    """
    subseq = list(subseq)
    balls = [restrict_pointed(spaces[i], closed_ball(spaces[i], r)) for i in subseq]
    k = len(balls)
    D = np.zeros((k, k))
    for a in range(k):
        for b in range(a + 1, k):
            D[a, b] = D[b, a] = gh_pointed_exact(balls[a], balls[b], tol_solver=tol_solver).value
    m = int(np.argmin(D.max(axis=1)))
    return Sublimit(subseq[m], balls[m], float(D[m].max()), D, subseq)


def radius_schedule_measured(table, radii, indices, subseq, h="id"):
    """Radius schedule along a subsequence.

    Runs the same monotonize-and-select rule as
    :func:`ghkit.convergence.select_radius_schedule` on the subsequence's
    columns and requires the success set to be large relative to the full
    prefix length.
    """
    from .convergence import _schedule

    indices = list(indices)
    pos = [indices.index(i) for i in subseq]
    table = np.asarray(table, dtype=float)[:, pos]
    s = _schedule(table, radii, list(subseq), h)
    need = large_size(len(indices))
    if len(s.success) < need:
        raise NoFeasibleSchedule(exceptional=s.exceptional, success=s.success, required=need)
    return s
