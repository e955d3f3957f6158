"""Length-space diagnostics: epsilon-midpoints and dyadic approximate geodesics.

A finite space with more than one point is never a length space, so nothing
here fails on a bad midpoint.  Instead each quantity reports how far the
sample is from meeting the tolerance the continuous argument asks for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metric_core import SpaceLike, as_space


def _midpoint_scores(d: np.ndarray, x: int, y: int) -> np.ndarray:
    L = d[x, y]
    return np.maximum(np.abs(2 * d[x] - L), np.abs(2 * d[y] - L))


def best_midpoint(X: SpaceLike, x: int, y: int) -> tuple[int, float]:
    """Point ``z`` minimizing ``max(|2d(x,z) - d(x,y)|, |2d(y,z) - d(x,y)|)``."""
    scores = _midpoint_scores(as_space(X).d, x, y)
    z = int(np.argmin(scores))
    return z, float(scores[z])


def midpoint_defect(X: SpaceLike) -> float:
    """Largest best-midpoint defect over all pairs."""
    d = as_space(X).d
    worst = 0.0
    for x in range(d.shape[0]):
        # rows: y, columns: z
        s = np.maximum(np.abs(2 * d[x][None, :] - d[x][:, None]), np.abs(2 * d - d[x][:, None]))
        worst = max(worst, float(s.min(axis=1).max()))
    return worst


def discrete_length(X: SpaceLike, curve) -> float:
    d = as_space(X).d
    c = np.asarray(curve, dtype=int)
    if c.size < 2:
        return 0.0
    return float(d[c[:-1], c[1:]].sum())


@dataclass(frozen=True)
class DyadicCurve:
    curve: tuple[int, ...]
    length: float
    required: tuple[float, ...]
    achieved: tuple[float, ...]
    eps: float
    distance: float

    @property
    def surplus(self) -> tuple[float, ...]:
        return tuple(max(0.0, a - r) for a, r in zip(self.achieved, self.required))

    @property
    def length_bound(self) -> float:
        """``d(x,y) + eps`` plus the surplus each level can add to the length."""
        extra = sum(s * 2 ** l for l, s in enumerate(self.surplus))
        return self.distance + self.eps + extra

    @property
    def step_bound(self) -> float:
        m = len(self.required)
        return self.length_bound / 2**m


def dyadic_curve(X: SpaceLike, x: int, y: int, depth: int, eps: float) -> DyadicCurve:
    """Curve sampled at ``k / 2^depth`` built by repeated best midpoints.

    Level ``l`` (1-based) asks for ``eps / 2^(2l - 1)``-midpoints; the
    achieved worst defect per level is recorded next to it.
    """
    d = as_space(X).d
    curve = [int(x), int(y)]
    required, achieved = [], []
    for level in range(1, depth + 1):
        nxt = [curve[0]]
        worst = 0.0
        for a, b in zip(curve[:-1], curve[1:]):
            z, defect = best_midpoint(d, a, b)
            worst = max(worst, defect)
            nxt += [z, b]
        curve = nxt
        required.append(eps / 2 ** (2 * level - 1))
        achieved.append(worst)
    return DyadicCurve(tuple(curve), discrete_length(d, curve), tuple(required), tuple(achieved), float(eps), float(d[x, y]))
