"""Finite metric spaces and elementary constructions on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .config import TAU_ISO, TAU_METRIC
from .errors import (
    Asymmetric,
    EmptySubset,
    IndexOutOfRange,
    InvalidMatrix,
    NonpositiveOffDiagonal,
    NonpositiveScale,
    NonzeroDiagonal,
    TriangleViolation,
)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A point set ``{0, ..., n-1}`` with a validated distance matrix.

    Construct through :func:`validate_space`.  :meth:`trusted` skips the
    ``O(n^3)`` triangle check and is meant for generators whose output is a
    metric by construction.
    """

    d: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "d", _frozen(self.d))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @classmethod
    def trusted(cls, d, labels=None) -> "FiniteMetricSpace":
        return cls(d, labels)

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n}, diam={diameter(self):.6g})"

    def same_as(self, other: "FiniteMetricSpace") -> bool:
        return self.n == other.n and bool(np.array_equal(self.d, other.d))


@dataclass(frozen=True, eq=False)
class PointedSpace:
    space: FiniteMetricSpace
    base: int = 0

    def __post_init__(self):
        if not 0 <= int(self.base) < self.space.n:
            raise IndexOutOfRange(index=int(self.base), n=self.space.n)
        object.__setattr__(self, "base", int(self.base))

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def d(self) -> np.ndarray:
        return self.space.d


@dataclass(frozen=True, eq=False)
class SubsetRef:
    space: FiniteMetricSpace
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted({int(i) for i in self.indices}))
        if not idx:
            raise EmptySubset()
        if idx[0] < 0 or idx[-1] >= self.space.n:
            raise IndexOutOfRange(indices=list(idx), n=self.space.n)
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, i) -> bool:
        return int(i) in self.indices

    def array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=int)


SpaceLike = Union[FiniteMetricSpace, PointedSpace]


def as_space(X: SpaceLike) -> FiniteMetricSpace:
    if isinstance(X, PointedSpace):
        return X.space
    if isinstance(X, np.ndarray):
        return FiniteMetricSpace.trusted(X)
    return X


def subset(X: SpaceLike, indices: Iterable[int]) -> SubsetRef:
    return SubsetRef(as_space(X), tuple(indices))


# --------------------------------------------------------------- validation


def first_triangle_violation(d: np.ndarray, tol: float = TAU_METRIC):
    """Return ``(i, j, via, slack)`` for the lexicographically first pair
    ``i < j`` with ``d[i,j] > d[i,via] + d[via,j] + tol``, or ``None``.

    ``via`` is the intermediate point with the largest slack (lowest index on
    ties).
    """
    n = d.shape[0]
    best = np.full((n, n), np.inf)
    for k in range(n):
        np.minimum(best, d[:, k, None] + d[None, k, :], out=best)
    bad = np.triu(d - best > tol, 1)
    if not bad.any():
        return None
    i, j = (int(v) for v in np.argwhere(bad)[0])
    slack = d[i, j] - (d[i, :] + d[:, j])
    via = int(np.argmax(slack))
    return i, j, via, float(slack[via])


def validate_space(matrix, tol: float = TAU_METRIC, labels=None) -> FiniteMetricSpace:
    """Check the metric axioms and return a :class:`FiniteMetricSpace`.

    The checks run in a fixed order (diagonal, symmetry, positivity,
    triangle inequality) and the first failure is raised with its witness.
    """
    try:
        d = np.array(matrix, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"not a numeric matrix: {exc}") from None
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
        raise InvalidMatrix(f"expected a non-empty square matrix, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise InvalidMatrix("matrix has non-finite entries")
    n = d.shape[0]
    diag = np.abs(np.diag(d)) > tol
    if diag.any():
        i = int(np.argmax(diag))
        raise NonzeroDiagonal(i, float(d[i, i]))
    asym = np.triu(np.abs(d - d.T) > tol, 1)
    if asym.any():
        i, j = (int(v) for v in np.argwhere(asym)[0])
        raise Asymmetric(i, j, float(d[i, j]), float(d[j, i]))
    off = ~np.eye(n, dtype=bool) & (d <= 0)
    if off.any():
        i, j = (int(v) for v in np.argwhere(np.triu(off | off.T, 1))[0])
        raise NonpositiveOffDiagonal(i, j, float(d[i, j]))
    # symmetrize exactly so downstream code can rely on d == d.T
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    tv = first_triangle_violation(d, tol)
    if tv is not None:
        raise TriangleViolation(*tv)
    if labels is not None and len(labels) != n:
        raise InvalidMatrix(f"{len(labels)} labels for {n} points")
    return FiniteMetricSpace(d, labels)


# ------------------------------------------------------------ basic queries


def diameter(X: SpaceLike) -> float:
    d = as_space(X).d
    return float(d.max()) if d.size else 0.0


def eccentricity(X: SpaceLike, x: int | None = None) -> float:
    if x is None:
        x = X.base if isinstance(X, PointedSpace) else 0
    return float(as_space(X).d[x].max())


def _center(X: SpaceLike, center):
    if center is None:
        if not isinstance(X, PointedSpace):
            raise TypeError("center required for an unpointed space")
        center = X.base
    return as_space(X), int(center)


def closed_ball(X: SpaceLike, r: float, center: int | None = None, tol: float = TAU_METRIC) -> SubsetRef:
    """Indices ``q`` with ``d(center, q) <= r`` (up to ``tol``)."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    S, c = _center(X, center)
    idx = np.flatnonzero(S.d[c] <= r + tol)
    return SubsetRef(S, tuple(idx.tolist()))


def open_ball(X: SpaceLike, r: float, center: int | None = None, tol: float = TAU_METRIC) -> SubsetRef:
    """Indices ``q`` with ``d(center, q) < r``; the center is always included."""
    S, c = _center(X, center)
    idx = set(np.flatnonzero(S.d[c] < r - tol).tolist()) | {c}
    return SubsetRef(S, tuple(idx))


def rescale(X: SpaceLike, lam: float):
    if not lam > 0:
        raise NonpositiveScale(scale=lam)
    S = FiniteMetricSpace.trusted(lam * as_space(X).d, as_space(X).labels)
    return PointedSpace(S, X.base) if isinstance(X, PointedSpace) else S


def restrict(X: SpaceLike, S: SubsetRef | Sequence[int]) -> FiniteMetricSpace:
    space = as_space(X)
    if not isinstance(S, SubsetRef):
        S = SubsetRef(space, tuple(S))
    idx = S.array()
    labels = None if space.labels is None else [space.labels[i] for i in idx]
    return FiniteMetricSpace.trusted(space.d[np.ix_(idx, idx)], labels)


def restrict_pointed(X: PointedSpace, S: SubsetRef | Sequence[int]) -> PointedSpace:
    """Restriction that keeps the base point (which must lie in ``S``)."""
    from .errors import BasePointNotInSubset

    if not isinstance(S, SubsetRef):
        S = SubsetRef(X.space, tuple(S))
    if X.base not in S:
        raise BasePointNotInSubset(base=X.base, indices=list(S.indices))
    return PointedSpace(restrict(X, S), S.indices.index(X.base))


def closed_ball_space(X: PointedSpace, r: float, tol: float = TAU_METRIC) -> tuple[PointedSpace, SubsetRef]:
    ball = closed_ball(X, r, tol=tol)
    return restrict_pointed(X, ball), ball


def product_l2(X: SpaceLike, Y: SpaceLike) -> FiniteMetricSpace:
    """Point ``(x, y)`` gets index ``x * |Y| + y``."""
    dX, dY = as_space(X).d, as_space(Y).d
    d = np.sqrt(dX[:, None, :, None] ** 2 + dY[None, :, None, :] ** 2)
    n = dX.shape[0] * dY.shape[0]
    return FiniteMetricSpace.trusted(d.reshape(n, n))


def one_point() -> FiniteMetricSpace:
    return FiniteMetricSpace.trusted([[0.0]])


def segment(length: float = 1.0) -> FiniteMetricSpace:
    """Two points at distance ``length`` (``Seg1``, ``Seg2`` in the docs)."""
    return validate_space([[0.0, length], [length, 0.0]])


def path_space(n: int, step: float = 1.0) -> FiniteMetricSpace:
    x = np.arange(n) * step
    return FiniteMetricSpace.trusted(np.abs(x[:, None] - x[None, :]))


def cycle_space(n: int, scale: float = 1.0) -> FiniteMetricSpace:
    """``C_n``: ``n`` vertices on a cycle with edge length ``scale``."""
    k = np.arange(n)
    diff = np.abs(k[:, None] - k[None, :])
    return FiniteMetricSpace.trusted(scale * np.minimum(diff, n - diff))


# ---------------------------------------------------------------- isometry


def find_isometry(X: SpaceLike, Y: SpaceLike, tol: float = TAU_ISO) -> list[int] | None:
    """Distance-preserving bijection ``X -> Y`` as an image list, or ``None``.

    Pointed inputs force ``phi(base_X) = base_Y``.  Backtracking assigns
    ``x = 0, 1, ...`` in order and tries images in increasing order, so the
    first witness found is the lexicographically smallest one.  Candidate
    images are pre-filtered by sorted distance profiles.
    """
    dX, dY = as_space(X).d, as_space(Y).d
    n = dX.shape[0]
    if dY.shape[0] != n:
        return None
    pX, pY = np.sort(dX, axis=1), np.sort(dY, axis=1)
    ok = np.all(np.abs(pX[:, None, :] - pY[None, :, :]) <= tol, axis=2)
    if isinstance(X, PointedSpace) and isinstance(Y, PointedSpace):
        fixed = np.zeros_like(ok)
        fixed[X.base, Y.base] = ok[X.base, Y.base]
        ok[X.base, :] = False
        ok[:, Y.base] = False
        ok |= fixed
    cands = [np.flatnonzero(ok[x]).tolist() for x in range(n)]
    if any(not c for c in cands):
        return None
    image = [-1] * n
    used = [False] * n

    def extend(x: int) -> bool:
        if x == n:
            return True
        row = dX[x, :x]
        for y in cands[x]:
            if used[y]:
                continue
            if x and np.any(np.abs(dY[y, image[:x]] - row) > tol):
                continue
            image[x] = y
            used[y] = True
            if extend(x + 1):
                return True
            used[y] = False
        return False

    return list(image) if extend(0) else None


def is_isometric(X: SpaceLike, Y: SpaceLike, tol: float = TAU_ISO) -> bool:
    return find_isometry(X, Y, tol) is not None
