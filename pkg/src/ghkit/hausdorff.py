"""Hausdorff distance between subsets of one ambient finite space."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import BasePointNotInSubset, EmptySubset
from .metric_core import SpaceLike, SubsetRef, as_space, closed_ball


def _indices(X, A) -> np.ndarray:
    if isinstance(A, SubsetRef):
        return A.array()
    idx = np.unique(np.asarray(list(A), dtype=int))
    if idx.size == 0:
        raise EmptySubset()
    return SubsetRef(as_space(X), tuple(idx.tolist())).array()


def hausdorff_with_witness(ambient: SpaceLike, A, B) -> tuple[float, dict]:
    """Hausdorff distance plus the point realizing it and its nearest partner."""
    d = as_space(ambient).d
    a, b = _indices(ambient, A), _indices(ambient, B)
    block = d[np.ix_(a, b)]
    near_b = block.min(axis=1)
    near_a = block.min(axis=0)
    ia, ib = int(np.argmax(near_b)), int(np.argmax(near_a))
    if near_b[ia] >= near_a[ib]:
        far, partner, side = int(a[ia]), int(b[np.argmin(block[ia])]), "A"
        value = near_b[ia]
    else:
        far, partner, side = int(b[ib]), int(a[np.argmin(block[:, ib])]), "B"
        value = near_a[ib]
    return float(value), {"side": side, "point": far, "nearest": partner}


def hausdorff(ambient: SpaceLike, A, B) -> float:
    return hausdorff_with_witness(ambient, A, B)[0]


def pointed_hausdorff(ambient: SpaceLike, A, a: int, B, b: int) -> float:
    ia, ib = _indices(ambient, A), _indices(ambient, B)
    if a not in ia:
        raise BasePointNotInSubset(base=int(a), indices=ia.tolist())
    if b not in ib:
        raise BasePointNotInSubset(base=int(b), indices=ib.tolist())
    return hausdorff(ambient, ia, ib) + float(as_space(ambient).d[a, b])


# Property helpers: these return the measured violation (positive = broken)
# rather than a boolean, since finite samples only satisfy the length-space
# identities up to a mesh term.


def ball_lemma_violation(X: SpaceLike, p: int, r: float, q: int, s: float) -> float:
    """``d_H(B_r(p), B_s(q)) - (d(p,q) + |r - s|)``."""
    lhs = hausdorff(X, closed_ball(X, r, p), closed_ball(X, s, q))
    return lhs - (float(as_space(X).d[p, q]) + abs(r - s))


def ball_of_ball_violation(X: SpaceLike, p: int, r: float, s: float) -> float:
    """Hausdorff gap between ``B_r(B_s(p))`` and ``B_{r+s}(p)``."""
    S = as_space(X)
    inner = closed_ball(X, s, p).array()
    union = np.flatnonzero((S.d[inner] <= r + 1e-9).any(axis=0))
    return hausdorff(X, union, closed_ball(X, r + s, p))


def eccentricity_lower_bound(X: SpaceLike, A: Sequence[int], a: int) -> float:
    """``max_{a' in A} d(a, a')``, a lower bound on any pointed distance to a point."""
    return float(as_space(X).d[a, _indices(X, A)].max())
