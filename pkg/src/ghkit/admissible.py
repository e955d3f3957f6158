"""Admissible metrics on disjoint unions and the explicit constructions of them.

An admissible metric on ``X ⨿ Y`` is stored as its cross block only; the
diagonal blocks are ``d_X`` and ``d_Y`` by definition.  Joint indices put
``X`` first: point ``y`` of ``Y`` has joint index ``|X| + y``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TAU_METRIC
from .errors import (
    DeltaTooSmall,
    DistortionTooLarge,
    MiddleSpaceMismatch,
    NonpositiveCross,
    TriangleViolation,
)
from .metric_core import (
    FiniteMetricSpace,
    SpaceLike,
    as_space,
    diameter,
    first_triangle_violation,
    product_l2,
)


@dataclass(frozen=True, eq=False)
class AdmissibleMetric:
    left: FiniteMetricSpace
    right: FiniteMetricSpace
    cross: np.ndarray

    def __post_init__(self):
        c = np.array(self.cross, dtype=float).reshape(self.left.n, self.right.n)
        c.setflags(write=False)
        object.__setattr__(self, "cross", c)

    def joint(self) -> np.ndarray:
        return assemble(self.left.d, self.right.d, self.cross)

    def joint_space(self) -> FiniteMetricSpace:
        return FiniteMetricSpace.trusted(self.joint())


def assemble(dX: np.ndarray, dY: np.ndarray, cross: np.ndarray) -> np.ndarray:
    return np.block([[dX, cross], [cross.T, dY]])


def validate_admissible(X: SpaceLike, Y: SpaceLike, cross, tol: float = TAU_METRIC) -> AdmissibleMetric:
    X, Y = as_space(X), as_space(Y)
    c = np.asarray(cross, dtype=float)
    if c.shape != (X.n, Y.n):
        raise ValueError(f"cross block has shape {c.shape}, expected {(X.n, Y.n)}")
    bad = np.argwhere(c <= 0)
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise NonpositiveCross(i, j, float(c[i, j]))
    tv = first_triangle_violation(assemble(X.d, Y.d, c), tol)
    if tv is not None:
        raise TriangleViolation(*tv)
    return AdmissibleMetric(X, Y, c)


def hausdorff_under(adm: AdmissibleMetric, pointed: tuple[int, int] | None = None) -> float:
    """Hausdorff distance of the two sides in the joint metric, plus ``d(p, q)``
    when ``pointed = (p, q)``."""
    c = adm.cross
    value = max(c.min(axis=1).max(), c.min(axis=0).max())
    if pointed is not None:
        value += c[pointed[0], pointed[1]]
    return float(value)


def glue_from_pair(X: SpaceLike, Y: SpaceLike, f, eps: float, tol: float = TAU_METRIC) -> AdmissibleMetric:
    """``d(x, y) = eps/2 + min_x' (d_X(x, x') + d_Y(f(x'), y))``.

    The triangle inequality for this formula needs ``dis(f) < eps``.
    """
    from .approximation import distortion

    X, Y = as_space(X), as_space(Y)
    f = np.asarray(f, dtype=int)
    dis = distortion(X, Y, f)
    if not dis < eps:
        raise DistortionTooLarge(distortion=dis, eps=eps)
    # (x, x', y) -> d_X(x, x') + d_Y(f(x'), y), minimized over x'
    cross = eps / 2 + (X.d[:, :, None] + Y.d[f][None, :, :]).min(axis=1)
    return validate_admissible(X, Y, cross, tol)


def glue_three(X, Y, Z, dXY: AdmissibleMetric, dYZ: AdmissibleMetric, tol: float = TAU_METRIC):
    """Glue along the shared middle space ``Y``.

    Returns ``(dXZ, joint)`` where ``joint`` is the metric on ``X ⨿ Y ⨿ Z``
    (order X, Y, Z) whose X-Z block is ``min_y dXY(x, y) + dYZ(y, z)``.
    """
    X, Y, Z = as_space(X), as_space(Y), as_space(Z)
    if not (dXY.right.same_as(Y) and dYZ.left.same_as(Y)):
        raise MiddleSpaceMismatch()
    if not (dXY.left.same_as(X) and dYZ.right.same_as(Z)):
        raise MiddleSpaceMismatch(detail="outer spaces do not match the gluings")
    cXZ = (dXY.cross[:, :, None] + dYZ.cross[None, :, :]).min(axis=1)
    dXZ = validate_admissible(X, Z, cXZ, tol)
    joint = np.block([
        [X.d, dXY.cross, cXZ],
        [dXY.cross.T, Y.d, dYZ.cross],
        [cXZ.T, dYZ.cross.T, Z.d],
    ])
    tv = first_triangle_violation(joint, tol)
    if tv is not None:
        raise TriangleViolation(*tv)
    return dXZ, FiniteMetricSpace.trusted(joint)


def one_point_extension(X: SpaceLike, delta: float, tol: float = TAU_METRIC) -> AdmissibleMetric:
    X = as_space(X)
    if delta < diameter(X) / 2 - tol or delta <= 0:
        raise DeltaTooSmall(delta=delta, required=diameter(X) / 2)
    return validate_admissible(X, FiniteMetricSpace.trusted([[0.0]]), np.full((X.n, 1), float(delta)), tol)


def product_embedding_metric(X: SpaceLike, Y: SpaceLike, y0: int, delta: float, tol: float = TAU_METRIC) -> AdmissibleMetric:
    """Embed ``X`` next to ``X x Y`` (l2 product) at height ``delta``.

    ``d(x', (x, y)) = sqrt(d_X(x, x')^2 + d_Y(y, y0)^2 + delta^2)``; product
    point ``(x, y)`` has index ``x * |Y| + y``.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    X, Y = as_space(X), as_space(Y)
    P = product_l2(X, Y)
    cross = np.sqrt(X.d[:, :, None] ** 2 + Y.d[y0][None, None, :] ** 2 + delta**2)
    return validate_admissible(X, P, cross.reshape(X.n, P.n), tol)
