"""Exception hierarchy.

Every domain error carries its witness data as attributes and can render
itself as a machine-readable dict (used by the CLI for exit code 1).
"""

from __future__ import annotations

from typing import Any


class GHKitError(Exception):
    """Base class for all domain errors."""

    def __init__(self, message: str = "", **fields: Any):
        self.fields = fields
        for key, value in fields.items():
            setattr(self, key, value)
        if not message:
            inner = ", ".join(f"{k}={v!r}" for k, v in fields.items())
            message = f"{type(self).__name__}({inner})"
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self), **self.fields}


class MetricAxiomError(GHKitError):
    """A distance matrix violates one of the metric axioms."""


class InvalidMatrix(MetricAxiomError):
    pass


class NonzeroDiagonal(MetricAxiomError):
    def __init__(self, i: int, value: float):
        super().__init__(i=i, value=value)


class Asymmetric(MetricAxiomError):
    def __init__(self, i: int, j: int, value: float, transposed: float):
        super().__init__(i=i, j=j, value=value, transposed=transposed)


class NonpositiveOffDiagonal(MetricAxiomError):
    def __init__(self, i: int, j: int, value: float):
        super().__init__(i=i, j=j, value=value)


class TriangleViolation(MetricAxiomError):
    """``d[i][j] > d[i][via] + d[via][j]`` by ``slack``."""

    def __init__(self, i: int, j: int, via: int, slack: float):
        super().__init__(i=i, j=j, via=via, slack=slack)


class NonpositiveCross(MetricAxiomError):
    def __init__(self, i: int, j: int, value: float):
        super().__init__(i=i, j=j, value=value)


class EmptySubset(GHKitError):
    pass


class IndexOutOfRange(GHKitError):
    pass


class BasePointNotInSubset(GHKitError):
    pass


class NonpositiveScale(GHKitError):
    pass


class DistortionTooLarge(GHKitError):
    pass


class MiddleSpaceMismatch(GHKitError):
    pass


class DeltaTooSmall(GHKitError):
    pass


class PointedConstraintViolated(GHKitError):
    pass


class CoverageFailure(GHKitError):
    pass


class BudgetExceeded(GHKitError):
    pass


class BallNotNested(GHKitError):
    pass


class NoFeasibleSchedule(GHKitError):
    pass


class AmbiguousLimitPoint(GHKitError):
    pass


class NotBiLipschitz(GHKitError):
    pass


class NoCommonSubsequence(GHKitError):
    pass


class BadDescriptor(GHKitError):
    pass


class FileFormat(GHKitError):
    pass
