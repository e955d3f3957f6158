"""Gromov-Hausdorff machinery for finite metric spaces."""

from .config import DEFAULT_TOL, Tolerances
from .errors import GHKitError
from .metric_core import (
    FiniteMetricSpace,
    PointedSpace,
    SubsetRef,
    closed_ball,
    cycle_space,
    diameter,
    find_isometry,
    one_point,
    open_ball,
    path_space,
    product_l2,
    rescale,
    restrict,
    segment,
    validate_space,
)

__version__ = "0.1.0"
