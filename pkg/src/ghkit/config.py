"""Tolerance family and runtime defaults.

All comparisons in the package go through one of three tolerances:

* ``metric`` -- validation of metric axioms and set-membership tests,
* ``iso`` -- distance agreement when searching isometries,
* ``solver`` -- bisection width of the exact GH solver.

Environment variables ``GHKIT_TOL`` (overrides ``metric`` and ``iso``) and
``GHKIT_BUDGET`` (enumeration budget for pair search) are read by
:func:`defaults_from_env`; explicit arguments always win.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

TAU_METRIC = 1e-9
TAU_ISO = 1e-9
TAU_SOLVER = 1e-7

# |Y|^|X| * |X|^|Y| limit for exhaustive pair enumeration
PAIR_BUDGET = 1e8
PAIR_MAX_POINTS = 6
GH_MAX_POINTS = 5


@dataclass(frozen=True)
class Tolerances:
    metric: float = TAU_METRIC
    iso: float = TAU_ISO
    solver: float = TAU_SOLVER

    def with_(self, **kw) -> "Tolerances":
        return replace(self, **kw)


DEFAULT_TOL = Tolerances()


def defaults_from_env(environ=None) -> tuple[Tolerances, float]:
    env = os.environ if environ is None else environ
    tol = DEFAULT_TOL
    if env.get("GHKIT_TOL"):
        t = float(env["GHKIT_TOL"])
        tol = tol.with_(metric=t, iso=t)
    budget = float(env["GHKIT_BUDGET"]) if env.get("GHKIT_BUDGET") else PAIR_BUDGET
    return tol, budget
