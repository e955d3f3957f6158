"""Generators of pointed finite spaces indexed by ``i = 1, 2, ...``.

Every generated point carries a label that doubles as an *anchor*: a model
coordinate used to pair points of different members of a sequence (and of
the reference sample) without any search.  Lattice labels are coordinates on
the line, cycle labels are arc positions, and the index-based generators
label points by their index in the underlying fixed space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadDescriptor
from .metric_core import FiniteMetricSpace, PointedSpace, as_space, product_l2, rescale


def _fmt(v: float) -> str:
    return format(float(v), ".12g")


def lattice_space(mesh: float, R: float) -> PointedSpace:
    """``mesh * Z`` intersected with ``[-R, R]``, based at 0."""
    if not mesh > 0 or R < 0:
        raise BadDescriptor(f"lattice needs mesh > 0 and R >= 0, got mesh={mesh}, R={R}")
    k = int(np.floor(R / mesh + 1e-9))
    steps = np.arange(-k, k + 1)
    x = steps * mesh
    # exact rationals when mesh = 1/q keep midpoints on the grid
    q = 1.0 / mesh
    if abs(q - round(q)) < 1e-9:
        x = steps / round(q)
    d = np.abs(x[:, None] - x[None, :])
    return PointedSpace(FiniteMetricSpace.trusted(d, [_fmt(v) for v in x]), k)


def cycle_pointed(n: int, scale: float = 1.0) -> PointedSpace:
    k = np.arange(n)
    diff = np.abs(k[:, None] - k[None, :])
    d = scale * np.minimum(diff, n - diff)
    return PointedSpace(FiniteMetricSpace.trusted(d, [_fmt(v * scale) for v in k]), 0)


def _index_labels(n: int) -> list[str]:
    return [str(i) for i in range(n)]


@dataclass(frozen=True, eq=False)
class SpaceSequence:
    """A pointed-space generator.

    ``kind`` is one of ``scaled_lattice``, ``cycle``, ``rescaled``,
    ``constant``, ``product_shrink``; ``params`` holds the fixed data and the
    index functions.  ``base_override`` (set by rebasing) replaces the base
    point of member ``i``.
    """

    kind: str
    params: dict
    base_override: Callable[[int], int] | None = None
    description: str = ""

    def __call__(self, i: int) -> PointedSpace:
        P = self._raw(i)
        if self.base_override is not None:
            return PointedSpace(P.space, self.base_override(i))
        return P

    def _raw(self, i: int) -> PointedSpace:
        k, p = self.kind, self.params
        if k == "scaled_lattice":
            return lattice_space(p["mesh"](i), p["R"])
        if k == "cycle":
            return cycle_pointed(int(p["n"](i)), p["scale"](i))
        if k in ("rescaled", "constant"):
            X = p["space"]
            alpha = p["alpha"](i) if k == "rescaled" else 1.0
            S = as_space(X)
            labels = S.labels or _index_labels(S.n)
            return PointedSpace(FiniteMetricSpace.trusted(alpha * S.d, labels), X.base)
        if k == "product_shrink":
            X, Y = p["X"], p["Y"]
            s = p["shrink"](i)
            P = product_l2(X, rescale(as_space(Y), s))
            m = Y.n
            labels = [f"{a},{b}" for a in range(X.n) for b in range(m)]
            return PointedSpace(FiniteMetricSpace.trusted(P.d, labels), X.base * m + Y.base)
        raise BadDescriptor(f"unknown generator {k!r}")

    def rebased(self, q: Callable[[int], int]) -> "SpaceSequence":
        return SpaceSequence(self.kind, self.params, q, self.description + " (rebased)")

    # -- anchors ----------------------------------------------------------

    def anchor_cost(self, labels_a, labels_b) -> np.ndarray:
        """Model distance between anchors of two point sets of this family."""
        k = self.kind
        if k == "scaled_lattice":
            a, b = _floats(labels_a), _floats(labels_b)
            return np.abs(a[:, None] - b[None, :])
        if k == "cycle":
            a, b = _floats(labels_a), _floats(labels_b)
            C = self.params.get("circumference")
            diff = np.abs(a[:, None] - b[None, :])
            return diff if C is None else np.minimum(diff % C, C - diff % C)
        if k in ("rescaled", "constant"):
            X = as_space(self.params["space"])
            ia, ib = _ints(labels_a), _ints(labels_b)
            return X.d[np.ix_(ia, ib)]
        if k == "product_shrink":
            X = as_space(self.params["X"])
            ia = _ints([s.split(",")[0] for s in labels_a])
            ib = _ints([s.split(",")[0] for s in labels_b])
            return X.d[np.ix_(ia, ib)]
        raise BadDescriptor(f"no anchors for {k!r}")


def _floats(labels) -> np.ndarray:
    try:
        return np.array([float(s) for s in labels])
    except (TypeError, ValueError) as exc:
        raise BadDescriptor(f"labels are not coordinates: {exc}") from None


def _ints(labels) -> np.ndarray:
    try:
        return np.array([int(s) for s in labels])
    except (TypeError, ValueError) as exc:
        raise BadDescriptor(f"labels are not point indices: {exc}") from None


def _const(v):
    return lambda i: v


def scaled_lattice(R: float, mesh: Callable[[int], float] = lambda i: 1.0 / i) -> SpaceSequence:
    return SpaceSequence("scaled_lattice", {"R": float(R), "mesh": mesh}, description=f"lattice on [-{R}, {R}]")


def cycle(n: Callable[[int], int], scale: Callable[[int], float], circumference: float | None = None) -> SpaceSequence:
    return SpaceSequence("cycle", {"n": n, "scale": scale, "circumference": circumference}, description="cycle")


def rescaled(space, alpha: Callable[[int], float]) -> SpaceSequence:
    X = space if isinstance(space, PointedSpace) else PointedSpace(space, 0)
    return SpaceSequence("rescaled", {"space": X, "alpha": alpha}, description="rescaled")


def constant(space) -> SpaceSequence:
    X = space if isinstance(space, PointedSpace) else PointedSpace(space, 0)
    return SpaceSequence("constant", {"space": X}, description="constant")


def product_shrink(X, Y, shrink: Callable[[int], float]) -> SpaceSequence:
    X = X if isinstance(X, PointedSpace) else PointedSpace(X, 0)
    Y = Y if isinstance(Y, PointedSpace) else PointedSpace(Y, 0)
    return SpaceSequence("product_shrink", {"X": X, "Y": Y, "shrink": shrink}, description="product with shrinking factor")


@dataclass(frozen=True, eq=False)
class Reference:
    """Finite sample of a claimed limit, with its declared mesh."""

    space: PointedSpace
    mesh: float = 0.0
    label: str = ""

    def rebased(self, base: int) -> "Reference":
        return Reference(PointedSpace(self.space.space, base), self.mesh, self.label)


def lattice_reference(R: float, mesh: float) -> Reference:
    return Reference(lattice_space(mesh, R), mesh, f"lattice mesh {mesh:g}")


def labels_of(P: PointedSpace) -> list[str]:
    S = P.space
    return list(S.labels) if S.labels is not None else _index_labels(S.n)


# -------------------------------------------------------- descriptors

_FUNCS = {
    "inv": lambda c: (lambda i: c / i),
    "const": lambda c: (lambda i: c),
    "alt": lambda c: (lambda i: 1.0 + c * (-1) ** i / i),
}


def parse_index_fn(text: str) -> Callable[[int], float]:
    """``"1/i"``, ``"c/i"``, ``"const:c"``, ``"alt:c"`` (``1 + c(-1)^i/i``),
    or a plain number."""
    t = text.replace(" ", "")
    try:
        if t.endswith("/i"):
            return _FUNCS["inv"](float(t[:-2]))
        if ":" in t:
            name, val = t.split(":", 1)
            return _FUNCS[name](float(val))
        return _FUNCS["const"](float(t))
    except (KeyError, ValueError):
        raise BadDescriptor(f"cannot parse index function {text!r}") from None


def generate(descriptor: dict, index: int | None = None) -> PointedSpace:
    """Materialize one member of a generator described by a plain dict.

    ``index=None`` evaluates the fixed parameters directly (e.g. a lattice
    with explicit ``mesh``).
    """
    kind = descriptor.get("seq")
    i = 1 if index is None else int(index)
    try:
        if kind == "lattice":
            mesh = descriptor.get("mesh", "1/i")
            fn = parse_index_fn(str(mesh))
            return scaled_lattice(float(descriptor["R"]), fn)(i)
        if kind == "cycle":
            return cycle(parse_index_fn(str(descriptor["n"])), parse_index_fn(str(descriptor.get("scale", 1))))(i)
        if kind == "rescaled":
            return rescaled(descriptor["space"], parse_index_fn(str(descriptor["alpha"])))(i)
        if kind == "constant":
            return constant(descriptor["space"])(i)
        if kind == "product":
            return product_shrink(descriptor["X"], descriptor["Y"], parse_index_fn(str(descriptor["shrink"])))(i)
    except KeyError as exc:
        raise BadDescriptor(f"generator {kind!r} is missing parameter {exc}") from None
    raise BadDescriptor(f"unknown generator {kind!r}")
