"""Space files, deterministic JSON emission and CSV curves.

Space file: a JSON object ``{"n": int, "d": [[...]], "labels": [...]?,
"base": int?}`` with a row-major symmetric matrix.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .config import TAU_METRIC
from .errors import FileFormat
from .metric_core import PointedSpace, SpaceLike, as_space, validate_space

SIG_DIGITS = 12


def round_sig(v: float, digits: int = SIG_DIGITS) -> float:
    if v == 0 or not math.isfinite(v):
        return float(v)
    return float(format(v, f".{digits}g"))


def jsonable(obj):
    """Convert numpy containers and round floats to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return None
        return round_sig(v)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2)


def space_to_dict(X: SpaceLike) -> dict:
    S = as_space(X)
    out = {"n": S.n, "d": S.d.tolist()}
    if S.labels is not None:
        out["labels"] = list(S.labels)
    if isinstance(X, PointedSpace):
        out["base"] = X.base
    return out


def write_space(X: SpaceLike, path) -> None:
    Path(path).write_text(dumps(space_to_dict(X)) + "\n")


def space_from_dict(obj, path: str = "<memory>", tol: float = TAU_METRIC) -> PointedSpace:
    if not isinstance(obj, dict):
        raise FileFormat(path=str(path), detail="top level must be an object")
    if "d" not in obj:
        raise FileFormat(path=str(path), detail="missing key 'd'")
    d = obj["d"]
    if not isinstance(d, list) or not all(isinstance(row, list) for row in d):
        raise FileFormat(path=str(path), detail="'d' must be a list of rows")
    n = obj.get("n", len(d))
    if not isinstance(n, int) or n != len(d) or any(len(row) != n for row in d):
        raise FileFormat(path=str(path), detail=f"'n' = {n!r} does not match the matrix shape")
    labels = obj.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise FileFormat(path=str(path), detail="'labels' must list one name per point")
    base = obj.get("base", 0)
    if not isinstance(base, int) or not 0 <= base < max(n, 1):
        raise FileFormat(path=str(path), detail=f"'base' = {base!r} is not a point index")
    try:
        arr = np.array(d, dtype=float)
    except (TypeError, ValueError):
        raise FileFormat(path=str(path), detail="matrix entries must be numbers") from None
    S = validate_space(arr, tol, labels)
    return PointedSpace(S, base)


def read_space(path, tol: float = TAU_METRIC) -> PointedSpace:
    p = Path(path)
    try:
        obj = json.loads(p.read_text())
    except FileNotFoundError:
        raise FileFormat(path=str(path), detail="file not found") from None
    except json.JSONDecodeError as exc:
        raise FileFormat(path=str(path), detail=f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
    return space_from_dict(obj, str(path), tol)


def read_space_dir(path, tol: float = TAU_METRIC) -> list[PointedSpace]:
    p = Path(path)
    if not p.is_dir():
        raise FileFormat(path=str(path), detail="not a directory")
    files = sorted(f for f in p.iterdir() if f.suffix == ".json")
    if not files:
        raise FileFormat(path=str(path), detail="no .json space files")
    return [read_space(f, tol) for f in files]


CURVE_HEADER = ["index", "radius", "lo", "hi", "mode"]


def curve_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for row in rows:
        w.writerow([row["index"], format(row["radius"], ".12g"), format(row["lo"], ".12g"), format(row["hi"], ".12g"), row["mode"]])
    return buf.getvalue()


def read_table_csv(path):
    """Read an ``(r, i) -> eps`` table.

    Accepts the harness curve format (``index,radius,...,hi``) or any CSV with
    ``index``, ``radius`` and ``eps`` columns.  Returns ``(table, radii, indices)``.
    """
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except FileNotFoundError:
        raise FileFormat(path=str(path), detail="file not found") from None
    if not rows:
        raise FileFormat(path=str(path), detail="empty table")
    col = "eps" if "eps" in rows[0] else "hi"
    if not {"index", "radius", col} <= set(rows[0]):
        raise FileFormat(path=str(path), detail="need columns index, radius and eps (or hi)")
    try:
        entries = [(float(r["radius"]), int(r["index"]), float(r[col])) for r in rows]
    except ValueError as exc:
        raise FileFormat(path=str(path), detail=str(exc)) from None
    radii = sorted({e[0] for e in entries})
    indices = sorted({e[1] for e in entries})
    table = np.full((len(radii), len(indices)), np.nan)
    for r, i, v in entries:
        table[radii.index(r), indices.index(i)] = v
    if np.isnan(table).any():
        raise FileFormat(path=str(path), detail="table has missing (radius, index) cells")
    return table, radii, indices


def read_sequence_csv(path) -> list[float]:
    """One number per row; a non-numeric first row is treated as a header.
    With several columns the last one is used."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except FileNotFoundError:
        raise FileFormat(path=str(path), detail="file not found") from None
    out = []
    for k, row in enumerate(rows):
        try:
            out.append(float(row[-1]))
        except ValueError:
            if k == 0:
                continue
            raise FileFormat(path=str(path), detail=f"row {k + 1} is not a number") from None
    if not out:
        raise FileFormat(path=str(path), detail="no values")
    return out
