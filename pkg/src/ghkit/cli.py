"""``ghkit`` command-line front end.

Every subcommand prints one JSON document to stdout.  Exit status is 0 on
success, 1 on a domain error (the JSON is then an error object), and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as gio
from .admissible import glue_from_pair, hausdorff_under
from .approximation import MapPair, best_pair, restrict_pair
from .config import defaults_from_env
from .convergence import converge, select_radius_schedule
from .errors import GHKitError
from .gh_exact import gh_bounds, gh_exact, gh_pointed_exact
from .hausdorff import hausdorff_with_witness, pointed_hausdorff
from .length import dyadic_curve
from .metric_core import diameter, find_isometry
from .sequences import Reference, constant, cycle, generate, parse_index_fn, product_shrink, rescaled, scaled_lattice
from .sublimits import accumulation_points, sublimit_space


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _range(text: str) -> list[int]:
    """``"1..32"`` (inclusive) or a comma list."""
    if ".." in text:
        a, b = text.split("..", 1)
        try:
            return list(range(int(a), int(b) + 1))
        except ValueError:
            raise UsageError(f"bad index range {text!r}") from None
    return _ints(text)


def _map(text: str, n: int) -> list[int]:
    """``"0:1,1:0"`` or a plain image list ``"1,0"``."""
    if ":" in text:
        out = [-1] * n
        for part in text.split(","):
            try:
                a, b = part.split(":")
                out[int(a)] = int(b)
            except (ValueError, IndexError):
                raise UsageError(f"bad map entry {part!r}") from None
        if -1 in out:
            raise UsageError(f"map {text!r} does not cover all {n} points")
        return out
    m = _ints(text)
    if len(m) != n:
        raise UsageError(f"map {text!r} has {len(m)} entries, expected {n}")
    return m


# ------------------------------------------------------------ commands


def cmd_validate(a, ctx):
    X = gio.read_space(a.space, ctx["tol"].metric)
    return {"valid": True, "n": X.n, "base": X.base, "diameter": diameter(X)}


def cmd_hausdorff(a, ctx):
    X = gio.read_space(a.space, ctx["tol"].metric)
    A, B = _ints(a.a), _ints(a.b)
    value, wit = hausdorff_with_witness(X, A, B)
    out = {"value": value, "witnesses": wit}
    if a.base_a is not None or a.base_b is not None:
        if a.base_a is None or a.base_b is None:
            raise UsageError("--base-a and --base-b go together")
        out["pointed"] = pointed_hausdorff(X, A, a.base_a, B, a.base_b)
    return out


def cmd_gh(a, ctx):
    tol = ctx["tol"]
    X, Y = gio.read_space(a.X, tol.metric), gio.read_space(a.Y, tol.metric)
    interval = list(gh_bounds(X, Y, pointed=a.pointed, budget=ctx["budget"]))
    if a.bounds_only:
        return {"interval": interval, "pointed": a.pointed}
    res = (gh_pointed_exact if a.pointed else gh_exact)(X, Y, tol_solver=tol.solver, budget=ctx["budget"])
    out = {"value": res.value, "interval": interval, "pointed": a.pointed, "assignment": {"a": res.a, "b": res.b}}
    if a.witness_out:
        joint = res.witness.joint_space()
        gio.write_space(joint, a.witness_out)
        out["witness_file"] = str(a.witness_out)
    return out


def cmd_approx(a, ctx):
    X, Y = gio.read_space(a.X, ctx["tol"].metric), gio.read_space(a.Y, ctx["tol"].metric)
    pair, eps, rep = best_pair(X, Y, pointed=a.pointed, budget=ctx["budget"])
    lo = max(abs(diameter(X) - diameter(Y)) / 2, eps / 2)
    return {"f": pair.f, "g": pair.g, "defect": eps, "report": rep.__dict__, "sandwich": [lo, 2 * eps]}


def cmd_glue(a, ctx):
    X, Y = gio.read_space(a.X, ctx["tol"].metric), gio.read_space(a.Y, ctx["tol"].metric)
    f = _map(a.map, X.n)
    adm = glue_from_pair(X, Y, f, a.eps, ctx["tol"].metric)
    out = {"cross": adm.cross, "hausdorff": hausdorff_under(adm), "pointed": None}
    if a.pointed:
        out["pointed"] = hausdorff_under(adm, (X.base, Y.base))
    return out


def cmd_restrict(a, ctx):
    X, Y = gio.read_space(a.X, ctx["tol"].metric), gio.read_space(a.Y, ctx["tol"].metric)
    pair = MapPair(_map(a.f, X.n), _map(a.g, Y.n))
    res = restrict_pair(X, Y, pair, a.R, a.r, a.p_alt, a.q_alt, a.eps)
    return {
        "x_ball": res.x_ball, "y_ball": res.y_ball, "f": res.f, "g": res.g,
        "eps": res.eps, "delta": res.delta, "defect": res.report.defect,
        "bound": res.bound, "bound_derived": res.bound_derived, "surplus": res.surplus,
    }


def cmd_isometry(a, ctx):
    X, Y = gio.read_space(a.X, ctx["tol"].metric), gio.read_space(a.Y, ctx["tol"].metric)
    if not a.pointed:
        X, Y = X.space, Y.space
    return {"isometry": find_isometry(X, Y, ctx["tol"].iso)}


def cmd_length(a, ctx):
    X = gio.read_space(a.space, ctx["tol"].metric)
    for v in (a.from_, a.to):
        if not 0 <= v < X.n:
            raise UsageError(f"point {v} outside the space")
    c = dyadic_curve(X, a.from_, a.to, a.depth, a.eps)
    return {"curve": c.curve, "length": c.length, "distance": c.distance, "required": c.required,
            "achieved": c.achieved, "surplus": c.surplus, "length_bound": c.length_bound}


def _sequence_from_args(a, ctx):
    kind = a.seq
    if kind == "lattice":
        if a.R is None:
            raise UsageError("--R is required for lattice sequences")
        return scaled_lattice(a.R, parse_index_fn(a.mesh or "1/i"))
    if kind == "cycle":
        return cycle(parse_index_fn(a.n or "8"), parse_index_fn(a.scale or "1"), a.circumference)
    if kind in ("rescaled", "constant"):
        if not a.space:
            raise UsageError(f"--space is required for {kind} sequences")
        X = gio.read_space(a.space, ctx["tol"].metric)
        return rescaled(X, parse_index_fn(a.alpha or "1")) if kind == "rescaled" else constant(X)
    if kind == "product":
        if not (a.X and a.Y):
            raise UsageError("--X and --Y are required for product sequences")
        X, Y = gio.read_space(a.X, ctx["tol"].metric), gio.read_space(a.Y, ctx["tol"].metric)
        return product_shrink(X, Y, parse_index_fn(a.shrink or "1/i"))
    raise UsageError(f"unknown sequence {kind!r}")


def cmd_converge(a, ctx):
    seq = _sequence_from_args(a, ctx)
    R = gio.read_space(a.reference, ctx["tol"].metric)
    h = a.h_ref
    if h is None:
        off = R.d[~np.eye(R.n, dtype=bool)]
        h = float(off.min()) if off.size else 0.0
    rep = converge(seq, Reference(R, h), _floats(a.radii), _range(a.indices), n_max=a.n_max)
    if a.csv:
        Path(a.csv).write_text(gio.curve_csv(rep.rows()))
    return rep.to_dict()


def cmd_schedule(a, ctx):
    table, radii, indices = gio.read_table_csv(a.table)
    s = select_radius_schedule(table, radii, indices, a.h)
    return s.to_dict()


def cmd_sublimit(a, ctx):
    spaces = gio.read_space_dir(a.spaces, ctx["tol"].metric)
    subseq = _ints(a.subseq) if a.subseq else list(range(len(spaces)))
    if any(not 0 <= i < len(spaces) for i in subseq):
        raise UsageError("subsequence index outside the space directory")
    res = sublimit_space(spaces, subseq, a.r, ctx["tol"].solver)
    return {"medoid_index": res.medoid_index, "spread": res.spread, "subseq": subseq}


def cmd_accum(a, ctx):
    values = gio.read_sequence_csv(a.csv)
    pts = accumulation_points(values, a.tol)
    return {"N": len(values), "points": [{"value": p.value, "indices": p.indices} for p in pts]}


def cmd_gen(a, ctx):
    desc = {"seq": a.seq}
    for key in ("mesh", "R", "n", "scale", "alpha", "shrink"):
        v = getattr(a, key, None)
        if v is not None:
            desc[key] = v
    if a.seq in ("rescaled", "constant"):
        if not a.space:
            raise UsageError(f"--space is required for {a.seq}")
        desc["space"] = gio.read_space(a.space, ctx["tol"].metric)
    if a.seq == "product":
        desc["X"] = gio.read_space(a.X, ctx["tol"].metric)
        desc["Y"] = gio.read_space(a.Y, ctx["tol"].metric)
    P = generate(desc, a.index)
    obj = gio.space_to_dict(P)
    if a.out:
        gio.write_space(P, a.out)
        return {"file": str(a.out), "n": P.n, "base": P.base}
    return obj


# ------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--solver-tol", type=float, help="bisection width of the exact solver")
    common.add_argument("--budget", type=float, help="pair enumeration budget (overrides GHKIT_BUDGET)")
    common.add_argument("--json", dest="json_out", help="also write the JSON result to this file")
    common.add_argument("--seed", type=int, help="reserved; the core has no randomized algorithms")

    p = argparse.ArgumentParser(prog="ghkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, tol=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        if tol:
            sp.add_argument("--tol", type=float, help="metric/isometry tolerance (overrides GHKIT_TOL)")
        return sp

    sp = add("validate", cmd_validate, "check a space file")
    sp.add_argument("space")

    sp = add("hausdorff", cmd_hausdorff, "Hausdorff distance of two subsets")
    sp.add_argument("space")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--base-a", type=int)
    sp.add_argument("--base-b", type=int)

    sp = add("gh", cmd_gh, "exact (pointed) GH distance")
    sp.add_argument("X")
    sp.add_argument("Y")
    sp.add_argument("--pointed", action="store_true")
    sp.add_argument("--bounds-only", action="store_true")
    sp.add_argument("--witness-out", help="write the witness joint metric as a space file")

    sp = add("approx", cmd_approx, "best epsilon-approximation pair")
    sp.add_argument("X")
    sp.add_argument("Y")
    sp.add_argument("--pointed", action="store_true")

    sp = add("glue", cmd_glue, "admissible metric from a distortion map")
    sp.add_argument("X")
    sp.add_argument("Y")
    sp.add_argument("--map", required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--pointed", action="store_true")

    sp = add("restrict", cmd_restrict, "restrict a pair to smaller balls")
    sp.add_argument("X")
    sp.add_argument("Y")
    sp.add_argument("--f", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--R", type=float, required=True)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--p-alt", type=int)
    sp.add_argument("--q-alt", type=int)
    sp.add_argument("--eps", type=float)

    sp = add("isometry", cmd_isometry, "search for an isometry")
    sp.add_argument("X")
    sp.add_argument("Y")
    sp.add_argument("--pointed", action="store_true")

    sp = add("length", cmd_length, "dyadic approximate geodesic")
    sp.add_argument("space")
    sp.add_argument("--from", dest="from_", type=int, required=True)
    sp.add_argument("--to", type=int, required=True)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--eps", type=float, default=0.1)

    def seq_args(sp):
        sp.add_argument("--seq", required=True, choices=["lattice", "cycle", "rescaled", "constant", "product"])
        sp.add_argument("--R", type=float)
        sp.add_argument("--mesh")
        sp.add_argument("--n")
        sp.add_argument("--scale")
        sp.add_argument("--alpha")
        sp.add_argument("--shrink")
        sp.add_argument("--space")
        sp.add_argument("--X")
        sp.add_argument("--Y")

    sp = add("converge", cmd_converge, "pointed convergence harness")
    seq_args(sp)
    sp.add_argument("--circumference", type=float)
    sp.add_argument("--reference", required=True)
    sp.add_argument("--h-ref", type=float)
    sp.add_argument("--radii", default="1,2,4")
    sp.add_argument("--indices", default="1..8")
    sp.add_argument("--n-max", type=int, default=5)
    sp.add_argument("--csv", help="write the curve as CSV")

    sp = add("schedule", cmd_schedule, "radius schedule from an eps table")
    sp.add_argument("--table", required=True)
    sp.add_argument("--h", default="id")

    sp = add("sublimit", cmd_sublimit, "medoid sublimit of a directory of spaces")
    sp.add_argument("--spaces", required=True)
    sp.add_argument("--subseq")
    sp.add_argument("--r", type=float, required=True)

    sp = add("accum", cmd_accum, "accumulation points of a real sequence", tol=False)
    sp.add_argument("--csv", required=True)
    sp.add_argument("--tol", type=float, default=0.05, help="single-linkage gap")

    sp = add("gen", cmd_gen, "materialize a generated space")
    seq_args(sp)
    sp.add_argument("--index", type=int)
    sp.add_argument("-o", "--out")
    return p


def _context(args) -> dict:
    tol, budget = defaults_from_env()
    # accum reuses --tol as its clustering gap
    if args.command != "accum" and args.tol is not None:
        tol = tol.with_(metric=args.tol, iso=args.tol)
    if args.solver_tol is not None:
        tol = tol.with_(solver=args.solver_tol)
    if args.budget is not None:
        budget = args.budget
    return {"tol": tol, "budget": budget}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    ctx = _context(args)
    try:
        result = args.fn(args, ctx)
        code = 0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ghkit: error: {exc}", file=sys.stderr)
        return 2
    except GHKitError as exc:
        result = exc.to_dict()
        code = 1
    text = gio.dumps(result)
    print(text, file=out)
    if getattr(args, "json_out", None):
        Path(args.json_out).write_text(text + "\n")
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
