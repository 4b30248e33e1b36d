"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 verification failure.
Numbers are printed with 12 significant digits.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import jsonio
from .dist import Dist, tvd, tvd_witness
from .effects import FuzzyModel, MatrixEffectModel, UnitIntervalModel, ard_sides
from .entwine import classical_entwinedness, quantum_entwinedness
from .errors import DimensionMismatch, SpaceMismatch, StateffectError
from .metric import discrete_space, lipschitz_witness, transport_plan
from .quantum import DensityMatrix, Effect, diagonal_embedding, trd, trd_witness, vld
from .triangle import triangle_commutes_classical, triangle_commutes_quantum
from .verify import SUITES, run_suites

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3
AGREE_TOL = 1e-8


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _round(obj):
    """Round every float in a JSON-ready structure to 12 significant digits."""
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(f"{x:.12g}") if np.isfinite(x) else str(x)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def emit_json(doc, out):
    print(json.dumps(_round(doc), indent=2), file=out)


def _load_state(path):
    doc = jsonio.read_json(path)
    kind = jsonio.kind_of(doc)
    if kind == "dist":
        return jsonio.dist_from_json(doc)
    if kind == "matrix":
        return DensityMatrix(jsonio.matrix_from_json(doc))
    raise jsonio.FormatError(f"{path}: expected a distribution or a density matrix, found {kind}")


def _load_dist(path) -> Dist:
    state = _load_state(path)
    if not isinstance(state, Dist):
        raise jsonio.FormatError(f"{path}: expected a distribution")
    return state


def _quantum_pair(a, b):
    if isinstance(a, Dist) and isinstance(b, Dist):
        return diagonal_embedding(a, b)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return a, b
    raise SpaceMismatch("cannot compare a distribution with a density matrix")


# -- verbs -------------------------------------------------------------------

def cmd_tvd(args, out):
    a, b = _load_dist(args.first), _load_dist(args.second)
    value = tvd(a, b)
    if args.json:
        emit_json({"tvd": value}, out)
    else:
        print(fmt(value), file=out)


def _space_for(args, a: Dist, b: Dist):
    if args.metric:
        return jsonio.metric_from_json(jsonio.read_json(args.metric))
    labels = sorted(set(a.points) | set(b.points))
    return discrete_space(labels)


def cmd_kvd(args, out):
    a, b = _load_dist(args.first), _load_dist(args.second)
    space = _space_for(args, a, b)
    plan = transport_plan(space, a, b)
    value = min(1.0, max(0.0, plan.value))
    if args.plan:
        emit_json({"kvd": value, "points": list(space.points), "plan": plan.plan,
                   "u": plan.u, "v": plan.v}, out)
    elif args.json:
        emit_json({"kvd": value}, out)
    else:
        print(fmt(value), file=out)


def cmd_trd(args, out):
    a, b = _quantum_pair(_load_state(args.first), _load_state(args.second))
    value = trd(a, b)
    if args.json:
        emit_json({"trd": value}, out)
    else:
        print(fmt(value), file=out)


def cmd_vld(args, out):
    a, b = _quantum_pair(_load_state(args.first), _load_state(args.second))
    value = vld(a, b)
    if args.json:
        emit_json({"vld": value}, out)
    else:
        print(fmt(value), file=out)


def _load_element(model_name, path):
    doc = jsonio.read_json(path)
    if model_name == "fuzzy":
        p = jsonio.predicate_from_json(doc)
        return p.points, p.values
    if model_name == "matrix":
        e = Effect(jsonio.matrix_from_json(doc))
        return e.dim, np.array(e.data)
    r = jsonio.scalar_from_json(doc)
    if not 0.0 <= r <= 1.0:
        raise jsonio.FormatError(f"{path}: scalar {r} outside [0, 1]")
    return None, r


def cmd_ard(args, out):
    shape_x, x = _load_element(args.model, args.first)
    shape_y, y = _load_element(args.model, args.second)
    if shape_x != shape_y:
        raise SpaceMismatch("the two elements live in different effect modules")
    if args.model == "fuzzy":
        model = FuzzyModel(shape_x)
    elif args.model == "matrix":
        model = MatrixEffectModel(shape_x)
    else:
        model = UnitIntervalModel()
    sides = ard_sides(model, x, y)
    direct = model.direct_ard(x, y)
    emit_json({"ard": sides.value, "direct": direct, "agree": abs(sides.value - direct) <= AGREE_TOL,
               "left": sides.left, "right": sides.right}, out)


def cmd_witness(args, out):
    a, b = _load_state(args.first), _load_state(args.second)
    if isinstance(a, Dist) and isinstance(b, Dist):
        if args.metric:
            space = jsonio.metric_from_json(jsonio.read_json(args.metric))
            pred, gap = lipschitz_witness(space, a, b)
            emit_json({"points": list(space.points), "values": pred.values, "gap": gap}, out)
            return
        chosen, gap = tvd_witness(a, b)
        pts = sorted(set(a.points) | set(b.points))
        emit_json({"points": pts, "values": [1.0 if x in chosen else 0.0 for x in pts], "gap": gap}, out)
        return
    a, b = _quantum_pair(a, b)
    effect, gap = trd_witness(a, b)
    doc = jsonio.matrix_to_json(effect.data)
    doc["gap"] = gap
    emit_json(doc, out)


def cmd_entwine(args, out):
    state = _load_state(args.file)
    if isinstance(state, Dist):
        value = classical_entwinedness(state)
    else:
        if not args.dims:
            raise DimensionMismatch("a density matrix needs --dims d1 d2")
        value = quantum_entwinedness(state, tuple(args.dims))
    if args.json:
        emit_json({"entwinedness": value}, out)
    else:
        print(fmt(value), file=out)


def cmd_verify(args, out):
    report = run_suites(args.seed, args.suite)
    print(report.to_json() if args.json else report.to_text(), file=out)
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_triangle_verify(args, out):
    classical = triangle_commutes_classical(args.size, args.trials, args.seed)
    quantum = triangle_commutes_quantum(min(args.size, 4), args.trials, args.seed)
    ok = classical["ok"] and quantum["ok"]
    emit_json({"seed": args.seed, "trials": args.trials, "size": args.size,
               "classical": classical, "quantum": quantum, "ok": ok}, out)
    return EXIT_OK if ok else EXIT_VERIFY


# -- parser ------------------------------------------------------------------

def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stateffect",
                                     description="Distances between states and predicates.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    def pair(name, help_text, func):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("first")
        p.add_argument("second")
        p.set_defaults(func=func)
        return p

    pair("tvd", "total variation distance of two distributions", cmd_tvd)
    p = pair("kvd", "Kantorovich distance over a metric space (discrete by default)", cmd_kvd)
    p.add_argument("--metric", help="metric-space JSON file")
    p.add_argument("--plan", action="store_true", help="dump the optimal transport plan as JSON")
    pair("trd", "trace distance of two density matrices", cmd_trd)
    pair("vld", "validity distance of two density matrices", cmd_vld)
    p = pair("ard", "Archimedean distance of two effect-module elements", cmd_ard)
    p.add_argument("--model", choices=("fuzzy", "matrix", "scalar"), required=True)
    p = pair("witness", "optimal predicate or effect separating two states", cmd_witness)
    p.add_argument("--metric", help="metric-space JSON file (distributions only)")

    p = sub.add_parser("entwine", parents=[common], help="distance to the product of the marginals")
    p.add_argument("file")
    p.add_argument("--dims", nargs=2, type=_positive, metavar=("D1", "D2"))
    p.set_defaults(func=cmd_entwine)

    p = sub.add_parser("verify", parents=[common], help="run the seeded property suites")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("triangle-verify", parents=[common], help="representation round trips as JSON")
    p.add_argument("--size", type=_positive, default=4)
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_triangle_verify)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        code = args.func(args, out)
    except StateffectError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    return EXIT_OK if code is None else code


def main() -> None:
    sys.exit(run())
