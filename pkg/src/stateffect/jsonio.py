"""JSON documents for distributions, predicates, Kleisli maps, metric
spaces and complex matrices.

    distribution  {"points": [...], "probs": [...]}
    predicate     {"points": [...], "values": [...]}
    kleisli       {"domain": [...], "codomain": [...], "matrix": [[...]]}
    metric space  {"points": [...], "d": [[...]]}
    matrix        {"dim": n, "entries": [[[re, im], ...], ...]}   row-major

Matrix entries may also be given as plain real numbers.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dist import Dist, FuzzyPredicate, KleisliMap
from .errors import DimensionMismatch, StateffectError
from .metric import FiniteMetricSpace, metric_validate


class FormatError(StateffectError):
    """A document does not match any known schema."""


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def kind_of(doc) -> str:
    if isinstance(doc, (int, float)):
        return "scalar"
    if not isinstance(doc, dict):
        raise FormatError("expected a JSON object")
    if "probs" in doc:
        return "dist"
    if "values" in doc:
        return "predicate"
    if "matrix" in doc and "domain" in doc:
        return "kleisli"
    if "d" in doc:
        return "metric"
    if "entries" in doc:
        return "matrix"
    if "value" in doc:
        return "scalar"
    raise FormatError(f"unrecognised document with keys {sorted(doc)}")


def _need(doc, *keys):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise FormatError(f"missing keys {missing}")


def dist_from_json(doc) -> Dist:
    _need(doc, "points", "probs")
    return Dist(tuple(doc["points"]), doc["probs"])


def dist_to_json(omega: Dist) -> dict:
    return {"points": list(omega.points), "probs": omega.probs.tolist()}


def predicate_from_json(doc) -> FuzzyPredicate:
    _need(doc, "points", "values")
    return FuzzyPredicate(tuple(doc["points"]), doc["values"])


def predicate_to_json(p: FuzzyPredicate) -> dict:
    return {"points": list(p.points), "values": p.values.tolist()}


def kleisli_from_json(doc) -> KleisliMap:
    _need(doc, "domain", "codomain", "matrix")
    return KleisliMap(tuple(doc["domain"]), tuple(doc["codomain"]), doc["matrix"])


def kleisli_to_json(f: KleisliMap) -> dict:
    return {"domain": list(f.domain), "codomain": list(f.codomain), "matrix": f.matrix.tolist()}


def metric_from_json(doc) -> FiniteMetricSpace:
    _need(doc, "points", "d")
    return metric_validate(tuple(doc["points"]), doc["d"])


def metric_to_json(space: FiniteMetricSpace) -> dict:
    return {"points": list(space.points), "d": space.d.tolist()}


def _entry(z) -> complex:
    if isinstance(z, (list, tuple)):
        if len(z) != 2:
            raise FormatError(f"complex entry must be [re, im], got {z!r}")
        return complex(float(z[0]), float(z[1]))
    return complex(float(z))


def matrix_from_json(doc) -> np.ndarray:
    _need(doc, "entries")
    rows = doc["entries"]
    m = np.array([[_entry(z) for z in row] for row in rows], dtype=complex)
    n = doc.get("dim", len(rows))
    if m.shape != (n, n):
        raise DimensionMismatch(f"declared dim {n} but entries have shape {m.shape}")
    return m


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"dim": a.shape[0],
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in a]}


def scalar_from_json(doc) -> float:
    value = doc["value"] if isinstance(doc, dict) else doc
    return float(value)
