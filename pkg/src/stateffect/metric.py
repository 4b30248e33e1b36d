"""Finite 1-bounded metric spaces and the Kantorovich distance on them.

The Kantorovich distance is the largest validity gap over non-expansive
[0, 1]-valued predicates. On a finite space it is computed as the optimum
of a transportation problem whose cost is the metric; the dual potentials
of that problem yield an optimal non-expansive predicate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .dist import Dist, FuzzyPredicate, KleisliMap, _check_points, reindex
from .errors import (
    NotAMetric,
    NotOneBounded,
    NotSymmetric,
    OutOfRange,
    SolverFailure,
    SpaceMismatch,
    TriangleViolation,
    ZeroDistanceDistinctPoints,
)
from .tolerances import DUAL_TOL, MET_TOL
from .transport import TransportPlan, TransportProblem, solve_transport


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    points: tuple[str, ...]
    d: np.ndarray

    def __post_init__(self):
        pts = _check_points(self.points)
        d = np.asarray(self.d, dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "d", d)

    def __len__(self):
        return len(self.points)

    def dist(self, x: str, y: str) -> float:
        return float(self.d[self.points.index(x), self.points.index(y)])


@dataclass(frozen=True, eq=False)
class NonexpansivePredicate:
    space: FiniteMetricSpace
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(self.space),):
            raise SpaceMismatch("one value per point required")
        if np.any(vals < 0) or np.any(vals > 1):
            raise OutOfRange("predicate values must lie in [0, 1]")
        excess = np.abs(vals[:, None] - vals[None, :]) - self.space.d
        if excess.max() > MET_TOL:
            raise OutOfRange(f"predicate is expansive by {excess.max():.3g}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def as_predicate(self) -> FuzzyPredicate:
        return FuzzyPredicate(self.space.points, self.values)


def metric_validate(points: Sequence[str], d) -> FiniteMetricSpace:
    """Check the 1-bounded metric axioms and return the space.

    Errors name the violated axiom and the offending labels.
    """
    pts = _check_points(points)
    d = np.asarray(d, dtype=float)
    n = len(pts)
    if d.shape != (n, n):
        raise NotAMetric(f"distance matrix must be {n}x{n}, got {d.shape}")
    if not np.all(np.isfinite(d)):
        raise NotAMetric("distances must be finite")
    diag = np.flatnonzero(np.abs(np.diag(d)) > MET_TOL)
    if diag.size:
        raise NotAMetric(f"d({pts[diag[0]]},{pts[diag[0]]}) = {d[diag[0], diag[0]]} is not 0")
    i, j = np.unravel_index(np.argmax(np.abs(d - d.T)), d.shape)
    if abs(d[i, j] - d[j, i]) > MET_TOL:
        raise NotSymmetric(f"d({pts[i]},{pts[j]}) = {d[i, j]} but d({pts[j]},{pts[i]}) = {d[j, i]}")
    if d.min() < -MET_TOL or d.max() > 1 + MET_TOL:
        i, j = np.unravel_index(np.argmax(np.maximum(d - 1, -d)), d.shape)
        raise NotOneBounded(f"d({pts[i]},{pts[j]}) = {d[i, j]} is outside [0, 1]")
    off = d + np.eye(n)
    i, j = np.unravel_index(np.argmin(off), off.shape)
    if n > 1 and off[i, j] <= 0:
        raise ZeroDistanceDistinctPoints(f"d({pts[i]},{pts[j]}) = 0 for distinct points")
    # excess[x, y, z] = d(x, y) - d(x, z) - d(z, y)
    excess = d[:, :, None] - d[:, None, :] - d.T[None, :, :]
    x, y, z = np.unravel_index(np.argmax(excess), excess.shape)
    if excess[x, y, z] > MET_TOL:
        raise TriangleViolation(pts[x], pts[y], pts[z], float(excess[x, y, z]))
    return FiniteMetricSpace(pts, np.clip((d + d.T) / 2, 0.0, 1.0))


def discrete_space(labels: Sequence[str]) -> FiniteMetricSpace:
    pts = _check_points(labels)
    return FiniteMetricSpace(pts, 1.0 - np.eye(len(pts)))


def sup_distance(p: FuzzyPredicate, q: FuzzyPredicate) -> float:
    """Largest pointwise difference between two predicates."""
    if p.points != q.points:
        if set(p.points) != set(q.points):
            raise SpaceMismatch("predicates live on different point sets")
        index = {x: i for i, x in enumerate(q.points)}
        qv = q.values[[index[x] for x in p.points]]
    else:
        qv = q.values
    return float(np.abs(p.values - qv).max())


def mcshane_envelope(space: FiniteMetricSpace, c) -> np.ndarray:
    """``x -> min_y (c(y) + d(x, y))``: the largest non-expansive function below ``c``."""
    c = np.asarray(c, dtype=float)
    return (c[None, :] + space.d).min(axis=1)


def transport_plan(space: FiniteMetricSpace, omega1: Dist, omega2: Dist) -> TransportPlan:
    a = reindex(omega1, space.points)
    b = reindex(omega2, space.points)
    return solve_transport(TransportProblem(space.d, a, b))


def kantorovich(space: FiniteMetricSpace, omega1: Dist, omega2: Dist) -> float:
    """Kantorovich distance between two distributions on ``space``."""
    return float(min(1.0, max(0.0, transport_plan(space, omega1, omega2).value)))


def _witness_from_plan(space, plan, a, b):
    # c-transform of the demand potentials is 1-Lipschitz and dominates u
    p = (space.d - plan.v[None, :]).min(axis=1)
    p = np.clip(p - p.min(), 0.0, 1.0)
    # clamping can break the Lipschitz bound; the envelope restores it
    p = mcshane_envelope(space, p)
    gap = float(a @ p - b @ p)
    if abs(gap - plan.value) > DUAL_TOL:
        raise SolverFailure(f"dual witness gap {gap:.12g} differs from primal value {plan.value:.12g}")
    return p, gap


def lipschitz_witness(space: FiniteMetricSpace, omega1: Dist, omega2: Dist) -> tuple[NonexpansivePredicate, float]:
    """An optimal non-expansive predicate and its validity gap.

    The gap ``omega1 |= p - omega2 |= p`` equals the Kantorovich distance
    within ``DUAL_TOL``.
    """
    a = reindex(omega1, space.points)
    b = reindex(omega2, space.points)
    plan = solve_transport(TransportProblem(space.d, a, b))
    p, gap = _witness_from_plan(space, plan, a, b)
    return NonexpansivePredicate(space, p), gap


class NonexpansiveReport(NamedTuple):
    ok: bool
    worst_pair: tuple[str, str] | None
    excess: float


def check_nonexpansive_kleisli(space_x: FiniteMetricSpace, space_y: FiniteMetricSpace,
                               f: KleisliMap) -> NonexpansiveReport:
    """Test ``kvd(f(x), f(x')) <= d(x, x')`` over all pairs of domain points."""
    if set(f.domain) != set(space_x.points) or set(f.codomain) != set(space_y.points):
        raise SpaceMismatch("Kleisli map does not run between the given spaces")
    rows = {x: f.row(x) for x in f.domain}
    worst, worst_pair = -np.inf, None
    pts = space_x.points
    for i, x in enumerate(pts):
        for j in range(i + 1, len(pts)):
            y = pts[j]
            excess = kantorovich(space_y, rows[x], rows[y]) - space_x.d[i, j]
            if excess > worst:
                worst, worst_pair = excess, (x, y)
    if worst_pair is None:
        return NonexpansiveReport(True, None, 0.0)
    return NonexpansiveReport(bool(worst <= MET_TOL), worst_pair, float(worst))
