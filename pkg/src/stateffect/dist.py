"""Finite discrete distributions, fuzzy predicates and Kleisli maps.

A distribution ``omega`` over labels assigns each label a probability; a
fuzzy predicate assigns each label a truth value in [0, 1]. Validity
``omega |= p`` is the expectation of ``p`` under ``omega``. A Kleisli map
``f : X -> D(Y)`` is a row-stochastic matrix and acts forwards on states
(``state_transform``) and backwards on predicates (``pred_transform``).

Values are immutable: the underlying arrays are flagged read-only.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateLabel,
    InvalidLabel,
    NegativeProb,
    NotAProductSpace,
    NotNormalized,
    NotStochastic,
    OutOfRange,
    SpaceMismatch,
)
from .tolerances import SHARP_TOL, SUM_TOL

_PAIR = re.compile(r"^\(([^(),\s]+),([^(),\s]+)\)$")


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def check_label(label) -> str:
    if not isinstance(label, str) or not label or any(ch.isspace() for ch in label):
        raise InvalidLabel(f"labels must be nonempty strings without whitespace: {label!r}")
    return label


def _check_points(points: Iterable[str]) -> tuple[str, ...]:
    pts = tuple(check_label(p) for p in points)
    if len(set(pts)) != len(pts):
        dup = sorted({p for p in pts if pts.count(p) > 1})
        raise DuplicateLabel(f"duplicate labels: {dup}")
    return pts


def canonical(labels: Iterable[str]) -> tuple[str, ...]:
    """Sort labels in lexicographic byte order."""
    return tuple(sorted(labels, key=lambda s: s.encode("utf-8")))


def pair_label(x: str, y: str) -> str:
    for part in (x, y):
        if any(ch in part for ch in "(),"):
            raise InvalidLabel(f"cannot pair a label containing parentheses or commas: {part!r}")
    return f"({x},{y})"


def split_pair(label: str) -> tuple[str, str]:
    m = _PAIR.match(label)
    if m is None:
        raise NotAProductSpace(f"not a pair label: {label!r}")
    return m.group(1), m.group(2)


@dataclass(frozen=True, eq=False)
class Dist:
    """A probability distribution over an ordered list of labels."""

    points: tuple[str, ...]
    probs: np.ndarray

    def __post_init__(self):
        pts = _check_points(self.points)
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (len(pts),):
            raise SpaceMismatch(f"{len(pts)} labels but {probs.size} probabilities")
        if len(pts) == 0:
            raise NotNormalized("empty distribution")
        if not np.all(np.isfinite(probs)):
            raise OutOfRange("probabilities must be finite")
        if np.any(probs < 0):
            raise NegativeProb(f"negative probability {probs.min():.3g}")
        if np.any(probs > 1 + SUM_TOL):
            raise OutOfRange(f"probability above 1: {probs.max():.17g}")
        total = probs.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise NotNormalized(f"probabilities sum to {total:.17g}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", _frozen(probs))

    def __len__(self):
        return len(self.points)

    def __getitem__(self, label: str) -> float:
        try:
            return float(self.probs[self.points.index(label)])
        except ValueError:
            return 0.0

    def items(self):
        return zip(self.points, self.probs.tolist())

    def __repr__(self):
        terms = " + ".join(f"{p:.6g}|{x}>" for x, p in self.items())
        return f"Dist({terms})"


@dataclass(frozen=True, eq=False)
class FuzzyPredicate:
    """A [0, 1]-valued function on an ordered list of labels."""

    points: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        pts = _check_points(self.points)
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(pts),):
            raise SpaceMismatch(f"{len(pts)} labels but {vals.size} values")
        if not np.all(np.isfinite(vals)) or np.any(vals < -SUM_TOL) or np.any(vals > 1 + SUM_TOL):
            raise OutOfRange("predicate values must lie in [0, 1]")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", _frozen(np.clip(vals, 0.0, 1.0)))

    @property
    def sharp(self) -> bool:
        v = self.values
        return bool(np.all((np.abs(v) <= SHARP_TOL) | (np.abs(v - 1) <= SHARP_TOL)))

    def __getitem__(self, label: str) -> float:
        return float(self.values[self.points.index(label)])

    def __repr__(self):
        return f"FuzzyPredicate({dict(zip(self.points, self.values.tolist()))})"


@dataclass(frozen=True, eq=False)
class KleisliMap:
    """A map X -> D(Y) stored as a row-stochastic matrix (rows: X, columns: Y)."""

    domain: tuple[str, ...]
    codomain: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dom = _check_points(self.domain)
        cod = _check_points(self.codomain)
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (len(dom), len(cod)):
            raise SpaceMismatch(f"matrix shape {m.shape} does not match {len(dom)}x{len(cod)}")
        if not np.all(np.isfinite(m)) or np.any(m < 0):
            raise NegativeProb("Kleisli matrix entries must be nonnegative")
        sums = m.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1) > SUM_TOL)
        if bad.size:
            raise NotStochastic(f"row {dom[bad[0]]!r} sums to {sums[bad[0]]:.17g}")
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "codomain", cod)
        object.__setattr__(self, "matrix", _frozen(m))

    def row(self, x: str) -> Dist:
        return Dist(self.codomain, self.matrix[self.domain.index(x)])


# -- constructors ------------------------------------------------------------

def dist_new(pairs: Iterable[tuple[str, float]]) -> Dist:
    """Build a distribution from ``(label, probability)`` pairs.

    Labels are put in canonical order. No renormalization is done: the
    probabilities must already sum to 1 within ``SUM_TOL``.
    """
    pairs = list(pairs)
    labels = _check_points(lbl for lbl, _ in pairs)
    for lbl, p in pairs:
        if p < 0:
            raise NegativeProb(f"negative probability for {lbl!r}: {p}")
    lookup = dict(pairs)
    pts = canonical(labels)
    return Dist(pts, [lookup[x] for x in pts])


def dirac(label: str, points: Sequence[str] | None = None) -> Dist:
    pts = tuple(points) if points is not None else (label,)
    return Dist(pts, [1.0 if x == label else 0.0 for x in pts])


def uniform(points: Sequence[str]) -> Dist:
    return Dist(tuple(points), np.full(len(points), 1.0 / len(points)))


def indicator(points: Sequence[str], subset: Iterable[str]) -> FuzzyPredicate:
    sub = set(subset)
    return FuzzyPredicate(tuple(points), [1.0 if x in sub else 0.0 for x in points])


def constant(points: Sequence[str], value: float) -> FuzzyPredicate:
    return FuzzyPredicate(tuple(points), np.full(len(points), float(value)))


def identity_map(points: Sequence[str]) -> KleisliMap:
    return KleisliMap(tuple(points), tuple(points), np.eye(len(points)))


def support(omega: Dist) -> frozenset[str]:
    return frozenset(x for x, p in omega.items() if p > SHARP_TOL)


# -- alignment ---------------------------------------------------------------

def align(*dists: Dist) -> tuple[tuple[str, ...], list[np.ndarray]]:
    """Express distributions over the union of their labels, zero-padded.

    When all point lists already coincide the original order is kept.
    """
    first = dists[0].points
    if all(d.points == first for d in dists):
        return first, [d.probs for d in dists]
    pts = canonical(set().union(*(d.points for d in dists)))
    index = {x: i for i, x in enumerate(pts)}
    out = []
    for d in dists:
        v = np.zeros(len(pts))
        v[[index[x] for x in d.points]] = d.probs
        out.append(v)
    return pts, out


def reindex(omega: Dist, points: Sequence[str]) -> np.ndarray:
    """Probabilities of ``omega`` listed along ``points``.

    Raises SpaceMismatch if ``omega`` lists a label outside ``points``.
    """
    if omega.points == tuple(points):
        return omega.probs
    index = {x: i for i, x in enumerate(points)}
    missing = [x for x in omega.points if x not in index]
    if missing:
        raise SpaceMismatch(f"labels {missing} not in the target space")
    v = np.zeros(len(points))
    v[[index[x] for x in omega.points]] = omega.probs
    return v


def _pred_on(omega: Dist, p: FuzzyPredicate) -> tuple[np.ndarray, np.ndarray]:
    if omega.points == p.points:
        return omega.probs, p.values
    index = {x: i for i, x in enumerate(p.points)}
    missing = [x for x in omega.points if x not in index]
    if missing:
        raise SpaceMismatch(f"predicate undefined on {missing}")
    return omega.probs, p.values[[index[x] for x in omega.points]]


# -- operations --------------------------------------------------------------

def validity(omega: Dist, p: FuzzyPredicate) -> float:
    """Expected value of ``p`` under ``omega``, in [0, 1]."""
    w, v = _pred_on(omega, p)
    return float(min(1.0, max(0.0, w @ v)))


def state_transform(f: KleisliMap, omega: Dist) -> Dist:
    """Push ``omega`` forward along ``f``: ``f_*(omega)(y) = sum_x f(x)(y) omega(x)``."""
    w = reindex(omega, f.domain)
    out = w @ f.matrix
    return Dist(f.codomain, np.clip(out, 0.0, 1.0))


def pred_transform(f: KleisliMap, q: FuzzyPredicate) -> FuzzyPredicate:
    """Pull ``q`` back along ``f``: ``f^*(q)(x) = sum_y f(x)(y) q(y)``."""
    if q.points != f.codomain:
        if set(q.points) != set(f.codomain):
            raise SpaceMismatch("predicate points differ from the map's codomain")
        index = {x: i for i, x in enumerate(q.points)}
        vals = q.values[[index[y] for y in f.codomain]]
    else:
        vals = q.values
    return FuzzyPredicate(f.domain, np.clip(f.matrix @ vals, 0.0, 1.0))


def kleisli_compose(g: KleisliMap, f: KleisliMap) -> KleisliMap:
    """``g . f`` for ``f : X -> D(Y)`` and ``g : Y -> D(Z)``."""
    if f.codomain != g.domain:
        raise SpaceMismatch("codomain of f differs from domain of g")
    return KleisliMap(f.domain, g.codomain, f.matrix @ g.matrix)


def tvd(omega1: Dist, omega2: Dist) -> float:
    """Total variation distance, half the l1 distance of the mass functions."""
    _, (a, b) = align(omega1, omega2)
    return float(min(1.0, 0.5 * np.abs(a - b).sum()))


def tvd_witness(omega1: Dist, omega2: Dist) -> tuple[frozenset[str], float]:
    """The subset ``U = {x : omega1(x) > omega2(x)}`` attaining the tvd.

    Returns ``(U, gap)`` where ``gap = omega1(U) - omega2(U)``.
    """
    pts, (a, b) = align(omega1, omega2)
    chosen = frozenset(x for x, s, t in zip(pts, a, b) if s > t)
    sharp = indicator(pts, chosen).values
    return chosen, float(a @ sharp - b @ sharp)


def tensor(omega1: Dist, omega2: Dist) -> Dist:
    """Product distribution over pair labels ``"(x,y)"``."""
    labels, probs = [], []
    for (x, p), (y, q) in itertools.product(omega1.items(), omega2.items()):
        labels.append(pair_label(x, y))
        probs.append(p * q)
    return Dist(tuple(labels), probs)


def marginal(omega: Dist, side: str) -> Dist:
    """Marginal of a distribution over pair labels; ``side`` is ``"first"`` or ``"second"``."""
    if side not in ("first", "second"):
        raise ValueError(f"side must be 'first' or 'second', not {side!r}")
    k = 0 if side == "first" else 1
    mass: dict[str, float] = {}
    for label, p in omega.items():
        key = split_pair(label)[k]
        mass[key] = mass.get(key, 0.0) + p
    pts = canonical(mass)
    return Dist(pts, [mass[x] for x in pts])


def product_of_marginals(omega: Dist) -> Dist:
    return tensor(marginal(omega, "first"), marginal(omega, "second"))
