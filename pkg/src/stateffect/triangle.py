"""Representation round trips between states, predicates and their
homomorphisms, for finite sets and for matrix algebras.

Black boxes are plain callables plus the space they act on. Before a
black box is converted, it is probed on a fixed panel of structured
inputs (indicators, constants, seeded random convex pairs) for the
homomorphism or affineness laws it must satisfy.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .dist import (
    Dist,
    FuzzyPredicate,
    KleisliMap,
    constant,
    dirac,
    indicator,
    pred_transform,
    tvd,
    validity,
)
from .errors import NotAffine, NotAHomomorphism, NotAnEffect
from .quantum import DensityMatrix, dagger
from .tolerances import HOM_PROBES, HOM_TOL, PSD_TOL

PANEL_SEED = 0x5EED


@dataclass(frozen=True)
class EmodMapBlackBox:
    """Effect-module map [0,1]^X -> [0,1]."""

    points: tuple[str, ...]
    evaluate: Callable[[FuzzyPredicate], float]


@dataclass(frozen=True)
class EmodHomBlackBox:
    """Effect-module map [0,1]^Y -> [0,1]^X (a predicate transformer)."""

    source: tuple[str, ...]   # Y
    target: tuple[str, ...]   # X
    evaluate: Callable[[FuzzyPredicate], FuzzyPredicate]


@dataclass(frozen=True)
class AffineMapBlackBox:
    """Affine map D(X) -> [0,1]."""

    points: tuple[str, ...]
    evaluate: Callable[[Dist], float]


@dataclass(frozen=True)
class AffineStateMapBlackBox:
    """Affine map from density matrices of dimension n to [0,1]."""

    dim: int
    evaluate: Callable[[DensityMatrix], float]


# -- probe panels ------------------------------------------------------------

@lru_cache(maxsize=64)
def _predicate_panel(points):
    """Pairs (p, q) with p + q <= 1 and scalars, 64 probes in total."""
    rng = np.random.default_rng(PANEL_SEED)
    n = len(points)
    preds = [indicator(points, [x]) for x in points]
    preds += [constant(points, c) for c in (0.0, 0.25, 0.5, 1.0)]
    pairs = []
    while len(preds) + len(pairs) < HOM_PROBES:
        p = rng.random(n)
        q = (1 - p) * rng.random(n)
        pairs.append((FuzzyPredicate(points, p), FuzzyPredicate(points, q), float(rng.random())))
    return tuple(preds), tuple(pairs)


@lru_cache(maxsize=64)
def _dist_panel(points):
    rng = np.random.default_rng(PANEL_SEED)
    n = len(points)
    dists = [dirac(x, points) for x in points]
    pairs = []
    while len(dists) + len(pairs) < HOM_PROBES:
        a = Dist(points, rng.dirichlet(np.ones(n)))
        b = Dist(points, rng.dirichlet(np.ones(n)))
        pairs.append((a, b, float(rng.random())))
    return tuple(dists), tuple(pairs)


def _mix(a: Dist, b: Dist, t: float) -> Dist:
    probs = t * a.probs + (1 - t) * b.probs
    return Dist(a.points, probs / probs.sum())


def _check_emod_laws(h_eval, points):
    """Probe unit, zero, sums and scalars for a map into (a power of) [0,1].

    ``h_eval`` must return an array.
    """
    one = h_eval(constant(points, 1.0))
    if np.abs(one - 1).max() > HOM_TOL:
        raise NotAHomomorphism("h(1) != 1", sample="one")
    zero = h_eval(constant(points, 0.0))
    if np.abs(zero).max() > HOM_TOL:
        raise NotAHomomorphism("h(0) != 0", sample="zero")
    preds, pairs = _predicate_panel(points)
    for p, q, r in pairs:
        hp, hq = h_eval(p), h_eval(q)
        s = FuzzyPredicate(points, p.values + q.values)
        if np.abs(h_eval(s) - hp - hq).max() > HOM_TOL:
            raise NotAHomomorphism("h does not preserve sums", sample=(p, q))
        if np.abs(h_eval(FuzzyPredicate(points, r * p.values)) - r * hp).max() > HOM_TOL:
            raise NotAHomomorphism("h does not preserve scalar multiplication", sample=(r, p))
    return preds, pairs


def check_emod_map(h: EmodMapBlackBox):
    _check_emod_laws(lambda p: np.atleast_1d(float(h.evaluate(p))), tuple(h.points))


def emod_map_to_dist(h: EmodMapBlackBox) -> Dist:
    """The state ``omega(x) = h(1_{x})`` represented by an effect-module map."""
    pts = tuple(h.points)
    preds, pairs = _check_emod_laws(lambda p: np.atleast_1d(float(h.evaluate(p))), pts)
    probs = np.array([float(h.evaluate(indicator(pts, [x]))) for x in pts])
    if probs.min() < -HOM_TOL or abs(probs.sum() - 1) > HOM_TOL:
        raise NotAHomomorphism("h(1_{x}) is not a distribution", sample=probs)
    probs = np.clip(probs, 0.0, None)
    omega = Dist(pts, probs / probs.sum())
    for p in preds + tuple(a for a, _, _ in pairs):
        if abs(float(h.evaluate(p)) - validity(omega, p)) > HOM_TOL:
            raise NotAHomomorphism("h is not validity in the reconstructed state", sample=p)
    return omega


def emod_hom_to_kleisli(h: EmodHomBlackBox) -> KleisliMap:
    """The Kleisli map ``f(x)(y) = h(1_{y})(x)`` whose predicate transformer is ``h``."""
    ys, xs = tuple(h.source), tuple(h.target)

    def h_eval(q):
        out = h.evaluate(q)
        if tuple(out.points) != xs:
            raise NotAHomomorphism("h returned a predicate on the wrong points", sample=q)
        return out.values

    preds, pairs = _check_emod_laws(h_eval, ys)
    cols = np.stack([h_eval(indicator(ys, [y])) for y in ys], axis=1)
    if cols.min() < -HOM_TOL or np.abs(cols.sum(axis=1) - 1).max() > HOM_TOL:
        raise NotAHomomorphism("indicator images do not form stochastic rows", sample=cols)
    cols = np.clip(cols, 0.0, None)
    f = KleisliMap(xs, ys, cols / cols.sum(axis=1, keepdims=True))
    for q in preds + tuple(a for a, _, _ in pairs):
        if np.abs(pred_transform(f, q).values - h_eval(q)).max() > HOM_TOL:
            raise NotAHomomorphism("h differs from the reconstructed predicate transformer", sample=q)
    return f


def affine_map_to_predicate(g: AffineMapBlackBox) -> FuzzyPredicate:
    """The predicate ``p(x) = g(delta_x)`` whose validity map is ``g``."""
    pts = tuple(g.points)
    dists, pairs = _dist_panel(pts)
    for a, b, t in pairs:
        ga, gb = float(g.evaluate(a)), float(g.evaluate(b))
        if abs(float(g.evaluate(_mix(a, b, t))) - (t * ga + (1 - t) * gb)) > HOM_TOL:
            raise NotAffine("g does not preserve convex combinations", sample=(a, b, t))
        # discrete metric on X, so the Kantorovich distance is tvd
        if abs(ga - gb) > tvd(a, b) + HOM_TOL:
            raise NotAffine("g is expansive", sample=(a, b))
    vals = np.array([float(g.evaluate(d)) for d in dists])
    if vals.min() < -HOM_TOL or vals.max() > 1 + HOM_TOL:
        raise NotAffine("g leaves [0, 1]", sample=vals)
    p = FuzzyPredicate(pts, np.clip(vals, 0.0, 1.0))
    for a, _, _ in pairs:
        if abs(float(g.evaluate(a)) - validity(a, p)) > HOM_TOL:
            raise NotAffine("g is not validity of the reconstructed predicate", sample=a)
    return p


def effect_probe_states(n: int) -> list[tuple[str, tuple[int, int], DensityMatrix]]:
    """The fixed probe basis: |j><j|, then rho+_jk and rhoi_jk for j < k in index order."""
    probes = []
    eye = np.eye(n, dtype=complex)
    for j in range(n):
        probes.append(("diag", (j, j), DensityMatrix(np.outer(eye[j], eye[j]))))
    for j in range(n):
        for k in range(j + 1, n):
            plus = eye[j] + eye[k]
            imag = eye[j] + 1j * eye[k]
            probes.append(("plus", (j, k), DensityMatrix(0.5 * np.outer(plus, plus.conj()))))
            probes.append(("imag", (j, k), DensityMatrix(0.5 * np.outer(imag, imag.conj()))))
    return probes


def _state_panel(n):
    rng = np.random.default_rng(PANEL_SEED)
    states = []
    for _ in range(HOM_PROBES // 2):
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        rho = g @ dagger(g)
        states.append(DensityMatrix(rho / np.trace(rho).real))
    return states, rng


def affine_state_map_to_effect(g: AffineStateMapBlackBox) -> np.ndarray:
    """The effect ``E`` with ``tr(rho E) = g(rho)``, reconstructed from n^2 probes.

    ``E_jj = g(|j><j|)``, ``Re E_jk = g(rho+) - (E_jj + E_kk)/2`` and, since
    ``tr(rhoi E) = (E_jj + E_kk)/2 - Im E_jk``, ``Im E_jk = (E_jj + E_kk)/2 - g(rhoi)``.
    """
    n = g.dim
    states, rng = _state_panel(n)
    for k in range(0, len(states) - 1, 2):
        a, b = states[k], states[k + 1]
        t = float(rng.random())
        mix = DensityMatrix(t * a.data + (1 - t) * b.data)
        lhs = float(g.evaluate(mix))
        rhs = t * float(g.evaluate(a)) + (1 - t) * float(g.evaluate(b))
        if abs(lhs - rhs) > HOM_TOL:
            raise NotAffine("g does not preserve convex combinations", sample=(a, b, t))

    e = np.zeros((n, n), dtype=complex)
    values = {(kind, jk): float(g.evaluate(rho)) for kind, jk, rho in effect_probe_states(n)}
    for j in range(n):
        e[j, j] = values["diag", (j, j)]
    for j in range(n):
        for k in range(j + 1, n):
            mean = 0.5 * (e[j, j].real + e[k, k].real)
            re = values["plus", (j, k)] - mean
            im = mean - values["imag", (j, k)]
            e[j, k] = re + 1j * im
            e[k, j] = re - 1j * im
    lam = np.linalg.eigvalsh(e)
    if lam[0] < -PSD_TOL or lam[-1] > 1 + PSD_TOL:
        raise NotAnEffect(f"reconstructed operator has spectrum [{lam[0]:.3g}, {lam[-1]:.3g}]")
    for rho in states:
        if abs(float(np.einsum("ij,ji->", rho.data, e).real) - float(g.evaluate(rho))) > HOM_TOL:
            raise NotAffine("g is not tr(. E) for the reconstructed E", sample=rho)
    return e


# -- round-trip reports ------------------------------------------------------

def _labels(prefix, n):
    return tuple(f"{prefix}{i}" for i in range(n))


def random_kleisli(rng, xs, ys) -> KleisliMap:
    m = rng.dirichlet(np.ones(len(ys)), size=len(xs))
    sparse = rng.random(m.shape) < 0.3
    m = np.where(sparse, 0.0, m)
    m[np.arange(len(xs)), rng.integers(0, len(ys), len(xs))] += 1e-3
    return KleisliMap(xs, ys, m / m.sum(axis=1, keepdims=True))


def random_dist(rng, points) -> Dist:
    p = rng.dirichlet(np.ones(len(points)))
    if len(points) > 1 and rng.random() < 0.3:
        p[rng.integers(len(points))] = 0.0
        p = p / p.sum()
    return Dist(tuple(points), p)


def random_effect(rng, n) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(g)
    lam = rng.random(n)
    if rng.random() < 0.3:
        lam = np.round(lam)
    e = (q * lam) @ dagger(q)
    return (e + dagger(e)) / 2


def kleisli_round_trip(f: KleisliMap) -> float:
    box = EmodHomBlackBox(f.codomain, f.domain, lambda q: pred_transform(f, q))
    return float(np.abs(emod_hom_to_kleisli(box).matrix - f.matrix).max())


def dist_round_trip(omega: Dist) -> float:
    box = EmodMapBlackBox(omega.points, lambda p: validity(omega, p))
    return float(np.abs(emod_map_to_dist(box).probs - omega.probs).max())


def predicate_round_trip(p: FuzzyPredicate) -> float:
    box = AffineMapBlackBox(p.points, lambda w: validity(w, p))
    return float(np.abs(affine_map_to_predicate(box).values - p.values).max())


def effect_round_trip(e: np.ndarray) -> float:
    box = AffineStateMapBlackBox(e.shape[0], lambda rho: float(np.einsum("ij,ji->", rho.data, e).real))
    return float(np.abs(affine_state_map_to_effect(box) - e).max())


def triangle_commutes_classical(size: int, trials: int, seed: int = 0) -> dict:
    """Worst residuals of the three classical round trips over seeded random inputs."""
    rng = np.random.default_rng([seed, size])
    xs = _labels("x", size)
    worst = {"kleisli": 0.0, "dist": 0.0, "predicate": 0.0}
    failures = []
    for t in range(trials):
        ys = _labels("y", int(rng.integers(1, 7)))
        checks = {
            "kleisli": lambda: kleisli_round_trip(random_kleisli(rng, xs, ys)),
            "dist": lambda: dist_round_trip(random_dist(rng, xs)),
            "predicate": lambda: predicate_round_trip(FuzzyPredicate(xs, rng.random(size))),
        }
        for name, run in checks.items():
            try:
                worst[name] = max(worst[name], run())
            except (NotAHomomorphism, NotAffine) as exc:
                failures.append(f"{name} trial {t}: {exc}")
                worst[name] = np.inf
    return {"size": size, "trials": trials, "seed": seed, "residuals": worst,
            "failures": failures, "ok": not failures and max(worst.values()) <= HOM_TOL}


def triangle_commutes_quantum(dim: int, trials: int, seed: int = 0) -> dict:
    """Worst residual of the effect round trip on dimension ``dim``."""
    rng = np.random.default_rng([seed, dim, 1])
    worst, failures = 0.0, []
    for t in range(trials):
        try:
            worst = max(worst, effect_round_trip(random_effect(rng, dim)))
        except (NotAffine, NotAnEffect) as exc:
            failures.append(f"effect trial {t}: {exc}")
            worst = np.inf
    return {"dim": dim, "trials": trials, "seed": seed, "residuals": {"effect": worst},
            "failures": failures, "ok": not failures and worst <= HOM_TOL}
