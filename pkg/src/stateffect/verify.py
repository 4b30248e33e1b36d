"""Seeded property checks for every module, grouped into suites.

Each check owns a generator seeded with ``[seed, crc32(check id)]``
(numpy's PCG64), so a check's outcome does not depend on which other
checks run. Reports list checks in registration order and contain no
timings, which keeps them byte-identical for a fixed seed.
"""
from __future__ import annotations

import json
import math
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .dist import (
    Dist,
    FuzzyPredicate,
    KleisliMap,
    pair_label,
    pred_transform,
    state_transform,
    tvd,
    tvd_witness,
    validity,
)
from .effects import (
    FuzzyModel,
    MatrixEffectModel,
    UnitIntervalModel,
    archimedean_check,
    ard,
    ominus,
    ovee,
    pred_validity_distance,
    state_validity,
    sup_of_ascending,
)
from .entwine import classical_entwinedness, quantum_entwinedness
from .metric import (
    FiniteMetricSpace,
    check_nonexpansive_kleisli,
    discrete_space,
    kantorovich,
    lipschitz_witness,
    mcshane_envelope,
    metric_validate,
    sup_distance,
    transport_plan,
)
from .quantum import (
    DensityMatrix,
    bell_state,
    dagger,
    diagonal_embedding,
    herm_eig,
    jordan_decompose,
    mat_abs,
    trd,
    trd_witness,
    vld,
)
from .tolerances import (
    CAUCHY_TOL,
    DUAL_TOL,
    EIG_TOL,
    MET_TOL,
    PSD_TOL,
    SUM_TOL,
)
from .transport import TransportProblem, brute_force_transport, solve_transport
from .triangle import (
    AffineMapBlackBox,
    AffineStateMapBlackBox,
    EmodHomBlackBox,
    EmodMapBlackBox,
    affine_map_to_predicate,
    affine_state_map_to_effect,
    emod_hom_to_kleisli,
    emod_map_to_dist,
    random_effect,
)

SUITES = ("dist-core", "metric-core", "transport", "quantum-core", "effect-module", "triangle", "cli")


# -- bookkeeping -------------------------------------------------------------

class Tally:
    """Collects residuals and boolean outcomes for one check."""

    def __init__(self, tol: float):
        self.tol = tol
        self.cases = 0
        self.failures = 0
        self.worst = 0.0
        self.first_failure: str | None = None

    def residual(self, r: float, note: str = ""):
        r = float(r)
        self.worst = max(self.worst, r) if not math.isnan(r) else math.inf
        if not r <= self.tol:
            self._fail(f"residual {r:.12g} > {self.tol:g} {note}".strip())

    def holds(self, ok: bool, note: str = ""):
        if not ok:
            self._fail(note or "law violated")

    def _fail(self, msg):
        self.failures += 1
        if self.first_failure is None:
            self.first_failure = f"case {self.cases}: {msg}"


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    cases: int
    tol: float
    run: Callable[[np.random.Generator, int, Tally], None]

    @property
    def ident(self) -> str:
        return f"{self.suite}/{self.name}"


@dataclass
class CheckResult:
    suite: str
    name: str
    cases: int
    failures: int
    worst: float
    tol: float
    first_failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class Report:
    seed: int
    suite: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_text(self) -> str:
        lines = [f"verify seed={self.seed} suite={self.suite}"]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status} {r.suite}/{r.name} cases={r.cases} failures={r.failures} "
                         f"worst={r.worst:.12g} tol={r.tol:.12g}")
            if r.first_failure:
                lines.append(f"     first failure: {r.first_failure}")
        passed = sum(r.passed for r in self.results)
        lines.append(f"{passed}/{len(self.results)} checks passed")
        return "\n".join(lines)

    def to_json(self) -> str:
        doc = {"seed": self.seed, "suite": self.suite, "ok": self.ok,
               "checks": [dict(asdict(r), passed=r.passed) for r in self.results]}
        return json.dumps(doc, indent=2, default=_json_float)


def _json_float(x):
    return float(x)


REGISTRY: list[Check] = []


def check(suite: str, name: str, cases: int, tol: float):
    def register(fn):
        REGISTRY.append(Check(suite, name, cases, tol, fn))
        return fn
    return register


def checks_for(suite: str = "all") -> list[Check]:
    if suite != "all" and suite not in SUITES:
        raise KeyError(suite)
    return [c for c in REGISTRY if suite == "all" or c.suite == suite]


def run_check(c: Check, seed: int, scale: float = 1.0) -> CheckResult:
    rng = np.random.default_rng([seed, zlib.crc32(c.ident.encode())])
    cases = max(1, math.ceil(c.cases * scale))
    tally = Tally(c.tol)
    for k in range(cases):
        tally.cases = k
        try:
            c.run(rng, k, tally)
        except Exception as exc:  # a raised error is a failed case, not a crash of the report
            tally._fail(f"{type(exc).__name__}: {exc}")
    return CheckResult(c.suite, c.name, cases, tally.failures, tally.worst, c.tol, tally.first_failure)


def run_suites(seed: int = 0, suite: str = "all", scale: float = 1.0) -> Report:
    """Run the checks of ``suite`` (or all of them); ``scale`` multiplies case counts."""
    report = Report(seed, suite)
    for c in checks_for(suite):
        report.results.append(run_check(c, seed, scale))
    return report


# -- generators --------------------------------------------------------------

def _labels(prefix, n):
    return tuple(f"{prefix}{i}" for i in range(n))


def _probs(rng, n, zeros=0.25):
    p = rng.dirichlet(np.ones(n))
    if n > 1 and rng.random() < zeros:
        p[rng.random(n) < 0.3] = 0.0
        if p.sum() == 0:
            p[rng.integers(n)] = 1.0
        p = p / p.sum()
    return p


def _dist(rng, pts):
    return Dist(pts, _probs(rng, len(pts)))


def _metric_space(rng, n) -> FiniteMetricSpace:
    """Truncated Euclidean metric on random points, or occasionally the discrete one."""
    pts = _labels("m", n)
    if rng.random() < 0.15:
        return discrete_space(pts)
    xy = rng.random((n, 2)) * rng.uniform(0.3, 2.0)
    d = np.minimum(1.0, np.linalg.norm(xy[:, None] - xy[None, :], axis=-1))
    return metric_validate(pts, d)


def _nonexpansive_kleisli(rng, sx: FiniteMetricSpace, sy: FiniteMetricSpace) -> KleisliMap:
    # (1 - t) sigma + t k(x) moves any two rows by at most t <= min d_X
    nx, ny = len(sx), len(sy)
    t = 1.0 if nx == 1 else float(sx.d[~np.eye(nx, dtype=bool)].min()) * rng.random()
    sigma = _probs(rng, ny)
    k = rng.dirichlet(np.ones(ny), size=nx)
    m = (1 - t) * sigma[None, :] + t * k
    return KleisliMap(sx.points, sy.points, m / m.sum(axis=1, keepdims=True))


def _density(rng, n) -> np.ndarray:
    rank = int(rng.integers(1, n + 1))
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def _effects_batch(rng, n, count) -> np.ndarray:
    g = rng.normal(size=(count, n, n)) + 1j * rng.normal(size=(count, n, n))
    q, _ = np.linalg.qr(g)
    lam = rng.random((count, n))
    snap = rng.random(count) < 0.2
    lam[snap] = np.round(lam[snap])
    return np.einsum("kij,kj,klj->kil", q, lam, q.conj())


def _hermitian(rng, n, degenerate=False) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    if degenerate:
        q, _ = np.linalg.qr(g)
        lam = rng.integers(-2, 3, size=n).astype(float)
        return (q * lam) @ dagger(q)
    return (g + dagger(g)) / 2


def _maxabs(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


# -- dist-core ---------------------------------------------------------------

@check("dist-core", "tvd-metric-axioms", 500, SUM_TOL)
def _tvd_metric(rng, k, t):
    pts = _labels("p", int(rng.integers(1, 9)))
    a, b, c = (_dist(rng, pts) for _ in range(3))
    ab, ba, bc, ac = tvd(a, b), tvd(b, a), tvd(b, c), tvd(a, c)
    t.residual(tvd(a, a), "d(a,a)")
    t.residual(abs(ab - ba), "symmetry")
    t.residual(ac - ab - bc, "triangle")
    t.residual(max(-ab, ab - 1), "range")
    t.holds(ab > SUM_TOL or _maxabs(a.probs, b.probs) <= 2 * SUM_TOL, "zero distance for distinct states")


@check("dist-core", "validity-transformation", 500, 1e-12)
def _validity_transformation(rng, k, t):
    xs = _labels("x", int(rng.integers(1, 7)))
    ys = _labels("y", int(rng.integers(1, 7)))
    f = KleisliMap(xs, ys, rng.dirichlet(np.ones(len(ys)), size=len(xs)))
    omega = _dist(rng, xs)
    q = FuzzyPredicate(ys, rng.random(len(ys)))
    t.residual(abs(validity(state_transform(f, omega), q) - validity(omega, pred_transform(f, q))))


@check("dist-core", "tvd-sharp-duality", 500, 1e-9)
def _tvd_brute(rng, k, t):
    n = int(rng.integers(1, 13))
    pts = _labels("p", n)
    a, b = _dist(rng, pts), _dist(rng, pts)
    masks = (np.arange(2 ** n)[:, None] >> np.arange(n)) & 1
    best = float((masks @ (a.probs - b.probs)).max())
    t.residual(abs(best - tvd(a, b)))


@check("dist-core", "tvd-witness-gap", 500, 1e-12)
def _tvd_witness(rng, k, t):
    pts = _labels("p", int(rng.integers(1, 13)))
    a, b = _dist(rng, pts), _dist(rng, pts)
    chosen, gap = tvd_witness(a, b)
    t.residual(abs(gap - tvd(a, b)))
    t.holds(all(a[x] > b[x] for x in chosen), "witness contains a point with omega1 <= omega2")


# -- metric-core -------------------------------------------------------------

@check("metric-core", "kvd-discrete-equals-tvd", 500, DUAL_TOL)
def _kvd_discrete(rng, k, t):
    space = discrete_space(_labels("p", int(rng.integers(1, 7))))
    a, b = _dist(rng, space.points), _dist(rng, space.points)
    t.residual(abs(kantorovich(space, a, b) - tvd(a, b)))


@check("metric-core", "kvd-strong-duality", 500, DUAL_TOL)
def _kvd_duality(rng, k, t):
    space = _metric_space(rng, int(rng.integers(1, 7)))
    a, b = _dist(rng, space.points), _dist(rng, space.points)
    plan = transport_plan(space, a, b)
    p, gap = lipschitz_witness(space, a, b)
    t.residual(abs(plan.value - gap), "primal vs dual")
    t.residual(abs(plan.value - abs(validity(a, p.as_predicate()) - validity(b, p.as_predicate()))),
               "witness validity gap")
    excess = np.abs(p.values[:, None] - p.values[None, :]) - space.d
    t.residual(max(0.0, float(excess.max())), "witness expansive")


@check("metric-core", "kvd-below-tvd", 500, MET_TOL)
def _kvd_below_tvd(rng, k, t):
    space = _metric_space(rng, int(rng.integers(1, 7)))
    a, b = _dist(rng, space.points), _dist(rng, space.points)
    t.residual(max(0.0, kantorovich(space, a, b) - tvd(a, b)))


@check("metric-core", "kvd-metric-axioms", 300, MET_TOL)
def _kvd_metric(rng, k, t):
    space = _metric_space(rng, int(rng.integers(1, 7)))
    a, b, c = (_dist(rng, space.points) for _ in range(3))
    ab, ba = kantorovich(space, a, b), kantorovich(space, b, a)
    t.residual(kantorovich(space, a, a), "d(a,a)")
    t.residual(abs(ab - ba), "symmetry")
    t.residual(kantorovich(space, a, c) - ab - kantorovich(space, b, c), "triangle")
    t.residual(max(-ab, ab - 1), "range")


@check("metric-core", "state-transformer-nonexpansive", 200, MET_TOL)
def _state_nonexpansive(rng, k, t):
    sx = _metric_space(rng, int(rng.integers(1, 6)))
    sy = _metric_space(rng, int(rng.integers(1, 6)))
    f = _nonexpansive_kleisli(rng, sx, sy)
    report = check_nonexpansive_kleisli(sx, sy, f)
    t.holds(report.ok, f"generated map is expansive by {report.excess:.3g}")
    a, b = _dist(rng, sx.points), _dist(rng, sx.points)
    t.residual(kantorovich(sy, state_transform(f, a), state_transform(f, b)) - kantorovich(sx, a, b))


@check("metric-core", "predicate-transformer-nonexpansive", 500, MET_TOL)
def _pred_nonexpansive(rng, k, t):
    sx = _metric_space(rng, int(rng.integers(1, 7)))
    sy = _metric_space(rng, int(rng.integers(1, 7)))
    f = _nonexpansive_kleisli(rng, sx, sy)
    q1 = FuzzyPredicate(sy.points, mcshane_envelope(sy, rng.random(len(sy))))
    q2 = FuzzyPredicate(sy.points, mcshane_envelope(sy, rng.random(len(sy))))
    p1, p2 = pred_transform(f, q1), pred_transform(f, q2)
    excess = np.abs(p1.values[:, None] - p1.values[None, :]) - sx.d
    t.residual(max(0.0, float(excess.max())), "f^*(q) expansive")
    t.residual(sup_distance(p1, p2) - sup_distance(q1, q2), "sup distance grew")


@check("metric-core", "kvd-convex-combination", 500, MET_TOL)
def _kvd_convex(rng, k, t):
    space = _metric_space(rng, int(rng.integers(1, 7)))
    s1, s2, t1, t2 = (_dist(rng, space.points) for _ in range(4))
    r = float(rng.random())

    def mix(x, y):
        p = r * x.probs + (1 - r) * y.probs
        return Dist(space.points, p / p.sum())

    lhs = kantorovich(space, mix(s1, s2), mix(t1, t2))
    rhs = r * kantorovich(space, s1, t1) + (1 - r) * kantorovich(space, s2, t2)
    t.residual(lhs - rhs)


# -- transport ---------------------------------------------------------------

def _transport_problem(rng, m_max=6, n_max=6) -> TransportProblem:
    m, n = int(rng.integers(1, m_max + 1)), int(rng.integers(1, n_max + 1))
    if rng.random() < 0.4:
        # coarse grid values provoke degenerate bases and ties
        cost = rng.integers(0, 4, size=(m, n)) / 3
        a = rng.multinomial(8, np.ones(m) / m) / 8
        b = rng.multinomial(8, np.ones(n) / n) / 8
    else:
        cost = rng.random((m, n))
        a, b = _probs(rng, m), _probs(rng, n)
    return TransportProblem(cost, a, b)


@check("transport", "strong-duality", 500, DUAL_TOL)
def _transport_duality(rng, k, t):
    prob = _transport_problem(rng)
    plan = solve_transport(prob)
    t.residual(abs(plan.value - (plan.u @ prob.supply + plan.v @ prob.demand)), "primal vs dual")
    t.residual(max(0.0, float((plan.u[:, None] + plan.v[None, :] - prob.cost).max())), "dual infeasible")


@check("transport", "plan-marginals", 500, SUM_TOL)
def _transport_marginals(rng, k, t):
    prob = _transport_problem(rng)
    plan = solve_transport(prob).plan
    t.residual(_maxabs(plan.sum(axis=1), prob.supply))
    t.residual(_maxabs(plan.sum(axis=0), prob.demand))
    t.holds(plan.min() >= 0, "negative flow")


@check("transport", "determinism", 100, 0.0)
def _transport_determinism(rng, k, t):
    prob = _transport_problem(rng)
    p1, p2 = solve_transport(prob), solve_transport(prob)
    t.holds(p1.plan.tobytes() == p2.plan.tobytes() and p1.u.tobytes() == p2.u.tobytes()
            and p1.v.tobytes() == p2.v.tobytes() and p1.basis == p2.basis, "plans differ")


@check("transport", "brute-force-small", 300, 1e-9)
def _transport_brute(rng, k, t):
    prob = _transport_problem(rng, 3, 3)
    if prob.shape[0] * prob.shape[1] > 12:
        return
    t.residual(abs(solve_transport(prob).value - brute_force_transport(prob)))


# -- quantum-core ------------------------------------------------------------

@check("quantum-core", "trd-metric-axioms", 200, 1e-8)
def _trd_metric(rng, k, t):
    n = int(rng.integers(2, 6))
    a, b, c = (_density(rng, n) for _ in range(3))
    ab = trd(a, b)
    t.residual(trd(a, a), "d(a,a)")
    t.residual(abs(ab - trd(b, a)), "symmetry")
    t.residual(trd(a, c) - ab - trd(b, c), "triangle")
    t.residual(max(-ab, ab - 1), "range")


@check("quantum-core", "trd-duality", 200, 1e-8)
def _trd_duality(rng, k, t):
    n = int(rng.integers(2, 5))
    a, b = _density(rng, n), _density(rng, n)
    d = trd(a, b)
    effects = _effects_batch(rng, n, 1000)
    gaps = np.einsum("ij,kji->k", a - b, effects).real
    t.residual(max(0.0, float(np.abs(gaps).max()) - d), "random effect beats trd")
    w, gap = trd_witness(a, b)
    t.residual(abs(gap - d), "witness gap")
    t.holds(w.sharp, "witness is not a projection")


@check("quantum-core", "classical-embedding", 500, 1e-12)
def _classical_embedding(rng, k, t):
    pts = _labels("p", int(rng.integers(1, 7)))
    a, b = _dist(rng, pts), _dist(rng, pts)
    ra, rb = diagonal_embedding(a, b)
    t.residual(abs(trd(ra, rb) - tvd(a, b)))


@check("quantum-core", "jordan-trace", 200, 1e-8)
def _jordan(rng, k, t):
    n = int(rng.integers(1, 6))
    h = _density(rng, n) - _density(rng, n)
    pos, neg = jordan_decompose(h)
    t.residual(abs(np.trace(pos).real - np.trace(neg).real), "tr H+ vs tr H-")
    t.residual(_maxabs(pos - neg, h), "H+ - H- vs H")
    t.residual(float(np.abs(pos @ neg).max()), "parts not orthogonal")


@check("quantum-core", "herm-eig-residual", 160, EIG_TOL)
def _herm_eig(rng, k, t):
    n = 1 + k % 16
    h = _hermitian(rng, n, degenerate=rng.random() < 0.3)
    if rng.random() < 0.1:
        h = np.diag(np.diag(h))
    eig = herm_eig(h)
    v = eig.vectors
    t.residual(_maxabs((v * eig.values) @ dagger(v), h), "reconstruction")
    t.residual(_maxabs(dagger(v) @ v, np.eye(n)), "orthonormality")
    t.holds(bool(np.all(np.diff(eig.values) <= 0)), "eigenvalues not descending")


@check("quantum-core", "mat-abs-square", 200, 1e-8)
def _mat_abs(rng, k, t):
    n = int(rng.integers(1, 6))
    a = _hermitian(rng, n) if k % 2 else rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = mat_abs(a)
    t.residual(_maxabs(m @ m, dagger(a) @ a))
    t.residual(max(0.0, -float(np.linalg.eigvalsh((m + dagger(m)) / 2)[0])), "|A| not positive")


@check("quantum-core", "vld-equals-trd", 200, 1e-9)
def _vld(rng, k, t):
    n = int(rng.integers(2, 5))
    a, b = _density(rng, n), _density(rng, n)
    t.residual(abs(vld(a, b) - trd(a, b)))


@check("quantum-core", "vld-direct-sum", 100, 1e-9)
def _vld_blocks(rng, k, t):
    blocks = [int(s) for s in rng.integers(1, 3, size=int(rng.integers(1, 4)))]
    n = sum(blocks)

    def block_state():
        rho = np.zeros((n, n), dtype=complex)
        w = rng.dirichlet(np.ones(len(blocks)))
        start = 0
        for s, weight in zip(blocks, w):
            rho[start:start + s, start:start + s] = weight * _density(rng, s)
            start += s
        return rho

    a, b = block_state(), block_state()
    t.residual(abs(vld(a, b, blocks) - trd(a, b)))


# -- effect-module -----------------------------------------------------------

class _Sampler:
    """A randomly sized model with element generators."""

    def __init__(self, kind, rng):
        self.rng = rng
        self.kind = kind
        if kind == "fuzzy":
            self.n = int(rng.integers(1, 7))
            self.M = FuzzyModel(_labels("x", self.n))
        elif kind == "matrix":
            self.n = int(rng.integers(1, 5))
            self.M = MatrixEffectModel(self.n)
        else:
            self.n = 1
            self.M = UnitIntervalModel()

    def elem(self):
        rng = self.rng
        if self.kind == "fuzzy":
            v = rng.random(self.n)
            snap = rng.random(self.n) < 0.15
            v[snap] = np.round(v[snap])
            return v
        if self.kind == "matrix":
            return random_effect(rng, self.n)
        return float(rng.random())

    def below(self, z):
        """A random element ``<= z``."""
        rng = self.rng
        if self.kind == "fuzzy":
            return rng.random(self.n) * z
        if self.kind == "matrix":
            lam, vec = np.linalg.eigh(z)
            root = (vec * np.sqrt(np.clip(lam, 0, None))) @ dagger(vec)
            e = root @ random_effect(rng, self.n) @ root
            return (e + dagger(e)) / 2
        return float(rng.random()) * z

    def diff(self, x, y) -> float:
        return _maxabs(x, y)

    def norm(self, x) -> float:
        return self.M.direct_ard(x, self.M.zero())


def _eq(t, S, x, y, note):
    t.residual(S.diff(x, y), note)


def _chain_meet(M, xs):
    """Meet of a finite chain: its least element."""
    for x in xs:
        if all(M.leq(x, y) for y in xs):
            return x
    raise ValueError("not a chain")


def _law(name, cases=1000, tol=PSD_TOL):
    def register(fn):
        for kind in ("fuzzy", "matrix", "scalar"):
            def run(rng, k, t, kind=kind):
                fn(_Sampler(kind, rng), t)
            REGISTRY.append(Check("effect-module", f"{name}[{kind}]", cases, tol, run))
        return fn
    return register


@_law("pcm-commutative-unit")
def _pcm_comm(S, t):
    M = S.M
    x = S.elem()
    y = S.below(M.perp(x))
    _eq(t, S, ovee(M, x, y), ovee(M, y, x), "x+y vs y+x")
    _eq(t, S, ovee(M, x, M.zero()), x, "x+0")
    _eq(t, S, ovee(M, x, M.perp(x)), M.one(), "x+x^perp")
    _eq(t, S, M.perp(M.perp(x)), x, "perp involution")
    t.holds(M.summable(x, M.one()) == (S.norm(x) <= PSD_TOL), "x+1 defined iff x = 0")


@_law("pcm-associative")
def _pcm_assoc(S, t):
    M = S.M
    x = S.elem()
    y = S.below(M.perp(x))
    z = S.below(M.perp(M.add(x, y)))
    _eq(t, S, ovee(M, ovee(M, x, y), z), ovee(M, x, ovee(M, y, z)), "(x+y)+z vs x+(y+z)")


@_law("scalar-bihomomorphism")
def _scalar_bihom(S, t):
    M = S.M
    x = S.elem()
    y = S.below(M.perp(x))
    r, s = S.rng.random(2)
    s = s * (1 - r)
    _eq(t, S, M.scalar(r, ovee(M, x, y)), ovee(M, M.scalar(r, x), M.scalar(r, y)), "r(x+y)")
    _eq(t, S, M.scalar(r + s, x), ovee(M, M.scalar(r, x), M.scalar(s, x)), "(r+s)x")
    _eq(t, S, M.scalar(1.0, x), x, "1x")
    _eq(t, S, M.scalar(r, M.scalar(s, x)), M.scalar(r * s, x), "r(sx)")


@_law("ominus-a")
def _ominus_a(S, t):
    M = S.M
    x = S.elem()
    _eq(t, S, ominus(M, x, M.zero()), x, "x - 0")
    _eq(t, S, ominus(M, x, x), M.zero(), "x - x")


@_law("ominus-b")
def _ominus_b(S, t):
    M = S.M
    z = S.elem()
    y = S.below(z)
    x = ominus(M, z, y)
    _eq(t, S, ovee(M, x, y), z, "(z - y) + y vs z")
    x2 = S.elem()
    y2 = S.below(M.perp(x2))
    _eq(t, S, ominus(M, ovee(M, x2, y2), y2), x2, "(x + y) - y vs x")


@_law("ominus-c")
def _ominus_c(S, t):
    M = S.M
    z = S.elem()
    y = S.below(z)
    w = ominus(M, z, y)
    if S.rng.random() < 0.5:
        x = M.scalar(float(S.rng.random()), w)
    else:
        x = M.add(w, M.scalar(float(S.rng.uniform(0.2, 1.0)), M.perp(z)))
    lhs = M.summable(x, y) and M.leq(M.add(x, y), z)
    rhs = M.leq(x, w)
    t.holds(lhs == rhs, f"x+y <= z is {lhs} but x <= z - y is {rhs}")


@_law("ominus-d")
def _ominus_d(S, t):
    M = S.M
    y = S.elem()
    z = S.below(M.perp(y))
    x = S.below(y)
    _eq(t, S, ominus(M, ovee(M, y, z), x), ovee(M, ominus(M, y, x), z), "(y+z)-x vs (y-x)+z")


@_law("ominus-e")
def _ominus_e(S, t):
    M = S.M
    z = S.elem()
    y = S.below(z)
    x = S.below(y)
    t.holds(M.leq(ominus(M, y, x), ominus(M, z, x)), "y - x not below z - x")


@_law("ominus-f")
def _ominus_f(S, t):
    M = S.M
    y = S.elem()
    x = ovee(M, y, S.below(M.perp(y)))
    w = ominus(M, x, y)
    if S.rng.random() < 0.5:
        z = ovee(M, w, S.below(M.perp(x)))
    else:
        z = M.scalar(float(S.rng.uniform(0.0, 0.8)), w)
    lhs = M.leq(x, ovee(M, y, z))
    rhs = M.leq(w, z)
    t.holds(lhs == rhs, f"x <= y+z is {lhs} but x - y <= z is {rhs}")


@_law("ominus-g")
def _ominus_g(S, t):
    M = S.M
    y = S.elem()
    x = S.below(y)
    r = float(S.rng.random())
    _eq(t, S, ominus(M, M.scalar(r, y), M.scalar(r, x)), M.scalar(r, ominus(M, y, x)), "ry - rx")


@_law("ominus-h")
def _ominus_h(S, t):
    M = S.M
    r, s = sorted(S.rng.random(2))
    _eq(t, S, ominus(M, M.scalar(s, M.one()), M.scalar(r, M.one())), M.scalar(s - r, M.one()), "s - r")


@_law("ominus-i")
def _ominus_i(S, t):
    M = S.M
    y = S.elem()
    if S.kind == "matrix":
        # scalar multiples of 1 form a chain, so both meets exist
        top = 1.0 - float(np.linalg.eigvalsh(y)[-1])
        family = [M.scalar(max(0.0, top) * float(S.rng.random()), M.one()) for _ in range(3)]
        meet = M.meet
        outer = lambda xs: _chain_meet(M, xs)  # noqa: E731
    else:
        family = [S.below(M.perp(y)) for _ in range(3)]
        meet = outer = M.meet
    _eq(t, S, ovee(M, y, meet(family)), outer([ovee(M, y, s) for s in family]), "y + meet S")


@_law("scalar-meet")
def _scalar_meet(S, t):
    M = S.M
    rs = S.rng.random(int(S.rng.integers(1, 5)))
    _eq(t, S, M.scalar(float(rs.min()), M.one()), M.meet([M.scalar(float(r), M.one()) for r in rs]), "meet")


@_law("norm-item")
def _norm_item(S, t):
    M = S.M
    y = S.elem()
    x = S.below(y)
    d = ard(M, x, y)
    gap = ominus(M, y, x)
    for r in np.linspace(0.0, 1.0, 21):
        if abs(r - d) <= 1e-7:
            continue
        below = M.leq(gap, M.scalar(float(r), M.one()))
        t.holds((d <= r) == below, f"ard={d:.12g} but y - x <= {r:g} is {below}")


@_law("sum-continuity", tol=10 * CAUCHY_TOL)
def _continuity(S, t):
    M = S.M
    x = S.elem()
    y = S.below(M.perp(x))
    n = 30
    shrink = 1.0 - 2.0 ** -n
    t.residual(ard(M, ovee(M, M.scalar(shrink, x), M.scalar(shrink, y)), ovee(M, x, y)))


@_law("ard-direct", cases=500, tol=1e-8)
def _ard_direct(S, t):
    M = S.M
    x, y = S.elem(), S.elem()
    t.residual(abs(ard(M, x, y) - M.direct_ard(x, y)))


@_law("pred-validity-witness", cases=500, tol=1e-8)
def _pred_validity(S, t):
    M = S.M
    x, y = S.elem(), S.elem()
    value, state = pred_validity_distance(M, x, y)
    t.residual(abs(value - M.direct_ard(x, y)), "value")
    t.residual(abs(abs(state_validity(M, state, x) - state_validity(M, state, y)) - value), "witness gap")


@_law("ascending-completeness", cases=200, tol=2 * PSD_TOL)
def _completeness(S, t):
    M = S.M
    x = S.elem()
    z = S.below(M.perp(x))
    q = float(S.rng.uniform(0.3, 0.7))
    N = int(math.ceil(math.log(CAUCHY_TOL / 10) / math.log(q))) + 1
    seq = [ovee(M, x, M.scalar(1.0 - q ** k, z)) for k in range(1, N + 1)]
    res = sup_of_ascending(M, seq)
    t.holds(res.converged, f"Cauchy gap {res.residual:.3g} not below tolerance")
    tail = q ** N * S.norm(z)
    t.residual(max(0.0, ard(M, res.element, ovee(M, x, z)) - tail))


@_law("archimedean-probe", cases=200)
def _archimedean(S, t):
    M = S.M
    y = S.elem()
    if S.rng.random() < 0.5:
        x = S.below(y)
    else:
        x = S.elem()
    t.holds(archimedean_check(M, x, y, 20), "premise holds but conclusion fails")


# -- triangle ----------------------------------------------------------------

@check("triangle", "kleisli-round-trip", 100, 1e-9)
def _tri_kleisli(rng, k, t):
    xs = _labels("x", int(rng.integers(1, 7)))
    ys = _labels("y", int(rng.integers(1, 7)))
    m = np.stack([_probs(rng, len(ys)) for _ in xs])
    f = KleisliMap(xs, ys, m)
    g = emod_hom_to_kleisli(EmodHomBlackBox(ys, xs, lambda q: pred_transform(f, q)))
    t.residual(_maxabs(g.matrix, f.matrix))
    t.residual(_maxabs(g.matrix.sum(axis=1), 1.0), "rows not stochastic")


@check("triangle", "dist-round-trip", 100, 1e-9)
def _tri_dist(rng, k, t):
    omega = _dist(rng, _labels("x", int(rng.integers(1, 7))))
    back = emod_map_to_dist(EmodMapBlackBox(omega.points, lambda p: validity(omega, p)))
    t.residual(_maxabs(back.probs, omega.probs))
    t.residual(abs(back.probs.sum() - 1), "not normalized")


@check("triangle", "predicate-round-trip", 100, 1e-9)
def _tri_pred(rng, k, t):
    pts = _labels("x", int(rng.integers(1, 7)))
    p = FuzzyPredicate(pts, rng.random(len(pts)))
    back = affine_map_to_predicate(AffineMapBlackBox(pts, lambda w: validity(w, p)))
    t.residual(_maxabs(back.values, p.values))
    t.holds(back.values.min() >= 0 and back.values.max() <= 1, "values leave [0, 1]")


@check("triangle", "effect-round-trip", 100, 1e-8)
def _tri_effect(rng, k, t):
    n = int(rng.integers(1, 5))
    e = random_effect(rng, n)
    back = affine_state_map_to_effect(
        AffineStateMapBlackBox(n, lambda rho: float(np.einsum("ij,ji->", rho.data, e).real)))
    t.residual(_maxabs(back, e))
    lam = np.linalg.eigvalsh(back)
    t.holds(lam[0] >= -PSD_TOL and lam[-1] <= 1 + PSD_TOL, "reconstruction is not an effect")


# -- cli ---------------------------------------------------------------------

@check("cli", "report-determinism", 1, 0.0)
def _determinism(rng, k, t):
    seed = int(rng.integers(0, 2 ** 32))
    first = run_suites(seed, "transport", scale=0.1).to_text()
    second = run_suites(seed, "transport", scale=0.1).to_text()
    t.holds(first == second, "reports differ between identical runs")


@check("cli", "entwinedness-examples", 1, 1e-12)
def _entwine_examples(rng, k, t):
    omega = Dist((pair_label("a", "0"), pair_label("b", "1")), [0.5, 0.5])
    t.residual(abs(classical_entwinedness(omega) - 0.5), "classical")
    t.residual(abs(quantum_entwinedness(bell_state(), (2, 2)) - 0.75), "quantum")
    sigma = DensityMatrix(np.kron(_density(rng, 2), _density(rng, 3)))
    t.residual(quantum_entwinedness(sigma, (2, 3)), "product state")
