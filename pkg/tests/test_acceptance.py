"""Exit criteria, each checked at its stated tolerance and sample size.

One PASS/FAIL line per criterion is printed in the pytest terminal
summary, or directly when this file is run as a script.
"""
import io
import json
import time

import numpy as np
import pytest

from stateffect.cli import run
from stateffect.dist import Dist, pair_label, product_of_marginals, tvd, tvd_witness
from stateffect.entwine import classical_entwinedness
from stateffect.metric import discrete_space, kantorovich, lipschitz_witness, transport_plan
from stateffect.quantum import bell_state, dagger, kron, mat_abs, partial_trace, trd, trd_witness, vld

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, tuple[bool, str]] = {}
SEED = 20240611


def record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    return ok


def best_time(fn, repeats=50):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def random_density(rng, n):
    rank = int(rng.integers(1, n + 1))
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


# -- 1 -----------------------------------------------------------------------

def criterion_1():
    omega = Dist((pair_label("a", "0"), pair_label("b", "1")), [0.5, 0.5])
    value = tvd(omega, product_of_marginals(omega))
    chosen, gap = tvd_witness(omega, product_of_marginals(omega))
    seconds = best_time(lambda: classical_entwinedness(omega))
    ok = abs(value - 0.5) <= 1e-12 and abs(gap - 0.5) <= 1e-12 and seconds < 1e-3
    return record(1, ok, f"tvd={value:.12g} witness={sorted(chosen)} median {seconds * 1e3:.3f} ms")


# -- 2 -----------------------------------------------------------------------

REFERENCE_ABS = np.array([[0.5, 0, 0, 0.5],
                        [0, 0.25, 0, 0],
                        [0, 0, 0.25, 0],
                        [0.5, 0, 0, 0.5]])


def bell_pipeline():
    beta = bell_state().data
    product = kron(partial_trace(beta, (2, 2), "first"), partial_trace(beta, (2, 2), "second"))
    return beta, product, trd(beta, product)


def criterion_2():
    beta, product, value = bell_pipeline()
    seconds = best_time(bell_pipeline)
    computed = mat_abs(beta - product)
    entry_gap = float(np.abs(computed - REFERENCE_ABS).max())
    value_ok = abs(value - 0.75) <= 1e-9 and seconds < 1e-2
    matrix_ok = entry_gap <= 1e-9
    detail = (f"trd={value:.12g} median {seconds * 1e3:.3f} ms; "
              f"|beta - beta1(x)beta2| differs from the reference matrix by {entry_gap:.3g} "
              f"(computed corners {computed[0, 3].real:.12g}, reference 0.5)")
    record(2, value_ok and matrix_ok, detail)
    return value_ok, matrix_ok


# -- 3 -----------------------------------------------------------------------

def criterion_3():
    rng = np.random.default_rng([SEED, 3])
    worst_brute = worst_witness = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 13))
        pts = tuple(f"p{i}" for i in range(n))
        a, b = Dist(pts, rng.dirichlet(np.ones(n))), Dist(pts, rng.dirichlet(np.ones(n)))
        masks = (np.arange(2 ** n)[:, None] >> np.arange(n)) & 1
        brute = float((masks @ (a.probs - b.probs)).max())
        _, gap = tvd_witness(a, b)
        worst_brute = max(worst_brute, abs(brute - tvd(a, b)))
        worst_witness = max(worst_witness, abs(gap - brute))
    ok = worst_brute <= 1e-9 and worst_witness <= 1e-9
    return record(3, ok, f"500 pairs: |brute - tvd| <= {worst_brute:.3g}, |witness - brute| <= {worst_witness:.3g}")


# -- 4 -----------------------------------------------------------------------

def criterion_4():
    rng = np.random.default_rng([SEED, 4])
    worst_tvd = worst_dual = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 7))
        space = discrete_space([f"p{i}" for i in range(n)])
        a, b = Dist(space.points, rng.dirichlet(np.ones(n))), Dist(space.points, rng.dirichlet(np.ones(n)))
        primal = transport_plan(space, a, b).value
        _, gap = lipschitz_witness(space, a, b)
        worst_tvd = max(worst_tvd, abs(kantorovich(space, a, b) - tvd(a, b)))
        worst_dual = max(worst_dual, abs(primal - gap))
    ok = worst_tvd <= 1e-7 and worst_dual <= 1e-7
    return record(4, ok, f"500 pairs: |kvd - tvd| <= {worst_tvd:.3g}, |primal - dual gap| <= {worst_dual:.3g}")


# -- 5 -----------------------------------------------------------------------

def criterion_5():
    rng = np.random.default_rng([SEED, 5])
    worst_gap, worst_excess = 0.0, -np.inf
    for _ in range(200):
        n = int(rng.integers(2, 5))
        a, b = random_density(rng, n), random_density(rng, n)
        d = trd(a, b)
        _, gap = trd_witness(a, b)
        g = rng.normal(size=(1000, n, n)) + 1j * rng.normal(size=(1000, n, n))
        q, _ = np.linalg.qr(g)
        effects = np.einsum("kij,kj,klj->kil", q, rng.random((1000, n)), q.conj())
        gaps = np.abs(np.einsum("ij,kji->k", a - b, effects).real)
        worst_gap = max(worst_gap, abs(gap - d))
        worst_excess = max(worst_excess, float(gaps.max()) - d)
    ok = worst_gap <= 1e-8 and worst_excess <= 1e-8
    return record(5, ok, f"200 pairs: |witness - trd| <= {worst_gap:.3g}, "
                         f"max random-effect gap - trd = {worst_excess:.3g}")


# -- 6 -----------------------------------------------------------------------

def criterion_6():
    rng = np.random.default_rng([SEED, 6])
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 5))
        a, b = random_density(rng, n), random_density(rng, n)
        worst = max(worst, abs(vld(a, b) - trd(a, b)))
    return record(6, worst <= 1e-9, f"200 pairs: |vld - trd| <= {worst:.3g}")


# -- 7 to 10 read the full verification report ------------------------------

_FULL = {}


def full_verify():
    if not _FULL:
        out, err = io.StringIO(), io.StringIO()
        t0 = time.perf_counter()
        code = run(["verify", "--suite", "all", "--seed", str(SEED), "--json"], out=out, err=err)
        _FULL.update(code=code, seconds=time.perf_counter() - t0, report=json.loads(out.getvalue()))
    return _FULL


def _select(report, names, models=("fuzzy", "matrix")):
    wanted = {f"{n}[{m}]" for n in names for m in models}
    return [c for c in report["checks"] if c["suite"] == "effect-module" and c["name"] in wanted]


LAWS = ["ominus-a", "ominus-b", "ominus-c", "ominus-d", "ominus-e", "ominus-f", "ominus-g", "ominus-h",
        "norm-item", "sum-continuity"]


def criterion_7():
    checks = _select(full_verify()["report"], LAWS, ("fuzzy", "matrix", "scalar"))
    failures = sum(c["failures"] for c in checks)
    small = [c["name"] for c in checks if c["cases"] < 1000]
    ok = len(checks) == 3 * len(LAWS) and failures == 0 and not small
    return record(7, ok, f"{len(checks)} law/model checks x 1000 cases, {failures} failures")


def criterion_8():
    checks = _select(full_verify()["report"], ["ard-direct", "pred-validity-witness"])
    worst = max(c["worst"] for c in checks)
    ok = len(checks) == 4 and all(c["cases"] >= 500 and c["failures"] == 0 for c in checks) and worst <= 1e-8
    return record(8, ok, f"fuzzy and matrix, 500 cases each: worst residual {worst:.3g}")


def criterion_9():
    checks = _select(full_verify()["report"], ["ascending-completeness"], ("fuzzy", "matrix", "scalar"))
    ok = len(checks) == 3 and all(c["cases"] >= 200 and c["failures"] == 0 for c in checks)
    worst = max(c["worst"] for c in checks)
    return record(9, ok, f"200 sequences per model: ard(sup, e_N) exceeds the tail bound by at most {worst:.3g}")


def criterion_10():
    full = full_verify()
    trips = [c for c in full["report"]["checks"] if c["suite"] == "triangle"]
    worst = max(c["worst"] for c in trips)
    ok = (len(trips) == 4 and all(c["cases"] >= 100 and c["failures"] == 0 for c in trips)
          and worst <= 1e-7 and full["code"] == 0 and full["seconds"] < 60)
    return record(10, ok, f"4 round trips x 100 trials: worst residual {worst:.3g}; "
                          f"full verify exit {full['code']} in {full['seconds']:.1f} s")


# -- pytest entry points -----------------------------------------------------

def test_criterion_1_classical_entwinedness():
    assert criterion_1(), RESULTS[1][1]


def test_criterion_2_trace_distance_of_bell_state():
    value_ok, _ = criterion_2()
    assert value_ok, RESULTS[2][1]


def test_criterion_2_intermediate_matrix_matches_reference_matrix():
    _, matrix_ok = criterion_2()
    assert matrix_ok, RESULTS[2][1]


def test_criterion_3_tvd_sharp_duality():
    assert criterion_3(), RESULTS[3][1]


def test_criterion_4_kantorovich_on_discrete_spaces():
    assert criterion_4(), RESULTS[4][1]


def test_criterion_5_trace_distance_duality():
    assert criterion_5(), RESULTS[5][1]


def test_criterion_6_validity_distance_equals_trace_distance():
    assert criterion_6(), RESULTS[6][1]


def test_criterion_7_effect_module_laws():
    assert criterion_7(), RESULTS[7][1]


def test_criterion_8_archimedean_distance_agreement():
    assert criterion_8(), RESULTS[8][1]


def test_criterion_9_completeness_probe():
    assert criterion_9(), RESULTS[9][1]


def test_criterion_10_round_trips_and_verify_runtime():
    assert criterion_10(), RESULTS[10][1]


def summary_lines():
    return [f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}" for n, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for fn in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
               criterion_7, criterion_8, criterion_9, criterion_10):
        fn()
    print("\n".join(summary_lines()))
