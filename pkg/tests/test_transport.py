import numpy as np
import pytest
from scipy.optimize import linprog

from stateffect.errors import DegeneracyLimit, Infeasible, NegativeProb, TooLarge
from stateffect.transport import TransportProblem, brute_force_transport, solve_transport


def lp_value(prob: TransportProblem) -> float:
    m, n = prob.shape
    rows = np.kron(np.eye(m), np.ones(n))
    cols = np.kron(np.ones(m), np.eye(n))
    res = linprog(prob.cost.ravel(), A_eq=np.vstack([rows, cols]),
                  b_eq=np.concatenate([prob.supply, prob.demand]), bounds=(0, None), method="highs")
    assert res.status == 0
    return float(res.fun)


def random_problem(rng, m, n, grid=False):
    if grid:
        return TransportProblem(rng.integers(0, 3, size=(m, n)) / 2,
                                rng.multinomial(6, np.ones(m) / m) / 6,
                                rng.multinomial(6, np.ones(n) / n) / 6)
    return TransportProblem(rng.random((m, n)), rng.dirichlet(np.ones(m)), rng.dirichlet(np.ones(n)))


def test_matching_marginals_with_free_diagonal():
    a = np.array([0.2, 0.3, 0.5])
    plan = solve_transport(TransportProblem(1 - np.eye(3), a, a))
    assert plan.value == 0.0
    np.testing.assert_allclose(plan.plan, np.diag(a))


def test_one_by_one():
    plan = solve_transport(TransportProblem([[0.4]], [1.0], [1.0]))
    assert plan.plan.tolist() == [[1.0]] and plan.value == 0.4


def test_two_vertex_example():
    plan = solve_transport(TransportProblem([[0.0, 1.0], [0.5, 1.0]], [0.5, 0.5], [1.0, 0.0]))
    assert abs(plan.value - 0.25) <= 1e-12


def test_point_masses_under_discrete_cost():
    prob = TransportProblem(1 - np.eye(2), [1.0, 0.0], [0.0, 1.0])
    assert solve_transport(prob).value == 1.0
    assert brute_force_transport(prob) == pytest.approx(1.0, abs=1e-12)
    assert brute_force_transport(TransportProblem(np.zeros((2, 2)), [0.5, 0.5], [0.5, 0.5])) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("grid", [False, True])
def test_agrees_with_linear_programming(rng, grid):
    for _ in range(150):
        prob = random_problem(rng, int(rng.integers(1, 8)), int(rng.integers(1, 8)), grid)
        plan = solve_transport(prob)
        assert abs(plan.value - lp_value(prob)) <= 1e-9


def test_certificate_invariants(rng):
    for _ in range(200):
        prob = random_problem(rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)), rng.random() < 0.5)
        plan = solve_transport(prob)
        u, v = plan.potentials
        slack = prob.cost - u[:, None] - v[None, :]
        assert slack.min() >= -1e-7
        assert np.all(np.abs(slack[plan.plan > 1e-9]) <= 1e-7)
        assert abs(plan.value - (u @ prob.supply + v @ prob.demand)) <= 1e-7
        np.testing.assert_allclose(plan.plan.sum(axis=1), prob.supply, atol=1e-9)
        np.testing.assert_allclose(plan.plan.sum(axis=0), prob.demand, atol=1e-9)
        assert abs(plan.value - (prob.cost * plan.plan).sum()) <= 1e-12


def test_brute_force_agrees_on_three_by_three(rng):
    for _ in range(200):
        prob = random_problem(rng, 3, 3, rng.random() < 0.5)
        assert abs(solve_transport(prob).value - brute_force_transport(prob)) <= 1e-9


def test_deterministic_output(rng):
    prob = random_problem(rng, 5, 4, grid=True)
    p1, p2 = solve_transport(prob), solve_transport(prob)
    assert p1.plan.tobytes() == p2.plan.tobytes() and p1.basis == p2.basis


def test_invalid_problems():
    with pytest.raises(Infeasible):
        TransportProblem([[0.0]], [1.0], [0.5])
    with pytest.raises(Infeasible):
        TransportProblem(np.zeros((2, 3)), [0.5, 0.5], [0.5, 0.5])
    with pytest.raises(NegativeProb):
        TransportProblem([[-1.0]], [1.0], [1.0])
    with pytest.raises(TooLarge):
        brute_force_transport(TransportProblem(np.zeros((4, 4)), np.ones(4) / 4, np.ones(4) / 4))


def test_pivot_cap_is_enforced(monkeypatch, rng):
    import stateffect.transport as transport

    monkeypatch.setattr(transport, "PIVOT_FACTOR", 0)
    prob = TransportProblem(np.array([[1.0, 0.0], [0.0, 1.0]]), [0.5, 0.5], [0.5, 0.5])
    with pytest.raises(DegeneracyLimit):
        solve_transport(prob)
