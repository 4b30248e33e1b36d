import numpy as np
import pytest

from stateffect.dist import Dist, tvd, tvd_witness
from stateffect.errors import DimensionMismatch, NoConvergence, NotADensityMatrix, NotAnEffect, NotHermitian
from stateffect.quantum import (
    DensityMatrix,
    Effect,
    bell_state,
    dagger,
    diagonal_embedding,
    herm_eig,
    jordan_decompose,
    kron,
    mat_abs,
    opnorm,
    partial_trace,
    pure_state,
    q_validity,
    support_projection,
    trace,
    trd,
    trd_witness,
    vld,
)

from conftest import bell_vector

QUARTER = np.eye(4) / 4


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (g + dagger(g)) / 2


def random_density(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def bell_gap():
    return bell_state().data - QUARTER


def test_eig_of_diagonal_and_swap():
    assert herm_eig(np.diag([0.3, 0.7])).values.tolist() == [0.7, 0.3]
    eig = herm_eig([[0, 1], [1, 0]])
    np.testing.assert_allclose(eig.values, [1, -1], atol=1e-15)
    assert abs(abs(np.vdot(eig.vectors[:, 0], [1, 1])) - np.sqrt(2)) < 1e-12


def test_eig_of_bell_gap():
    np.testing.assert_allclose(herm_eig(bell_gap()).values, [0.75, -0.25, -0.25, -0.25], atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
def test_eig_against_lapack(rng, n):
    h = random_hermitian(rng, n)
    eig = herm_eig(h)
    np.testing.assert_allclose(eig.values, np.linalg.eigvalsh(h)[::-1], atol=1e-10)
    v = eig.vectors
    assert np.abs((v * eig.values) @ dagger(v) - h).max() <= 1e-8
    assert np.abs(dagger(v) @ v - np.eye(n)).max() <= 1e-8


def test_eig_with_repeated_eigenvalues(rng):
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    h = (q * np.array([1, 1, 1, -2, -2, 0.5])) @ dagger(q)
    eig = herm_eig(h)
    np.testing.assert_allclose(eig.values, [1, 1, 1, 0.5, -2, -2], atol=1e-12)


def test_eig_rejects_non_hermitian_and_reports_stalls(monkeypatch):
    with pytest.raises(NotHermitian):
        herm_eig([[0, 1], [0, 0]])
    import stateffect.quantum as quantum

    monkeypatch.setattr(quantum, "JACOBI_MAX_SWEEPS", 0)
    with pytest.raises(NoConvergence):
        quantum.herm_eig([[0, 1], [1, 0]])


def test_abs_of_bell_gap_squares_to_gap_squared():
    # independent oracle: |D| is the PSD square root of D^2
    m = mat_abs(bell_gap())
    np.testing.assert_allclose(m @ m, bell_gap() @ bell_gap(), atol=1e-12)
    b = bell_vector()
    np.testing.assert_allclose(m, QUARTER + 0.5 * np.outer(b, b.conj()), atol=1e-12)
    np.testing.assert_allclose(np.diag(m).real, [0.5, 0.25, 0.25, 0.5], atol=1e-12)
    assert trace(m).real == pytest.approx(1.5)


def test_abs_simple_cases(rng):
    np.testing.assert_allclose(mat_abs(np.diag([0.3, -0.3])), np.diag([0.3, 0.3]), atol=1e-15)
    assert np.all(mat_abs(np.zeros((3, 3))) == 0)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = mat_abs(a)
    np.testing.assert_allclose(m @ m, dagger(a) @ a, atol=1e-10)


def test_partial_trace_and_kron_on_bell_state():
    beta = bell_state().data
    np.testing.assert_allclose(partial_trace(beta, (2, 2), "second"), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(partial_trace(beta, (2, 2), "first"), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(kron(np.eye(2) / 2, np.eye(2) / 2), QUARTER)
    assert trace(beta) == pytest.approx(1.0)


def test_partial_trace_keeps_the_named_factor(rng):
    a, b = random_density(rng, 2), random_density(rng, 3)
    ab = np.kron(a, b)
    np.testing.assert_allclose(partial_trace(ab, (2, 3), "first"), a, atol=1e-12)
    np.testing.assert_allclose(partial_trace(ab, (2, 3), "second"), b, atol=1e-12)
    with pytest.raises(DimensionMismatch):
        partial_trace(ab, (2, 2), "first")


def test_trace_distance_of_bell_state():
    assert abs(trd(bell_state(), QUARTER) - 0.75) <= 1e-12
    assert trd(bell_state(), bell_state()) == pytest.approx(0.0, abs=1e-15)
    assert abs(vld(bell_state(), QUARTER) - 0.75) <= 1e-12
    assert opnorm(bell_gap()) == pytest.approx(0.75)


def test_trace_distance_witness_for_bell_state():
    s, gap = trd_witness(bell_state(), QUARTER)
    b = bell_vector()
    np.testing.assert_allclose(s.data, np.outer(b, b.conj()), atol=1e-12)
    assert s.sharp and gap == pytest.approx(0.75)
    zero, gap0 = trd_witness(bell_state(), bell_state())
    assert np.all(zero.data == 0) and gap0 == 0.0


def test_diagonal_embedding_reduces_to_classical(rng):
    a = Dist(("x", "y", "z"), [0.5, 0.2, 0.3])
    b = Dist(("x", "y", "z"), [0.1, 0.6, 0.3])
    ra, rb = diagonal_embedding(a, b)
    assert trd(ra, rb) == pytest.approx(tvd(a, b), abs=1e-12)
    s, _ = trd_witness(ra, rb)
    chosen, _ = tvd_witness(a, b)
    np.testing.assert_allclose(np.diag(s.data).real, [1.0 if x in chosen else 0.0 for x in a.points], atol=1e-12)


def test_validity_examples():
    b = bell_vector()
    proj = np.outer(b, b.conj())
    assert q_validity(bell_state(), np.eye(4)) == pytest.approx(1.0)
    assert q_validity(bell_state(), proj) == pytest.approx(1.0)
    assert q_validity(QUARTER, proj) == pytest.approx(0.25)
    with pytest.raises(DimensionMismatch):
        q_validity(QUARTER, np.eye(2))


def test_jordan_decomposition():
    pos, neg = jordan_decompose(np.diag([0.3, -0.3]))
    np.testing.assert_allclose(pos, np.diag([0.3, 0]), atol=1e-15)
    np.testing.assert_allclose(neg, np.diag([0, 0.3]), atol=1e-15)
    pos, neg = jordan_decompose(bell_gap())
    b = bell_vector()
    np.testing.assert_allclose(pos, 0.75 * np.outer(b, b.conj()), atol=1e-12)
    assert np.trace(pos).real == pytest.approx(np.trace(neg).real)


def test_opnorm_cases(rng):
    assert opnorm(np.eye(3)) == pytest.approx(1.0)
    assert opnorm(np.diag([0.2, -0.9])) == pytest.approx(0.9)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert opnorm(a) == pytest.approx(np.linalg.norm(a, 2))


def test_trace_distance_dominates_random_effects(rng):
    for _ in range(30):
        a, b = random_density(rng, 3), random_density(rng, 3)
        d = trd(a, b)
        _, gap = trd_witness(a, b)
        assert gap == pytest.approx(d, abs=1e-10)
        # dual route: half the l1 norm of the LAPACK spectrum
        assert d == pytest.approx(0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum(), abs=1e-10)
        for _ in range(50):
            q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
            e = (q * rng.random(3)) @ dagger(q)
            assert abs(q_validity(a, e) - q_validity(b, e)) <= d + 1e-10


def test_block_diagonal_validity_distance(rng):
    a = np.zeros((3, 3), dtype=complex)
    b = np.zeros((3, 3), dtype=complex)
    a[:2, :2], a[2, 2] = 0.6 * random_density(rng, 2), 0.4
    b[:2, :2], b[2, 2] = 0.3 * random_density(rng, 2), 0.7
    assert vld(a, b, [2, 1]) == pytest.approx(trd(a, b), abs=1e-12)
    with pytest.raises(DimensionMismatch):
        vld(random_density(rng, 3), a, [2, 1])


def test_state_and_effect_validation():
    with pytest.raises(NotADensityMatrix):
        DensityMatrix(np.eye(2))
    with pytest.raises(NotADensityMatrix):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(NotAnEffect):
        Effect(np.diag([1.2, 0.0]))
    assert Effect(np.diag([1.0, 0.0])).sharp and not Effect(np.eye(2) / 2).sharp
    assert pure_state([1, 1j]).dim == 2
    assert support_projection(np.diag([1e-12, 0.5])).tolist() == [[0, 0], [0, 1]]
