"""Dense complex-matrix kernels and distances between quantum states.

Hermitian eigendecompositions use a cyclic Jacobi sweep. Each rotation
first removes the phase of the pivot entry, which reduces the 2x2 block to
a real symmetric one, and then applies the classical Jacobi rotation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dist import Dist, align
from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotADensityMatrix,
    NotAnEffect,
    NotHermitian,
)
from .tolerances import (
    HERM_TOL,
    IM_TOL,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFF_TOL,
    PSD_TOL,
    SHARP_TOL_Q,
    SUM_TOL,
)


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermiticity_defect(a: np.ndarray) -> float:
    return float(np.abs(a - dagger(a)).max()) if a.size else 0.0


def _require_hermitian(a: np.ndarray) -> np.ndarray:
    defect = hermiticity_defect(a)
    if defect > HERM_TOL:
        raise NotHermitian(f"max |A - A^dagger| = {defect:.3g}")
    return (a + dagger(a)) / 2


def _same_dim(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimensions differ: {a.shape[0]} vs {b.shape[0]}")


class HermitianEigen(NamedTuple):
    values: np.ndarray   # descending
    vectors: np.ndarray  # columns are eigenvectors


def herm_eig(h) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius mass falls below
    ``1e-13`` relative to ``max(1, ||H||_F)``; at most 100 sweeps.
    """
    a = _require_hermitian(as_matrix(h))
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a[~np.eye(n, dtype=bool)])
        if off < JACOBI_OFF_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] acting on (p, q)
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = dagger(g) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    values = np.diag(a).real.copy()
    order = np.argsort(-values, kind="stable")
    return HermitianEigen(values[order], v[:, order])


def _rebuild(eig: HermitianEigen, f) -> np.ndarray:
    w = f(eig.values)
    return (eig.vectors * w) @ dagger(eig.vectors)


def mat_abs(a) -> np.ndarray:
    """``|A| = sqrt(A^dagger A)``; Hermitian inputs take ``V |diag(l)| V^dagger``."""
    m = as_matrix(a)
    if hermiticity_defect(m) <= HERM_TOL:
        return _rebuild(herm_eig(m), np.abs)
    return _rebuild(herm_eig(dagger(m) @ m), lambda lam: np.sqrt(np.clip(lam, 0.0, None)))


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(a, dims: tuple[int, int], side: str) -> np.ndarray:
    """Reduced operator on one factor of ``H1 (x) H2``.

    ``side="first"`` keeps ``H1`` (traces out ``H2``); ``side="second"``
    keeps ``H2``.
    """
    m = as_matrix(a)
    d1, d2 = dims
    if d1 * d2 != m.shape[0]:
        raise DimensionMismatch(f"{d1} x {d2} does not factor dimension {m.shape[0]}")
    t = m.reshape(d1, d2, d1, d2)
    if side == "first":
        return np.einsum("ijkj->ik", t)
    if side == "second":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"side must be 'first' or 'second', not {side!r}")


def opnorm(a) -> float:
    """Largest singular value; ``max |eigenvalue|`` for Hermitian input."""
    m = as_matrix(a)
    if hermiticity_defect(m) <= HERM_TOL:
        lam = herm_eig(m).values
        return float(max(abs(lam[0]), abs(lam[-1])))
    return float(np.sqrt(max(0.0, herm_eig(dagger(m) @ m).values[0])))


def min_eigenvalue(h: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix (LAPACK; used by order tests)."""
    return float(np.linalg.eigvalsh(h)[0])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Positive semidefinite matrix with unit trace."""

    data: np.ndarray

    def __post_init__(self):
        m = _require_hermitian(as_matrix(self.data))
        tr = np.trace(m).real
        if abs(tr - 1.0) > SUM_TOL:
            raise NotADensityMatrix(f"trace is {tr:.17g}")
        lo = min_eigenvalue(m)
        if lo < -PSD_TOL:
            raise NotADensityMatrix(f"negative eigenvalue {lo:.3g}")
        m.setflags(write=False)
        object.__setattr__(self, "data", m)

    @property
    def dim(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True, eq=False)
class Effect:
    """Hermitian matrix ``e`` with ``0 <= e <= I``."""

    data: np.ndarray

    def __post_init__(self):
        m = _require_hermitian(as_matrix(self.data))
        lam = np.linalg.eigvalsh(m) if m.size else np.zeros(0)
        if lam.size and (lam[0] < -PSD_TOL or lam[-1] > 1 + PSD_TOL):
            raise NotAnEffect(f"spectrum [{lam[0]:.3g}, {lam[-1]:.3g}] escapes [0, 1]")
        m.setflags(write=False)
        object.__setattr__(self, "data", m)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def sharp(self) -> bool:
        e = self.data
        return opnorm(e @ e - e) <= SHARP_TOL_Q


def _data(x) -> np.ndarray:
    return x.data if isinstance(x, (DensityMatrix, Effect)) else as_matrix(x)


def pure_state(vec) -> DensityMatrix:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()))


def diagonal_embedding(*dists: Dist) -> list[DensityMatrix]:
    """Diagonal density matrices over the union of the distributions' labels."""
    _, arrays = align(*dists)
    return [DensityMatrix(np.diag(a).astype(complex)) for a in arrays]


def trd(rho1, rho2) -> float:
    """Trace distance ``tr|rho1 - rho2| / 2``."""
    a, b = _data(rho1), _data(rho2)
    _same_dim(a, b)
    return float(min(1.0, max(0.0, 0.5 * np.trace(mat_abs(a - b)).real)))


def q_validity(rho, e) -> float:
    """``tr(rho e)``, checked real and clamped to [0, 1]."""
    a, b = _data(rho), _data(e)
    _same_dim(a, b)
    val = np.einsum("ij,ji->", a, b)
    if abs(val.imag) > IM_TOL:
        raise NotHermitian(f"validity has imaginary part {val.imag:.3g}")
    return float(min(1.0, max(0.0, val.real)))


def jordan_decompose(h) -> tuple[np.ndarray, np.ndarray]:
    """Split a Hermitian matrix into orthogonal positive and negative parts."""
    eig = herm_eig(h)
    pos = np.where(eig.values > PSD_TOL, eig.values, 0.0)
    neg = np.where(eig.values < -PSD_TOL, -eig.values, 0.0)
    vecs = eig.vectors
    return (vecs * pos) @ dagger(vecs), (vecs * neg) @ dagger(vecs)


def support_projection(h) -> np.ndarray:
    """Projection onto the span of eigenvectors with eigenvalue above ``PSD_TOL``."""
    eig = herm_eig(h)
    keep = eig.vectors[:, eig.values > PSD_TOL]
    return keep @ dagger(keep)


def trd_witness(rho1, rho2) -> tuple[Effect, float]:
    """Sharp effect attaining the trace distance, with its validity gap."""
    a, b = _data(rho1), _data(rho2)
    _same_dim(a, b)
    s = support_projection(a - b)
    gap = q_validity(a, s) - q_validity(b, s)
    return Effect(s), float(gap)


def vld(rho1, rho2, blocks: list[int] | None = None) -> float:
    """Validity distance: largest validity gap over all effects.

    For a direct sum of matrix algebras pass the block sizes; the states
    must then be block diagonal and the optimal sharp effect is assembled
    block by block.
    """
    a, b = _data(rho1), _data(rho2)
    _same_dim(a, b)
    if not blocks:
        return trd_witness(a, b)[1]
    if sum(blocks) != a.shape[0]:
        raise DimensionMismatch(f"blocks {blocks} do not add up to {a.shape[0]}")
    mask = np.zeros(a.shape, dtype=bool)
    start = 0
    for k in blocks:
        mask[start:start + k, start:start + k] = True
        start += k
    if np.abs(a[~mask]).max(initial=0) > HERM_TOL or np.abs(b[~mask]).max(initial=0) > HERM_TOL:
        raise DimensionMismatch("states are not block diagonal for the given blocks")
    s = np.zeros_like(a)
    start = 0
    for k in blocks:
        sl = slice(start, start + k)
        s[sl, sl] = support_projection(a[sl, sl] - b[sl, sl])
        start += k
    return float(q_validity(a, s) - q_validity(b, s))


def bell_state() -> DensityMatrix:
    return pure_state([1, 0, 0, 1])
