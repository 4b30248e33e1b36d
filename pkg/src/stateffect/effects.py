"""Effect modules: partial sum, orthosupplement, scalar action and the
Archimedean distance, over three concrete carriers.

``FuzzyModel``    fuzzy predicates on a finite set, as 1-D float arrays;
``MatrixEffectModel``  effects 0 <= e <= I on C^n, as complex arrays;
``UnitIntervalModel``  the scalars [0, 1], as floats.

The generic operations (``ovee``, ``ominus``, ``ard`` ...) only use the
model's primitive capabilities, so they can be checked against each
model's closed-form distance.
"""
from __future__ import annotations

from typing import Any, NamedTuple, Sequence

import numpy as np

from .dist import Dist, dirac
from .errors import NotAscending, NotBelow, NotSummable, UnsupportedLattice
from .quantum import DensityMatrix, herm_eig, min_eigenvalue, opnorm
from .tolerances import BISECT_ITERS, CAUCHY_TOL, PSD_TOL, SUM_TOL


class EffectModuleModel:
    """Capability record for a concrete effect module.

    Subclasses provide ``zero``, ``one``, ``leq``, ``perp``, ``add`` (the
    sum, without a summability check), ``scalar`` and ``equal``.
    ``direct_ard`` is an optional closed form for the Archimedean metric.
    """

    name = "abstract"
    tol = 0.0

    def zero(self): raise NotImplementedError
    def one(self): raise NotImplementedError
    def leq(self, x, y) -> bool: raise NotImplementedError
    def perp(self, x): raise NotImplementedError
    def add(self, x, y): raise NotImplementedError
    def scalar(self, r: float, x): raise NotImplementedError
    def equal(self, x, y, tol: float | None = None) -> bool: raise NotImplementedError

    def direct_ard(self, x, y) -> float | None:
        return None

    def summable(self, x, y) -> bool:
        return self.leq(x, self.perp(y))

    def meet(self, xs: Sequence[Any]):
        raise UnsupportedLattice(f"meets are not canonical in the {self.name} model")

    def join(self, xs: Sequence[Any]):
        raise UnsupportedLattice(f"joins are not canonical in the {self.name} model")


class FuzzyModel(EffectModuleModel):
    """[0, 1]^X with pointwise operations."""

    name = "fuzzy"
    tol = SUM_TOL

    def __init__(self, points: Sequence[str]):
        self.points = tuple(points)
        self.n = len(self.points)

    def zero(self):
        return np.zeros(self.n)

    def one(self):
        return np.ones(self.n)

    def leq(self, x, y):
        return bool(np.all(x <= y + SUM_TOL))

    def perp(self, x):
        return 1.0 - x

    def add(self, x, y):
        return x + y

    def scalar(self, r, x):
        return r * x

    def equal(self, x, y, tol=None):
        return bool(np.abs(x - y).max(initial=0.0) <= (SUM_TOL if tol is None else tol))

    def direct_ard(self, x, y):
        return float(np.abs(x - y).max(initial=0.0))

    def meet(self, xs):
        return np.min(np.stack(list(xs)), axis=0)

    def join(self, xs):
        return np.max(np.stack(list(xs)), axis=0)


class MatrixEffectModel(EffectModuleModel):
    """Effects on C^n with the positive-semidefinite order."""

    name = "matrix"
    tol = PSD_TOL

    def __init__(self, n: int):
        self.n = n
        self._eye = np.eye(n, dtype=complex)

    def zero(self):
        return np.zeros((self.n, self.n), dtype=complex)

    def one(self):
        return self._eye.copy()

    def leq(self, x, y):
        d = y - x
        return min_eigenvalue((d + d.conj().T) / 2) >= -PSD_TOL

    def perp(self, x):
        return self._eye - x

    def add(self, x, y):
        return x + y

    def scalar(self, r, x):
        return r * x

    def equal(self, x, y, tol=None):
        return bool(np.abs(x - y).max(initial=0.0) <= (PSD_TOL if tol is None else tol))

    def direct_ard(self, x, y):
        return opnorm(x - y)

    def meet(self, xs):
        # only scalar multiples of the identity have a canonical meet
        xs = list(xs)
        scalars = []
        for x in xs:
            s = x[0, 0].real
            if not self.equal(x, s * self._eye):
                raise UnsupportedLattice("meets of general matrix effects need not exist")
            scalars.append(s)
        return min(scalars) * self._eye


class UnitIntervalModel(EffectModuleModel):
    """The scalars [0, 1] with truncated arithmetic."""

    name = "scalar"
    tol = SUM_TOL

    def zero(self):
        return 0.0

    def one(self):
        return 1.0

    def leq(self, x, y):
        return x <= y + SUM_TOL

    def perp(self, x):
        return 1.0 - x

    def add(self, x, y):
        return x + y

    def scalar(self, r, x):
        return r * x

    def equal(self, x, y, tol=None):
        return abs(x - y) <= (SUM_TOL if tol is None else tol)

    def direct_ard(self, x, y):
        return abs(x - y)

    def meet(self, xs):
        return min(xs)

    def join(self, xs):
        return max(xs)


MODELS = ("fuzzy", "matrix", "scalar")


# -- generic operations ------------------------------------------------------

def ovee(M: EffectModuleModel, x, y):
    """Partial sum; defined iff ``x <= y^perp``."""
    if not M.summable(x, y):
        raise NotSummable(f"elements are not summable in the {M.name} model")
    return M.add(x, y)


def perp(M: EffectModuleModel, x):
    return M.perp(x)


def ominus(M: EffectModuleModel, y, x):
    """``y - x`` for ``x <= y``, as ``(y^perp + x)^perp``."""
    if not M.leq(x, y):
        raise NotBelow("ominus needs x <= y")
    return M.perp(ovee(M, M.perp(y), x))


def _half_gap_holds(M, x, y, r) -> bool:
    # 1/2 x <= 1/2 y + r/2 * 1
    return M.leq(M.scalar(0.5, x), ovee(M, M.scalar(0.5, y), M.scalar(r / 2, M.one())))


def _one_sided_inf(M, x, y, iters) -> float:
    if _half_gap_holds(M, x, y, 0.0):
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _half_gap_holds(M, x, y, mid):
            hi = mid
        else:
            lo = mid
    return hi


class ArdSides(NamedTuple):
    value: float
    left: float   # inf r with 1/2 x <= 1/2 y + r/2
    right: float  # inf r with 1/2 y <= 1/2 x + r/2


def ard_sides(M: EffectModuleModel, x, y, iters: int = BISECT_ITERS) -> ArdSides:
    left = _one_sided_inf(M, x, y, iters)
    right = _one_sided_inf(M, y, x, iters)
    return ArdSides(max(left, right), left, right)


def ard(M: EffectModuleModel, x, y, iters: int = BISECT_ITERS) -> float:
    """Archimedean distance by bisection on the order test, using only ovee/scalar/leq."""
    return ard_sides(M, x, y, iters).value


def norm(M: EffectModuleModel, x) -> float:
    return ard(M, M.zero(), x)


def pred_validity_distance(M: EffectModuleModel, x, y):
    """Largest validity gap between two predicates over all states, with a maximizing state.

    Fuzzy: a Dirac state at the largest pointwise difference. Matrix: the
    pure state on an eigenvector of ``x - y`` of largest modulus. Scalar:
    the unique state, the number 1.
    """
    if isinstance(M, FuzzyModel):
        diff = np.abs(x - y)
        k = int(np.argmax(diff)) if diff.size else 0
        return float(diff[k]), dirac(M.points[k], M.points)
    if isinstance(M, MatrixEffectModel):
        eig = herm_eig(x - y)
        k = 0 if abs(eig.values[0]) >= abs(eig.values[-1]) else -1
        return float(abs(eig.values[k])), DensityMatrix(np.outer(eig.vectors[:, k], eig.vectors[:, k].conj()))
    if isinstance(M, UnitIntervalModel):
        return abs(x - y), 1.0
    raise TypeError(f"no validity description for model {M.name}")


def state_validity(M: EffectModuleModel, state, x) -> float:
    """Validity of element ``x`` in a state of the matching kind."""
    if isinstance(M, FuzzyModel):
        probs = state.probs if isinstance(state, Dist) else np.asarray(state)
        return float(probs @ x)
    if isinstance(M, MatrixEffectModel):
        rho = state.data if isinstance(state, DensityMatrix) else np.asarray(state)
        return float(np.einsum("ij,ji->", rho, x).real)
    return float(state * x)


class AscendingSup(NamedTuple):
    element: Any
    residual: float
    converged: bool


def sup_of_ascending(M: EffectModuleModel, seq: Sequence[Any]) -> AscendingSup:
    """Join of a finite ascending chain, with the last Cauchy gap as residual.

    Fuzzy chains take the pointwise maximum; for other models the last
    element stands in for the join, which is accepted once the final
    gap ``ard(e_{N-1}, e_N)`` is below ``CAUCHY_TOL``.
    """
    seq = list(seq)
    if not seq:
        raise NotAscending("empty sequence")
    for k in range(len(seq) - 1):
        if not M.leq(seq[k], seq[k + 1]):
            raise NotAscending(f"element {k} is not below element {k + 1}")
    if isinstance(M, FuzzyModel) or isinstance(M, UnitIntervalModel):
        top = M.join(seq)
    else:
        top = seq[-1]
    residual = 0.0 if len(seq) < 2 else ard(M, seq[-2], seq[-1])
    return AscendingSup(top, residual, residual < CAUCHY_TOL)


def archimedean_check(M: EffectModuleModel, x, y, N: int) -> bool:
    """Finite probe of the Archimedean property.

    If ``1/2 x <= 1/2 y + 1/(2n) * 1`` holds for ``n = 1..N`` then
    ``x <= y`` must hold up to ``1/N`` slack. Returns whether that
    implication holds (vacuously true when the premise fails).
    """
    for n in range(1, N + 1):
        if not _half_gap_holds(M, x, y, 1.0 / n):
            return True
    slack = M.scalar(1.0 / N, M.one())
    if M.summable(y, slack):
        return M.leq(x, M.add(y, slack))
    # y + slack overflows 1; compare at half scale, where the sum exists
    return M.leq(M.scalar(0.5, x), M.add(M.scalar(0.5, y), M.scalar(0.5, slack)))
