"""Exact solver for the balanced transportation problem.

The solver is the transportation simplex (MODI / u-v method): a
north-west-corner starting basis, potentials from the basis tree, Bland's
smallest-index rule for both the entering and the leaving cell. Supplies
are perturbed by ``(i + 1) * 1e-12`` (the total added to the last demand)
so that every basis stays nondegenerate; the optimal basis is then
re-evaluated on the unperturbed data.

``brute_force_transport`` enumerates all bases and is meant as a test
oracle for tiny instances.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyLimit, Infeasible, NegativeProb, SolverFailure, TooLarge
from .tolerances import DUAL_TOL, SUM_TOL

PERTURB = 1e-12
REDUCED_COST_TOL = 1e-12
PIVOT_FACTOR = 50
BRUTE_FORCE_LIMIT = 12


@dataclass(frozen=True, eq=False)
class TransportProblem:
    cost: np.ndarray
    supply: np.ndarray
    demand: np.ndarray

    def __post_init__(self):
        cost = np.atleast_2d(np.asarray(self.cost, dtype=float))
        supply = np.asarray(self.supply, dtype=float)
        demand = np.asarray(self.demand, dtype=float)
        if cost.shape != (supply.size, demand.size):
            raise Infeasible(f"cost shape {cost.shape} vs {supply.size} supplies, {demand.size} demands")
        if np.any(cost < 0) or np.any(supply < 0) or np.any(demand < 0):
            raise NegativeProb("transport data must be nonnegative")
        if abs(supply.sum() - 1) > SUM_TOL or abs(demand.sum() - 1) > SUM_TOL:
            raise Infeasible(f"supply sums to {supply.sum():.17g}, demand to {demand.sum():.17g}")
        for name, arr in (("cost", cost), ("supply", supply), ("demand", demand)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def shape(self):
        return self.cost.shape


@dataclass(frozen=True, eq=False)
class TransportPlan:
    plan: np.ndarray
    value: float
    u: np.ndarray
    v: np.ndarray
    basis: tuple[tuple[int, int], ...]
    pivots: int

    @property
    def potentials(self):
        return self.u, self.v


def _northwest_corner(a, b):
    a = a.copy()
    b = b.copy()
    m, n = len(a), len(b)
    basis, x = [], {}
    i = j = 0
    while True:
        q = min(a[i], b[j])
        basis.append((i, j))
        x[i, j] = q
        a[i] -= q
        b[j] -= q
        if i == m - 1 and j == n - 1:
            break
        if j == n - 1 or (a[i] <= b[j] and i < m - 1):
            i += 1
        else:
            j += 1
    return basis, x


def _adjacency(basis, m):
    # nodes: rows 0..m-1, columns m..m+n-1
    adj: dict[int, list[tuple[int, tuple[int, int]]]] = {}
    for i, j in basis:
        adj.setdefault(i, []).append((m + j, (i, j)))
        adj.setdefault(m + j, []).append((i, (i, j)))
    return adj


def _potentials(cost, basis):
    m, n = cost.shape
    adj = _adjacency(basis, m)
    pot = np.full(m + n, np.nan)
    pot[0] = 0.0
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for other, (i, j) in adj.get(node, ()):
            if np.isnan(pot[other]):
                # u_i + v_j = c_ij
                pot[other] = cost[i, j] - pot[node]
                queue.append(other)
    if np.isnan(pot).any():
        raise SolverFailure("basis is not a spanning tree")
    return pot[:m], pot[m:]


def _tree_path(basis, m, start, goal):
    """Cells on the basis-tree path between two nodes, in order from ``start``."""
    adj = _adjacency(basis, m)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for other, cell in sorted(adj.get(node, ())):
            if other not in parent:
                parent[other] = (node, cell)
                queue.append(other)
    cells = []
    node = goal
    while parent[node] is not None:
        node, cell = parent[node]
        cells.append(cell)
    cells.reverse()
    return cells


def basic_solution(basis, supply, demand):
    """Solve for the basic variables of a spanning-tree basis by leaf elimination."""
    m, n = len(supply), len(demand)
    rest = np.concatenate([np.asarray(supply, float), np.asarray(demand, float)])
    cells = {(i, j) for i, j in basis}
    degree = np.zeros(m + n, dtype=int)
    for i, j in cells:
        degree[i] += 1
        degree[m + j] += 1
    x = {}
    while cells:
        leaves = [k for k in range(m + n) if degree[k] == 1]
        if not leaves:
            raise SolverFailure("basis contains a cycle")
        node = leaves[0]
        cell = next(c for c in sorted(cells) if c[0] == node or m + c[1] == node)
        i, j = cell
        other = m + j if node == i else i
        x[cell] = rest[node]
        rest[other] -= rest[node]
        rest[node] = 0.0
        cells.remove(cell)
        degree[i] -= 1
        degree[m + j] -= 1
    return x


def solve_transport(prob: TransportProblem) -> TransportPlan:
    """Optimal coupling for ``prob`` together with certifying dual potentials."""
    cost = prob.cost
    m, n = cost.shape
    a = prob.supply + PERTURB * np.arange(1, m + 1)
    b = prob.demand.copy()
    b[-1] += PERTURB * m * (m + 1) / 2

    basis, x = _northwest_corner(a, b)
    cap = PIVOT_FACTOR * m * n
    pivots = 0
    while True:
        u, v = _potentials(cost, basis)
        reduced = cost - u[:, None] - v[None, :]
        in_basis = np.zeros((m, n), dtype=bool)
        for cell in basis:
            in_basis[cell] = True
        candidates = np.argwhere((reduced < -REDUCED_COST_TOL) & ~in_basis)
        if candidates.size == 0:
            break
        if pivots >= cap:
            raise DegeneracyLimit(f"no optimum after {pivots} pivots")
        enter = tuple(int(t) for t in candidates[0])  # row-major smallest index
        path = _tree_path(basis, m, enter[0], m + enter[1])
        minus = path[0::2]
        theta = min(x[c] for c in minus)
        leave = min(c for c in minus if x[c] == theta)
        for k, c in enumerate(path):
            x[c] += theta if k % 2 else -theta
        x[enter] = theta
        del x[leave]
        basis = sorted(set(basis) - {leave} | {enter})
        pivots += 1

    exact = basic_solution(basis, prob.supply, prob.demand)
    plan = np.zeros((m, n))
    for cell, q in exact.items():
        if q < -SUM_TOL:
            raise SolverFailure(f"negative flow {q:.3g} at {cell}")
        plan[cell] = max(q, 0.0)
    u, v = _potentials(cost, basis)
    if np.any(u[:, None] + v[None, :] > cost + DUAL_TOL):
        raise SolverFailure("final potentials are not dual feasible")
    value = float((cost * plan).sum())
    for arr in (plan, u, v):
        arr.setflags(write=False)
    return TransportPlan(plan, value, u, v, tuple(basis), pivots)


def brute_force_transport(prob: TransportProblem) -> float:
    """Minimum cost over all basic feasible solutions. Only for ``m * n <= 12``."""
    m, n = prob.shape
    if m * n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"{m}x{n} exceeds the enumeration limit of {BRUTE_FORCE_LIMIT} cells")
    cells = [(i, j) for i in range(m) for j in range(n)]
    incidence = np.zeros((m + n, m * n))
    for k, (i, j) in enumerate(cells):
        incidence[i, k] = 1.0
        incidence[m + j, k] = 1.0
    rhs = np.concatenate([prob.supply, prob.demand])
    rank = m + n - 1
    best = np.inf
    for subset in itertools.combinations(range(m * n), rank):
        cols = incidence[:, subset]
        if np.linalg.matrix_rank(cols) < rank:
            continue
        sol, *_ = np.linalg.lstsq(cols, rhs, rcond=None)
        if np.any(sol < -1e-12) or np.abs(cols @ sol - rhs).max() > 1e-9:
            continue
        value = float(sum(prob.cost[cells[k]] * s for k, s in zip(subset, sol)))
        best = min(best, value)
    if not np.isfinite(best):
        raise SolverFailure("no feasible basis found")
    return best
