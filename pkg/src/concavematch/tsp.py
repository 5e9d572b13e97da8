"""Bipartite TSP with concave cost: exact solvers, matching-based cycle, bounds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._kernels import _held_karp
from .core import Instance, InstanceError
from .matching import crossing_matrix, match_noncrossing_dp

BRUTEFORCE_MAX_N = 6
EXACT_MAX_N = 9
SANDWICH_TOL = 1e-9


@dataclass(frozen=True)
class CycleResult:
    """Alternating cycle x_{xo[0]} y_{yo[0]} x_{xo[1]} ... y_{yo[n-1]} (back to start).

    ``edges`` lists the 2n (x index, y index) edges in visiting order.
    """

    x_order: tuple
    y_order: tuple
    cost: float

    @property
    def edges(self) -> list:
        n = len(self.x_order)
        out = []
        for i in range(n):
            out.append((self.x_order[i], self.y_order[i]))
            out.append((self.x_order[(i + 1) % n], self.y_order[i]))
        return out


def cycle_cost(inst: Instance, x_order, y_order) -> float:
    xo = np.asarray(x_order, dtype=np.int64)
    yo = np.asarray(y_order, dtype=np.int64)
    C = inst.cost_matrix()
    return float(C[xo, yo].sum() + C[np.roll(xo, -1), yo].sum())


def canonical_cycle(x_order, y_order) -> tuple[tuple, tuple]:
    """Rotate to start at x index 0 and orient toward the smaller adjacent y."""
    xo = list(x_order)
    yo = list(y_order)
    n = len(xo)
    r = xo.index(0)
    xo = xo[r:] + xo[:r]
    yo = yo[r:] + yo[:r]
    # reversed traversal: x0, y_{n-1}, x_{n-1}, ..., y_0
    if n > 1 and yo[-1] < yo[0]:
        xo = [xo[0]] + xo[1:][::-1]
        yo = yo[::-1]
    return tuple(xo), tuple(yo)


def _make(inst: Instance, x_order, y_order) -> CycleResult:
    xo, yo = canonical_cycle([int(v) for v in x_order], [int(v) for v in y_order])
    cyc = CycleResult(xo, yo, cycle_cost(inst, xo, yo))
    _check_cycle(inst, cyc)
    return cyc


def _check_cycle(inst: Instance, cyc: CycleResult) -> None:
    n = inst.n
    if sorted(cyc.x_order) != list(range(n)) or sorted(cyc.y_order) != list(range(n)):
        raise AssertionError("cycle does not visit every vertex exactly once")
    deg_x = np.zeros(n, dtype=int)
    deg_y = np.zeros(n, dtype=int)
    for i, j in cyc.edges:
        deg_x[i] += 1
        deg_y[j] += 1
    if np.any(deg_x != 2) or np.any(deg_y != 2):
        raise AssertionError("cycle vertex degrees differ from 2")


def tsp_bruteforce(inst: Instance) -> CycleResult:
    """Enumerate every (sigma, tau) with sigma(1) fixed; n <= 6."""
    n = inst.n
    if n > BRUTEFORCE_MAX_N:
        raise InstanceError(f"brute-force TSP limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    C = inst.cost_matrix()
    taus = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    best = (np.inf, None, None)
    for rest in itertools.permutations(range(1, n)):
        sigma = np.array((0,) + rest, dtype=np.int64)
        costs = C[sigma, taus].sum(axis=1) + C[np.roll(sigma, -1), taus].sum(axis=1)
        k = int(np.argmin(costs))
        if costs[k] < best[0] - 1e-12:
            best = (float(costs[k]), sigma, taus[k])
    return _make(inst, best[1], best[2])


def tsp_exact(inst: Instance) -> CycleResult:
    """Held-Karp over (visited x set, visited y set, endpoint); n <= 9."""
    n = inst.n
    if n > EXACT_MAX_N:
        raise InstanceError(f"exact TSP limited to n <= {EXACT_MAX_N}, got {n}")
    if n == 1:
        return _make(inst, [0], [0])
    _, xo, yo = _held_karp(inst.cost_matrix())
    return _make(inst, xo, yo)


def tsp_upper_from_matching(inst: Instance) -> CycleResult:
    """Visit the x's left to right, each followed by its optimal partner."""
    sigma = match_noncrossing_dp(inst).sigma
    xo = np.argsort(inst.x, kind="stable")
    yo = [sigma[i] for i in xo]
    return _make(inst, xo, yo)


def tsp_gap_bound(n: int, alpha: float) -> float:
    """Upper bound 1 + n^(1 - alpha) on TSP - 2 M for points in [0, 1]."""
    return 1.0 + n ** (1.0 - alpha)


def check_cycle_crossings(inst: Instance, cyc: CycleResult) -> int:
    """Max over cycle edges of the number of other edges crossing it."""
    e = np.array(cyc.edges, dtype=np.int64)
    cross = crossing_matrix(inst.x[e[:, 0]], inst.y[e[:, 1]])
    return int(cross.sum(axis=1).max())


def check_cycle_monotonicity(inst: Instance, cyc: CycleResult, tol: float = 1e-12) -> bool:
    """Exchange condition for edges (i,k), (j,l) with (i,l), (j,k) not in G.

    Only pairs whose 2-opt exchange leaves a single cycle are tested: in
    visiting order one edge must run x -> y and the other y -> x.
    """
    edges = cyc.edges
    present = set(edges)
    C = inst.cost_matrix()
    for p, q in itertools.combinations(range(len(edges)), 2):
        if (p - q) % 2 == 0:
            continue
        (i, k), (j, l) = edges[p], edges[q]
        if (i, l) in present or (j, k) in present:
            continue
        if C[i, k] + C[j, l] > C[i, l] + C[j, k] + tol:
            return False
    return True


def check_capelli_sandwich(inst: Instance) -> tuple[bool, bool]:
    """(0 <= TSP - 2M, TSP - 2M <= 1 + n^(1-alpha)) with exact TSP, n <= 6."""
    if inst.interval.lo < 0 or inst.interval.hi > 1:
        if inst.x.min() < 0 or inst.y.min() < 0 or inst.x.max() > 1 or inst.y.max() > 1:
            raise InstanceError("sandwich bound needs points in [0, 1]")
    tsp = tsp_bruteforce(inst).cost
    m = match_noncrossing_dp(inst).cost
    gap = tsp - 2 * m
    return gap >= -SANDWICH_TOL, gap <= tsp_gap_bound(inst.n, inst.alpha) + SANDWICH_TOL
