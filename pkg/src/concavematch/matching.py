"""Exact solvers for the concave-cost assignment problem and its validators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._kernels import _level_dp
from .core import Instance, InstanceError

BRUTEFORCE_MAX_N = 9
GENERIC_MAX_N = 3000
MONOTONE_TOL = 1e-12


@dataclass(frozen=True)
class MatchingResult:
    """x_i is matched to y_{sigma[i]} (0-based indices into the instance)."""

    sigma: tuple
    cost: float

    def pairs(self, inst: Instance):
        return [(inst.xs[i], inst.ys[j]) for i, j in enumerate(self.sigma)]


def assignment_cost(inst: Instance, sigma) -> float:
    sigma = np.asarray(sigma, dtype=np.int64)
    return float(np.sum(np.abs(inst.x - inst.y[sigma]) ** inst.alpha))


def _result(inst: Instance, sigma) -> MatchingResult:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(inst.n)):
        raise AssertionError(f"solver returned a non-permutation {sigma}")
    return MatchingResult(sigma, assignment_cost(inst, sigma))


def match_bruteforce(inst: Instance) -> MatchingResult:
    """Exhaustive minimum over all n! permutations.

    Among permutations within 1e-12 of the optimum the lexicographically
    smallest is returned.
    """
    n = inst.n
    if n > BRUTEFORCE_MAX_N:
        raise InstanceError(f"brute force limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    C = inst.cost_matrix()
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    costs = C[np.arange(n), perms].sum(axis=1)
    best = int(np.flatnonzero(costs <= costs.min() + 1e-12)[0])
    return _result(inst, perms[best])


def match_generic(inst: Instance) -> MatchingResult:
    """Optimal assignment on the dense |x - y|^alpha cost matrix."""
    if inst.n > GENERIC_MAX_N:
        raise InstanceError(f"dense assignment limited to n <= {GENERIC_MAX_N}")
    rows, cols = linear_sum_assignment(inst.cost_matrix())
    sigma = np.empty(inst.n, dtype=np.int64)
    sigma[rows] = cols
    return _result(inst, sigma)


def noncrossing_pairing(pos, sign, alpha: float) -> tuple[float, np.ndarray]:
    """Optimal non-crossing pairing of +1 and -1 labelled points on the line.

    Returns (cost, partner) with ``partner[i]`` the index paired to point i.
    A block i..j can be matched internally only if it holds as many +1 as -1
    points, so a pair always joins two points at which the running count of
    (+1) - (-1) labels crosses the same level. The interval recursion
    dp[i][j] = min_k c(i, k) + dp[i+1][k-1] + dp[k+1][j] is therefore run
    separately on each level, where labels alternate.
    """
    pos = np.asarray(pos, dtype=float)
    sign = np.asarray(sign, dtype=np.int64)
    if pos.size == 0:
        return 0.0, np.empty(0, dtype=np.int64)
    if sign.sum() != 0:
        raise InstanceError("labels are unbalanced")
    order = np.argsort(pos, kind="stable")
    s = sign[order]
    before = np.cumsum(s) - s
    level = np.where(s > 0, before, before - 1)
    by_level = np.lexsort((np.arange(s.size), level))
    lv = level[by_level]
    starts = np.flatnonzero(np.r_[True, lv[1:] != lv[:-1], True]).astype(np.int64)
    grouped = order[by_level]
    partner_local = np.full(pos.size, -1, dtype=np.int64)
    cost = _level_dp(pos[grouped], starts, float(alpha), partner_local)
    partner = np.empty(pos.size, dtype=np.int64)
    partner[grouped] = grouped[partner_local]
    return float(cost), partner


def match_noncrossing_dp(inst: Instance) -> MatchingResult:
    n = inst.n
    pos = np.concatenate([inst.x, inst.y])
    sign = np.r_[np.ones(n, dtype=np.int64), -np.ones(n, dtype=np.int64)]
    _, partner = noncrossing_pairing(pos, sign, inst.alpha)
    return _result(inst, partner[:n] - n)


def match_cost(inst: Instance) -> float:
    """Optimal assignment cost via the non-crossing DP."""
    return match_noncrossing_dp(inst).cost


def check_monotonicity(inst: Instance, sigma) -> bool:
    """Pairwise exchange condition; True iff no swap of two partners helps."""
    sigma = np.asarray(sigma, dtype=np.int64)
    x, y, a = inst.x, inst.y[sigma], inst.alpha
    own = np.abs(x - y) ** a
    lhs = own[:, None] + own[None, :]
    rhs = np.abs(x[:, None] - y[None, :]) ** a + np.abs(x[None, :] - y[:, None]) ** a
    return bool(np.all(lhs <= rhs + MONOTONE_TOL))


def crossing_matrix(a, b) -> np.ndarray:
    """crossing[i, j]: open intervals with ends (a_i, b_i), (a_j, b_j) partially overlap."""
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    l1, h1 = lo[:, None], hi[:, None]
    l2, h2 = lo[None, :], hi[None, :]
    return ((l1 < l2) & (l2 < h1) & (h1 < h2)) | ((l2 < l1) & (l1 < h2) & (h2 < h1))


def check_noncrossing(inst: Instance, sigma) -> bool:
    sigma = np.asarray(sigma, dtype=np.int64)
    return not bool(crossing_matrix(inst.x, inst.y[sigma]).any())
