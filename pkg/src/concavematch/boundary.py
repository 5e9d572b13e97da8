"""Boundary functionals: free points at 0 and 1 added to both families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import Instance, InstanceError, UNIT, validate_instance
from .matching import MatchingResult, match_generic, match_noncrossing_dp
from .tsp import CycleResult, EXACT_MAX_N, tsp_exact

IMPROVE_TOL = 1e-12


@dataclass(frozen=True)
class BoundaryResult:
    """Best augmented configuration.

    ``placement`` = (x~ at 0, x~ at 1, y~ at 0, y~ at 1); the augmented
    instance lists the original points first, then x~ at 0, then x~ at 1
    (likewise for y), which is the index space of ``inner``.
    """

    cost: float
    m_used: int
    placement: tuple
    inner: Union[MatchingResult, CycleResult]
    augmented: Instance


def _require_open_strict(inst: Instance) -> None:
    if not inst.strict:
        raise InstanceError("boundary functionals need pairwise distinct points")
    pts = np.concatenate([inst.x, inst.y])
    if pts.min() <= 0.0 or pts.max() >= 1.0:
        raise InstanceError("boundary functionals need all points in the open interval (0, 1)")


def discrepancy_sup(inst: Instance) -> int:
    """max_t |#{x_i <= t} - #{y_i <= t}|."""
    if not inst.strict:
        raise InstanceError("discrepancy needs pairwise distinct points")
    pos = np.concatenate([inst.x, inst.y])
    sign = np.r_[np.ones(inst.n), -np.ones(inst.n)]
    walk = np.cumsum(sign[np.argsort(pos, kind="stable")])
    return int(np.abs(walk).max())


def augment(inst: Instance, placement) -> Instance:
    a0, a1, c0, c1 = placement
    xs = list(inst.xs) + [0.0] * a0 + [1.0] * a1
    ys = list(inst.ys) + [0.0] * c0 + [1.0] * c1
    return validate_instance(xs, ys, inst.alpha, UNIT)


def placements(m: int):
    for a in range(m + 1):
        for c in range(m + 1):
            yield (a, m - a, c, m - c)


def corner_placements(m: int):
    """Placements never putting x~ and y~ on the same endpoint.

    For matching these suffice: if x~ at 0 serves y_j and y~ at 0 serves x_i,
    pairing x_i with y_j and the two free points together costs no more, since
    |x_i - y_j|^alpha <= x_i^alpha + y_j^alpha.
    """
    if m == 0:
        yield (0, 0, 0, 0)
    else:
        yield (m, 0, 0, m)
        yield (0, m, m, 0)


def _search(inst, m_max, solve, layouts=placements) -> BoundaryResult:
    best = None
    for m in range(m_max + 1):
        for pl in layouts(m):
            aug = augment(inst, pl)
            res = solve(aug)
            if best is None or res.cost < best.cost - IMPROVE_TOL:
                best = BoundaryResult(res.cost, m, pl, res, aug)
    return best


def _matcher(solver: str):
    if solver == "generic":
        return match_generic
    if solver == "dp":
        return match_noncrossing_dp
    raise ValueError(f"unknown solver {solver!r}")


def match_boundary(inst: Instance, extra: int = 0, solver: str = "generic",
                   prune: bool = False) -> BoundaryResult:
    """M^D: minimise over m <= discrepancy + extra and every 0/1 placement.

    ``extra > 0`` widens the search past the cap, which should never help.
    ``prune`` searches only corner placements (same optimum, far fewer solves).
    """
    _require_open_strict(inst)
    cap = discrepancy_sup(inst)
    layouts = corner_placements if prune else placements
    return _search(inst, cap + extra, _matcher(solver), layouts)


def tsp_boundary(inst: Instance, extra: int = 0) -> BoundaryResult:
    """TSP^D: minimise over m <= discrepancy + 1 + extra, exact TSP each time."""
    _require_open_strict(inst)
    m_max = discrepancy_sup(inst) + 1 + extra
    if inst.n + m_max > EXACT_MAX_N:
        raise InstanceError(
            f"augmented size {inst.n + m_max} exceeds exact TSP range {EXACT_MAX_N}"
        )
    return _search(inst, m_max, tsp_exact)


def check_removal_bound(inst: Instance, m: int, tol: float = 1e-9) -> bool:
    """M(n+m) >= M(n) - m and TSP(n+m) >= TSP(n) - 2m, dropping the last m pairs."""
    n = inst.n - m
    if m < 0 or n < 1:
        raise InstanceError(f"cannot drop {m} pairs from an instance of size {inst.n}")
    if inst.x.min() < 0 or inst.y.min() < 0 or inst.x.max() > 1 or inst.y.max() > 1:
        raise InstanceError("removal bound needs points in [0, 1]")
    if inst.n > EXACT_MAX_N:
        raise InstanceError(f"removal check runs exact TSP, limited to {EXACT_MAX_N} pairs")
    head = validate_instance(inst.xs[:n], inst.ys[:n], inst.alpha, inst.interval)
    m_ok = match_generic(inst).cost >= match_generic(head).cost - m - tol
    t_ok = tsp_exact(inst).cost >= tsp_exact(head).cost - 2 * m - tol
    return m_ok and t_ok
