"""Hölder and variation seminorms, oscillation and Stieltjes sums on grids."""

from __future__ import annotations

import numpy as np

from .core import GridFunction, InstanceError, check_alpha

# above this many nodes the exact O(N^2) DP is replaced by bounds
EXACT_PVAR_LIMIT = 20_000


def holder_seminorm(f: GridFunction, alpha: float) -> float:
    """max_{i<j} |f_j - f_i| / (t_j - t_i)^alpha over the grid nodes."""
    alpha = check_alpha(alpha)
    t, v = f.grid, f.values
    best = 0.0
    # row-by-row keeps memory at O(N)
    for i in range(t.size - 1):
        r = np.abs(v[i + 1:] - v[i]) / (t[i + 1:] - t[i]) ** alpha
        best = max(best, float(r.max()))
    return best


def oscillation(f: GridFunction) -> float:
    return float(f.values.max() - f.values.min())


def p_variation(f: GridFunction, p: float) -> float:
    """Exact p-variation of the grid values (supremum over sub-partitions).

    Uses best[j] = max_{i<j} best[i] + |f_j - f_i|^p. ``p = inf`` gives the
    oscillation. For grids longer than ``EXACT_PVAR_LIMIT`` use
    :func:`p_variation_bounds`.
    """
    if p == np.inf:
        return oscillation(f)
    if p < 1:
        raise InstanceError(f"variation exponent must be >= 1, got {p}")
    v = f.values
    if v.size > EXACT_PVAR_LIMIT:
        raise InstanceError("grid too long for the exact DP; use p_variation_bounds")
    best = np.zeros(v.size)
    for j in range(1, v.size):
        best[j] = np.max(best[:j] + np.abs(v[j] - v[:j]) ** p)
    return float(best.max() ** (1.0 / p))


def p_variation_bruteforce(f: GridFunction, p: float) -> float:
    """Exhaustive maximisation over all index subsequences (N <= 20)."""
    v = f.values
    N = v.size
    if N > 20:
        raise InstanceError("brute-force p-variation is limited to 20 nodes")
    best = 0.0
    for mask in range(1, 1 << N):
        idx = [i for i in range(N) if mask >> i & 1]
        # sum left to right, the order in which the DP accumulates
        s = 0.0
        for term in np.abs(np.diff(v[idx])) ** p:
            s += term
        best = max(best, s)
    return float(best ** (1.0 / p))


def p_variation_bounds(f: GridFunction, p: float, block: int = 256) -> tuple[float, float]:
    """Cheap (lower, upper) bracket on the p-variation for long grids.

    Lower: exact DP on the block-wise extrema. Upper:
    3^(p-1) * (sum of block p-var^p + n_blocks * osc^p).
    """
    if p == np.inf:
        osc = oscillation(f)
        return osc, osc
    v = f.values
    # lower bound: keep block-wise argmin/argmax nodes, then exact DP
    keep = {0, v.size - 1}
    for s in range(0, v.size, block):
        seg = v[s:s + block]
        keep.add(s + int(np.argmin(seg)))
        keep.add(s + int(np.argmax(seg)))
    idx = np.array(sorted(keep))
    while idx.size > EXACT_PVAR_LIMIT:
        idx = idx[::2]
    lower = p_variation(f.restrict(idx), p)
    # upper bound: an increment straddling block edges splits into two
    # in-block pieces plus a middle piece bounded by the oscillation
    nb = int(np.ceil((v.size - 1) / block))
    total = 0.0
    for s in range(0, v.size - 1, block):
        seg = f.restrict(slice(s, min(s + block + 1, v.size)))
        total += p_variation(seg, p) ** p
    upper = (3 ** (p - 1)) * (total + nb * oscillation(f) ** p)
    return lower, upper ** (1.0 / p)


def refine(f: GridFunction, g: GridFunction) -> tuple[GridFunction, GridFunction]:
    """Linearly interpolate both arguments onto the merged grid."""
    grid = np.union1d(f.grid, g.grid)
    return GridFunction(grid, f(grid)), GridFunction(grid, g(grid))


def young_integral(f: GridFunction, g: GridFunction, rule: str = "stieltjes") -> float:
    """Riemann-Stieltjes integral of f against g on a common grid.

    ``rule="stieltjes"`` returns sum f(t_i) (g_i - g_{i-1}), the limit of
    left-point sums under mesh refinement when g is the right-continuous step
    through its nodes and f is continuous; it matches the atoms produced by
    :func:`concavematch.kyot.increments`.  ``rule="left"`` returns the plain
    left-point sum sum f(t_{i-1}) (g_i - g_{i-1}) on the given grid.
    """
    if f.grid.shape != g.grid.shape or np.any(f.grid != g.grid):
        raise InstanceError("young_integral needs a common grid; call refine() first")
    dg = np.diff(g.values)
    if rule == "stieltjes":
        return float(np.dot(f.values[1:], dg))
    if rule == "left":
        return float(np.dot(f.values[:-1], dg))
    raise ValueError(f"unknown rule {rule!r}")
