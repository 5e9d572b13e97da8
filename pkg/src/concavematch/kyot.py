"""Transport norm of bridge-like grid functions on an interval.

A bridge g (g(a) = g(b)) is read through its increment measure dg = mu+ - mu-.
Its W_alpha norm sup{ int f dg : [f]_alpha <= 1 } equals the cheapest
|t - s|^alpha transport between the two parts; coupling convention:
sum mass * (f(target) - f(source)) = int f dg, so mass leaves mu- atoms and
arrives at mu+ atoms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import GridFunction, Instance, InstanceError, check_alpha, counting_difference
from .matching import noncrossing_pairing
from .seminorms import holder_seminorm, young_integral

DEFAULT_QUANTIZATION = 4096
INTEGER_TOL = 1e-9
FEASIBLE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SignedAtomicMeasure:
    locations: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        loc = np.array(self.locations, dtype=float).reshape(-1)
        mass = np.array(self.masses, dtype=float).reshape(-1)
        if loc.shape != mass.shape:
            raise InstanceError("locations and masses differ in length")
        if np.any(np.diff(loc) <= 0):
            raise InstanceError("atom locations must be strictly increasing")
        scale = max(1.0, float(np.abs(mass).sum()))
        if abs(mass.sum()) > 1e-12 * scale:
            raise InstanceError(f"measure is unbalanced (total mass {mass.sum():.3e})")
        object.__setattr__(self, "locations", loc)
        object.__setattr__(self, "masses", mass)

    def __len__(self):
        return self.locations.size

    @property
    def positive_mass(self) -> float:
        return float(self.masses[self.masses > 0].sum())

    def is_integral(self) -> bool:
        return bool(np.all(np.abs(self.masses - np.rint(self.masses)) <= INTEGER_TOL))


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Finitely many moves; mass leaves ``sources`` and lands on ``targets``."""

    sources: np.ndarray
    targets: np.ndarray
    masses: np.ndarray

    def __len__(self):
        return self.masses.size

    def energy(self, alpha: float) -> float:
        return float(np.sum(self.masses * np.abs(self.targets - self.sources) ** alpha))

    def divergence_pairing(self, f) -> float:
        """sum mass * (f(target) - f(source)) for a callable f."""
        return float(np.sum(self.masses * (f(self.targets) - f(self.sources))))

    def flows(self) -> tuple[dict, dict]:
        """(outflow per source location, inflow per target location)."""
        out, inn = {}, {}
        for s, t, m in zip(self.sources, self.targets, self.masses):
            out[s] = out.get(s, 0.0) + m
            inn[t] = inn.get(t, 0.0) + m
        return out, inn


EMPTY_PLAN = TransportPlan(np.empty(0), np.empty(0), np.empty(0))


@dataclass(frozen=True, eq=False)
class KYResult:
    norm: float
    plan: TransportPlan
    quantization: int
    quantum: float = 1.0
    # additive bound on |norm - exact norm| caused by rounding (0 when exact)
    error_bound: float = 0.0
    extra: dict = field(default_factory=dict)


def increments(g: GridFunction) -> SignedAtomicMeasure:
    """Atoms g_i - g_{i-1} at t_i, zero masses dropped."""
    scale = max(1.0, float(np.abs(g.values).max()))
    if not g.is_bridge(1e-12 * scale):
        raise InstanceError("increments need a bridge: g(first) != g(last)")
    d = np.diff(g.values)
    keep = d != 0
    masses = d[keep]
    # telescoping leaves only rounding noise; absorb it into the last atom
    if masses.size:
        masses[-1] -= masses.sum()
    return SignedAtomicMeasure(g.grid[1:][keep], masses)


def unit_measure(inst: Instance) -> SignedAtomicMeasure:
    """+1 at each x_i, -1 at each y_i (coincident points net out)."""
    return increments(counting_difference(inst))


def _quantize(mu: SignedAtomicMeasure, quantization: int) -> tuple[np.ndarray, float]:
    """Integer unit counts per atom plus the mass of one unit."""
    if mu.is_integral():
        return np.rint(mu.masses).astype(np.int64), 1.0
    if quantization <= 0:
        raise InstanceError("non-integral masses need a positive quantization")
    quantum = mu.positive_mass / quantization
    # round the running sum, not each atom, so the units balance exactly
    cum = np.rint(np.cumsum(mu.masses) / quantum).astype(np.int64)
    cum[-1] = 0
    return np.diff(np.r_[0, cum]), quantum


def walpha(mu: SignedAtomicMeasure, alpha: float,
           quantization: int = DEFAULT_QUANTIZATION) -> KYResult:
    """Transport cost between mu+ and mu- under |t - s|^alpha.

    Integral masses are solved exactly as unit atoms; otherwise masses are
    rounded to multiples of (positive mass)/quantization first.
    """
    alpha = check_alpha(alpha)
    if len(mu) == 0:
        return KYResult(0.0, EMPTY_PLAN, 0)
    units, quantum = _quantize(mu, quantization)
    exact = quantum == 1.0 and mu.is_integral()
    counts = np.abs(units)
    pos = np.repeat(mu.locations, counts)
    sign = np.repeat(np.sign(units), counts)
    _, partner = noncrossing_pairing(pos, sign, alpha)
    plus = np.flatnonzero(sign > 0)
    src, tgt = pos[partner[plus]], pos[plus]
    pairs, mult = np.unique(np.stack([src, tgt], axis=1), axis=0, return_counts=True)
    plan = TransportPlan(pairs[:, 0].copy(), pairs[:, 1].copy(), mult * quantum)
    if exact:
        return KYResult(plan.energy(alpha), plan, 0)
    cells = np.diff(mu.locations)
    bound = 0.5 * quantum * float(np.sum(cells ** alpha))
    return KYResult(plan.energy(alpha), plan, int(quantization), quantum, bound)


def ky_norm(g: GridFunction, alpha: float,
            quantization: int = DEFAULT_QUANTIZATION) -> KYResult:
    return walpha(increments(g), alpha, quantization)


def dual_value(g: GridFunction, f: GridFunction, alpha: float) -> float:
    """int f dg for an admissible potential f ([f]_alpha <= 1)."""
    s = holder_seminorm(f, alpha)
    if s > 1.0 + FEASIBLE_TOL:
        raise InstanceError(f"test function is not admissible: seminorm {s:.6g} > 1")
    return young_integral(f, g)


def _floyd_warshall(W: np.ndarray) -> np.ndarray:
    D = W.copy()
    for k in range(D.shape[0]):
        np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :], out=D)
    return D


def potential_from_plan(plan: TransportPlan, alpha: float, grid) -> GridFunction:
    """Potential f with f(t) - f(s) = |t - s|^alpha on every move, [f]_alpha <= 1.

    Values on the plan's support solve the difference constraints
    f(v) - f(u) <= |u - v|^alpha, f(s) - f(t) <= -|t - s|^alpha by shortest
    paths; a negative cycle means the plan is not optimal. The support values
    are extended by f(t) = min_v f(v) + |t - v|^alpha and shifted so that f
    vanishes at the first grid point.
    """
    alpha = check_alpha(alpha)
    grid = np.asarray(grid, dtype=float)
    if len(plan) == 0:
        return GridFunction(grid, np.zeros(grid.size))
    nodes = np.unique(np.r_[plan.sources, plan.targets])
    W = np.abs(nodes[:, None] - nodes[None, :]) ** alpha
    si = np.searchsorted(nodes, plan.sources)
    ti = np.searchsorted(nodes, plan.targets)
    d = np.abs(plan.targets - plan.sources) ** alpha
    W[ti, si] = np.minimum(W[ti, si], -d)
    np.fill_diagonal(W, 0.0)
    D = _floyd_warshall(W)
    if np.diag(D).min() < -FEASIBLE_TOL:
        raise InstanceError("plan violates alpha-monotonicity: no admissible potential")
    fv = np.minimum(0.0, D.min(axis=0))
    vals = np.min(fv[None, :] + np.abs(grid[:, None] - nodes[None, :]) ** alpha, axis=1)
    f = GridFunction(grid, vals - vals[0])
    s = holder_seminorm(f, alpha)
    if s > 1.0 + FEASIBLE_TOL:
        raise InstanceError(f"constructed potential has seminorm {s:.6g} > 1")
    return f


def check_alpha_monotone(plan: TransportPlan, alpha: float, k: int = 3,
                         tol: float = 1e-12, chunk: int = 200_000) -> bool:
    """Every <= k moves are an optimal assignment of their sources to targets."""
    if k not in (2, 3, 4):
        raise ValueError("k must be 2, 3 or 4")
    s, t = plan.sources, plan.targets
    for r in range(2, min(k, len(plan)) + 1):
        perms = np.array(list(itertools.permutations(range(r))), dtype=np.int64)[1:]
        combos = itertools.combinations(range(len(plan)), r)
        while True:
            block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
            if block.size == 0:
                break
            S, T = s[block], t[block]
            own = np.sum(np.abs(T - S) ** alpha, axis=1)
            swapped = np.sum(np.abs(T[:, None, :] - S[:, perms]) ** alpha, axis=2)
            if np.any(own[:, None] > swapped + tol):
                return False
    return True


def check_divergence(plan: TransportPlan, g: GridFunction, alpha: float, test_fns) -> float:
    """max over f of |sum mass (f(target) - f(source)) - int f dg|."""
    worst = 0.0
    for f in test_fns:
        lhs = plan.divergence_pairing(f)
        worst = max(worst, abs(lhs - young_integral(f, g)))
    return worst


def dyadic_coupling(g: GridFunction, levels: int) -> TransportPlan:
    """Truncated dyadic coupling of a bridge on [0, 1].

    At scale h = 2^-n the increment D = g((2k+2)h) - g((2k+1)h) is carried
    between 2kh and (2k+1)h: toward (2k+1)h if D > 0, toward 2kh if D < 0.
    """
    if g.grid[0] != 0.0 or g.grid[-1] != 1.0:
        raise InstanceError("dyadic coupling needs a grid spanning exactly [0, 1]")
    if abs(g.values[0]) > 1e-12 or abs(g.values[-1]) > 1e-12:
        raise InstanceError("dyadic coupling needs g(0) = g(1) = 0")
    fine = np.arange(2 ** levels + 1) / 2 ** levels
    idx = np.searchsorted(g.grid, fine)
    if np.any(idx >= g.grid.size) or np.any(g.grid[np.minimum(idx, g.grid.size - 1)] != fine):
        raise InstanceError(f"grid is missing dyadic points of level {levels}")
    src, tgt, mass = [], [], []
    for n in range(1, levels + 1):
        h = 2.0 ** -n
        k = np.arange(2 ** (n - 1))
        left, mid, right = 2 * k * h, (2 * k + 1) * h, (2 * k + 2) * h
        D = g(right) - g(mid)
        up = D > 0
        down = D < 0
        src += [left[up], mid[down]]
        tgt += [mid[up], left[down]]
        mass += [D[up], -D[down]]
    if not src:
        return EMPTY_PLAN
    return TransportPlan(np.concatenate(src), np.concatenate(tgt), np.concatenate(mass))
