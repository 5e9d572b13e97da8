"""Laws on [0, 1], i.i.d. sampling, empirical CDFs and Brownian bridges."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .core import GridFunction, Interval, InstanceError, UNIT, check_alpha, make_rng


@dataclass(frozen=True)
class Distribution:
    """Absolutely continuous law on [0, 1] with closed-form CDF and quantile.

    kinds: ``uniform``; ``power`` (density theta t^(theta-1)); ``two_block``
    (mass ``w`` spread uniformly on [0, split], the rest on [split, 1]).
    """

    kind: str = "uniform"
    theta: float = 1.0
    w: float = 0.5
    split: float = 0.5

    def __post_init__(self):
        if self.kind not in ("uniform", "power", "two_block"):
            raise InstanceError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "power" and not self.theta > 0:
            raise InstanceError("power law needs theta > 0")
        if self.kind == "two_block" and not (0 < self.w < 1 and 0 < self.split < 1):
            raise InstanceError("two-block law needs 0 < w < 1 and 0 < split < 1")
        total = self._integrate(self.density)
        if abs(total - 1.0) > 1e-10:
            raise InstanceError(f"density integrates to {total!r}, not 1")

    @classmethod
    def parse(cls, text: str) -> "Distribution":
        """'uniform', 'power:2', 'two_block:0.3:0.5'."""
        parts = text.split(":")
        try:
            if parts[0] == "uniform" and len(parts) == 1:
                return cls()
            if parts[0] == "power" and len(parts) == 2:
                return cls("power", theta=float(parts[1]))
            if parts[0] == "two_block" and len(parts) in (2, 3):
                split = float(parts[2]) if len(parts) == 3 else 0.5
                return cls("two_block", w=float(parts[1]), split=split)
        except ValueError:
            pass
        raise InstanceError(f"cannot parse distribution {text!r}")

    @property
    def label(self) -> str:
        if self.kind == "power":
            return f"power:{self.theta:g}"
        if self.kind == "two_block":
            return f"two_block:{self.w:g}:{self.split:g}"
        return "uniform"

    @property
    def interval(self) -> Interval:
        return UNIT

    def density(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "power":
            with np.errstate(divide="ignore"):
                return self.theta * t ** (self.theta - 1)
        if self.kind == "two_block":
            return np.where(t < self.split, self.w / self.split, (1 - self.w) / (1 - self.split))
        return np.ones_like(t)

    def cdf(self, t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        if self.kind == "power":
            return t ** self.theta
        if self.kind == "two_block":
            left = self.w * t / self.split
            right = 1 - (1 - self.w) * (1 - t) / (1 - self.split)
            return np.where(t < self.split, left, right)
        return t

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if self.kind == "power":
            return u ** (1.0 / self.theta)
        if self.kind == "two_block":
            left = self.split * u / self.w
            right = 1 - (1 - self.split) * (1 - u) / (1 - self.w)
            return np.where(u < self.w, left, right)
        return u

    def _integrate(self, fn, power: float = 1.0) -> float:
        """int_0^1 fn(t)^power dt to ~1e-10 relative error."""
        if self.kind == "power":
            # algebraic weight handles the endpoint singularity exactly
            e = (self.theta - 1) * power
            val, _ = integrate.quad(lambda t: self.theta ** power, 0, 1,
                                    weight="alg", wvar=(e, 0.0), epsabs=0, epsrel=1e-12)
            return val
        val, _ = integrate.quad(lambda t: float(fn(t)) ** power, 0, 1,
                                points=[self.split], epsabs=0, epsrel=1e-12, limit=200)
        return val


def sample_iid(dist: Distribution, n: int, seed: int, *stream: int) -> np.ndarray:
    if n < 1:
        raise InstanceError("sample size must be >= 1")
    return dist.quantile(make_rng(seed, *stream).random(n))


def empirical_cdf(points, interval: Interval = UNIT) -> GridFunction:
    """Right-continuous F_n on the sorted points plus the interval endpoints."""
    pts = np.sort(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise InstanceError("empirical CDF of an empty sample")
    if pts[0] < interval.lo or pts[-1] > interval.hi:
        raise InstanceError("points outside the interval")
    grid = np.unique(np.r_[interval.lo, pts, interval.hi])
    values = np.searchsorted(pts, grid, side="right") / pts.size
    return GridFunction(grid, values)


def _check_bridge_grid(grid: np.ndarray) -> None:
    if grid.ndim != 1 or grid.size < 2 or grid[0] != 0.0 or grid[-1] != 1.0:
        raise InstanceError("bridge grid must start at 0 and end at 1")
    if np.any(np.diff(grid) <= 0):
        raise InstanceError("bridge grid must be strictly increasing")


def bridge_paths(grid, rng: np.random.Generator, paths: int) -> np.ndarray:
    """``paths`` Brownian bridges on ``grid``, shape (paths, len(grid)).

    Sequential conditioning: given B(t_i) = b, B(t_{i+1}) is normal with mean
    b (1 - t_{i+1}) / (1 - t_i) and variance (t_{i+1} - t_i)(1 - t_{i+1}) / (1 - t_i).
    Writing C_i = B(t_i) / (1 - t_i) turns the recursion into a cumulative sum.
    """
    t = np.asarray(grid, dtype=float)
    _check_bridge_grid(t)
    out = np.zeros((paths, t.size))
    if t.size == 2:
        return out
    t0, t1 = t[:-2], t[1:-1]
    var = (t1 - t0) * (1 - t1) / (1 - t0)
    z = rng.standard_normal((paths, t.size - 2))
    C = np.cumsum(z * np.sqrt(var) / (1 - t1), axis=1)
    out[:, 1:-1] = C * (1 - t1)
    return out


def brownian_bridge(grid, seed: int, *stream: int) -> GridFunction:
    t = np.asarray(grid, dtype=float)
    vals = bridge_paths(t, make_rng(seed, *stream), 1)[0]
    return GridFunction(t, vals)


def compose_with_cdf(bridge: GridFunction, dist: Distribution, grid) -> GridFunction:
    """t -> B(F(t)) on ``grid``, B read by linear interpolation."""
    grid = np.asarray(grid, dtype=float)
    return GridFunction(grid, bridge(dist.cdf(grid)))


def density_functional(dist: Distribution, alpha: float) -> float:
    """int_0^1 f(t)^(1 - alpha) dt."""
    alpha = check_alpha(alpha)
    if alpha >= 1.0:
        raise InstanceError("density functional is defined for alpha < 1")
    return dist._integrate(dist.density, 1.0 - alpha)
