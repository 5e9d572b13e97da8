"""Shared domain types, validation and seeded randomness."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np


class InstanceError(ValueError):
    """An instance or grid function violates its invariants."""


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise InstanceError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise InstanceError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def __contains__(self, t) -> bool:
        return self.lo <= t <= self.hi


UNIT = Interval(0.0, 1.0)


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise InstanceError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


@dataclass(frozen=True)
class Instance:
    """Two point families of equal size with a cost exponent.

    ``xs`` and ``ys`` keep the caller's order; every permutation reported by
    the solvers indexes into these tuples.
    """

    xs: tuple
    ys: tuple
    alpha: float
    interval: Interval = UNIT
    strict: bool = True

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def x(self) -> np.ndarray:
        return np.asarray(self.xs, dtype=float)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.ys, dtype=float)

    @property
    def sorted_xs(self) -> tuple:
        return tuple(sorted(self.xs))

    @property
    def sorted_ys(self) -> tuple:
        return tuple(sorted(self.ys))

    def cost_matrix(self) -> np.ndarray:
        return np.abs(self.x[:, None] - self.y[None, :]) ** self.alpha

    def with_points(self, xs, ys) -> "Instance":
        return validate_instance(xs, ys, self.alpha, self.interval)


def validate_instance(
    raw_xs: Sequence[float],
    raw_ys: Sequence[float],
    alpha: float,
    interval: Interval = UNIT,
) -> Instance:
    xs = tuple(float(v) for v in raw_xs)
    ys = tuple(float(v) for v in raw_ys)
    if not xs or not ys:
        raise InstanceError("point families must be non-empty")
    if len(xs) != len(ys):
        raise InstanceError(f"size mismatch: {len(xs)} xs vs {len(ys)} ys")
    alpha = check_alpha(alpha)
    for v in xs + ys:
        if not np.isfinite(v) or v not in interval:
            raise InstanceError(f"point {v} outside [{interval.lo}, {interval.hi}]")
    strict = len(set(xs + ys)) == 2 * len(xs)
    return Instance(xs, ys, alpha, interval, strict)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values on a strictly increasing grid.

    Between nodes the function is read as a right-continuous step when used
    as an integrator (see :func:`concavematch.seminorms.young_integral`) and
    as a piecewise-linear function when interpolated.
    """

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise InstanceError("grid and values must be 1-d of equal length")
        if grid.size < 2:
            raise InstanceError("a grid function needs at least 2 grid points")
        if np.any(np.diff(grid) <= 0):
            raise InstanceError("grid must be strictly increasing")
        grid.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.grid.size

    def is_bridge(self, tol: float = 1e-12) -> bool:
        return abs(self.values[-1] - self.values[0]) <= tol

    def __call__(self, t):
        return np.interp(t, self.grid, self.values)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        _same_grid(self, other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        _same_grid(self, other)
        return GridFunction(self.grid, self.values - other.values)

    def scale(self, factor: float) -> "GridFunction":
        return GridFunction(self.grid, factor * self.values)

    def restrict(self, idx) -> "GridFunction":
        return GridFunction(self.grid[idx], self.values[idx])


def _same_grid(f: GridFunction, g: GridFunction):
    if f.grid.shape != g.grid.shape or np.any(f.grid != g.grid):
        raise InstanceError("grid functions live on different grids")


def counting_difference(inst: Instance) -> GridFunction:
    """g(t) = #{x_i <= t} - #{y_i <= t}, i.e. n(F_n - F~_n), as a grid function."""
    pts = np.unique(np.concatenate([inst.x, inst.y]))
    lo, hi = inst.interval.lo, inst.interval.hi
    left = lo if pts[0] > lo else lo - inst.interval.length
    grid = np.unique(np.concatenate([[left], pts, [hi]]))
    xs, ys = np.sort(inst.x), np.sort(inst.y)
    values = np.searchsorted(xs, grid, side="right") - np.searchsorted(ys, grid, side="right")
    return GridFunction(grid, values.astype(float))


# -- randomness -------------------------------------------------------------

def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Philox generator for ``seed`` split along the integer path ``stream``.

    The same (seed, stream) always yields the same stream; distinct paths give
    statistically independent streams.
    """
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise InstanceError("seed must be an unsigned 64-bit integer")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


# -- plain-text instance files ---------------------------------------------

def format_instance(inst: Instance) -> str:
    lines = [
        f"{inst.alpha!r} {inst.interval.lo!r} {inst.interval.hi!r}",
        " ".join(repr(v) for v in inst.xs),
        " ".join(repr(v) for v in inst.ys),
    ]
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 3:
        raise InstanceError(f"instance text needs 3 non-empty lines, got {len(lines)}")
    try:
        head = [float(v) for v in lines[0].split()]
        xs = [float(v) for v in lines[1].split()]
        ys = [float(v) for v in lines[2].split()]
    except ValueError as exc:
        raise InstanceError(f"bad number in instance text: {exc}") from None
    if len(head) != 3:
        raise InstanceError("header line must be 'alpha lo hi'")
    alpha, lo, hi = head
    return validate_instance(xs, ys, alpha, Interval(lo, hi))


def read_instance(path) -> Instance:
    return parse_instance(Path(path).read_text())


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(format_instance(inst))


def random_instance(rng: np.random.Generator, n: int, alpha: float) -> Instance:
    """Uniform points on [0, 1]."""
    return validate_instance(rng.random(n), rng.random(n), alpha)
