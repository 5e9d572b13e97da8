"""Monte Carlo scaling experiments for random concave-cost matching and TSP."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .boundary import match_boundary
from .core import GridFunction, InstanceError, check_alpha, make_rng, validate_instance
from .kyot import DEFAULT_QUANTIZATION, ky_norm
from .matching import match_noncrossing_dp
from .stochastic import Distribution, bridge_paths
from .tsp import tsp_gap_bound, tsp_upper_from_matching

FUNCTIONALS = ("match", "tsp_bracket", "match_boundary")
REGIMES = ("sub", "half", "super")
MATCH_MAX_N = 20_000
BOUNDARY_MAX_N = 1_000
CSV_HEADER = ("n", "renorm_mean", "se", "trials", "regime", "alpha", "dist", "seed")

# stream tags keep the samples of different experiment kinds independent
_TRIAL, _BRIDGE = 1, 2


def regime_of(alpha: float) -> str:
    if alpha < 0.5:
        return "sub"
    return "half" if alpha == 0.5 else "super"


def renorm_factor(regime: str, alpha: float, n: int) -> float:
    """Factor turning a raw cost at size n into its regime's normalized form."""
    if regime == "sub":
        return n ** (alpha - 1.0)
    if regime == "half":
        return 1.0 / math.sqrt(n * math.log(n))
    return n ** -0.5


@dataclass(frozen=True)
class ExperimentConfig:
    functional: str
    dist: Distribution
    alpha: float
    n_schedule: tuple
    trials: int
    seed: int
    regime: str = ""
    threads: int = 1

    def __post_init__(self):
        check_alpha(self.alpha)
        if self.functional not in FUNCTIONALS:
            raise InstanceError(f"unknown functional {self.functional!r}")
        regime = self.regime or regime_of(self.alpha)
        if regime not in REGIMES:
            raise InstanceError(f"unknown regime {regime!r}")
        if regime != regime_of(self.alpha):
            raise InstanceError(
                f"regime {regime!r} does not match alpha={self.alpha} "
                f"(expected {regime_of(self.alpha)!r})")
        object.__setattr__(self, "regime", regime)
        sched = tuple(int(n) for n in self.n_schedule)
        if not sched or sched[0] < 2 or any(b <= a for a, b in zip(sched, sched[1:])):
            raise InstanceError("n_schedule must be increasing integers >= 2")
        object.__setattr__(self, "n_schedule", sched)
        if self.trials < 2:
            raise InstanceError("need at least 2 trials per n for a standard error")
        if self.threads < 1:
            raise InstanceError("threads must be >= 1")
        cap = BOUNDARY_MAX_N if self.functional == "match_boundary" else MATCH_MAX_N
        if sched[-1] > cap:
            raise InstanceError(f"n={sched[-1]} exceeds the {self.functional} capacity {cap}")


@dataclass(frozen=True)
class ScalingRow:
    n: int
    renorm_mean: float
    se: float
    trials: int
    # tsp_bracket only: renormalized 2M and 2M + 1 + n^(1-alpha)
    lower: float = float("nan")
    upper: float = float("nan")


@dataclass(frozen=True)
class ScalingTable:
    config: ExperimentConfig
    rows: tuple
    quantity: str = "cost"
    extra: dict = field(default_factory=dict)

    def means(self) -> np.ndarray:
        return np.array([r.renorm_mean for r in self.rows])

    def ns(self) -> np.ndarray:
        return np.array([r.n for r in self.rows], dtype=float)


def _sample_instance(cfg: ExperimentConfig, n: int, trial: int):
    rng = make_rng(cfg.seed, _TRIAL, n, trial)
    pts = cfg.dist.quantile(rng.random(2 * n))
    return validate_instance(pts[:n], pts[n:], cfg.alpha)


def _trial_value(cfg: ExperimentConfig, n: int, trial: int) -> tuple:
    inst = _sample_instance(cfg, n, trial)
    if cfg.functional == "match":
        return (match_noncrossing_dp(inst).cost,)
    if cfg.functional == "match_boundary":
        return (match_boundary(inst, solver="dp", prune=True).cost,)
    m = match_noncrossing_dp(inst).cost
    cyc = tsp_upper_from_matching(inst).cost
    hi = 2 * m + tsp_gap_bound(n, cfg.alpha)
    if not 2 * m - 1e-9 <= cyc <= hi + 1e-9:
        raise AssertionError(f"TSP bracket violated at n={n}, trial={trial}")
    return cyc, 2 * m, hi


def _map_trials(fn, items, threads: int) -> list:
    if threads == 1:
        return [fn(it) for it in items]
    # map keeps input order, so the reduction is independent of scheduling
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _mean_se(v: np.ndarray) -> tuple[float, float]:
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size))


def run_scaling(cfg: ExperimentConfig) -> ScalingTable:
    rows = []
    for n in cfg.n_schedule:
        vals = np.array(_map_trials(lambda t: _trial_value(cfg, n, t),
                                    range(cfg.trials), cfg.threads))
        r = renorm_factor(cfg.regime, cfg.alpha, n)
        mean, se = _mean_se(vals[:, 0] * r)
        if cfg.functional == "tsp_bracket":
            rows.append(ScalingRow(n, mean, se, cfg.trials,
                                   float(vals[:, 1].mean() * r), float(vals[:, 2].mean() * r)))
        else:
            rows.append(ScalingRow(n, mean, se, cfg.trials))
    return ScalingTable(cfg, tuple(rows))


def compare_boundary_gap(cfg: ExperimentConfig) -> ScalingTable:
    """Per-n mean of (M - M^D) n^(alpha-1) over the same samples."""
    if cfg.alpha >= 0.5:
        raise InstanceError("the boundary gap experiment needs alpha < 1/2")
    if cfg.n_schedule[-1] > BOUNDARY_MAX_N:
        raise InstanceError(f"boundary enumeration limited to n <= {BOUNDARY_MAX_N}")

    def gap(n, t):
        inst = _sample_instance(cfg, n, t)
        g = match_noncrossing_dp(inst).cost - match_boundary(inst, solver="dp", prune=True).cost
        if g < -1e-9:
            raise AssertionError(f"boundary functional exceeds the free cost at n={n}")
        return g

    rows = []
    for n in cfg.n_schedule:
        vals = np.array(_map_trials(lambda t: gap(n, t), range(cfg.trials), cfg.threads))
        mean, se = _mean_se(vals * n ** (cfg.alpha - 1.0))
        rows.append(ScalingRow(n, mean, se, cfg.trials))
    return ScalingTable(cfg, tuple(rows), quantity="boundary_gap")


def estimate_bridge_norm(dist: Distribution, alpha: float, grid_size: int = 2048,
                         paths: int = 500, quantization: int = DEFAULT_QUANTIZATION,
                         seed: int = 0, threads: int = 1) -> tuple[float, float]:
    """Mean and SE of ||sqrt(2) B(F(.))||_{W_alpha} on a uniform grid of ``grid_size`` cells.

    The bridge is sampled exactly at the points F(t_i), so composition adds no
    interpolation error.
    """
    alpha = check_alpha(alpha)
    if alpha <= 0.5:
        raise InstanceError("the bridge norm is only defined for alpha > 1/2")
    if grid_size < 1 or paths < 2:
        raise InstanceError("need grid_size >= 1 and paths >= 2")
    t = np.linspace(0.0, 1.0, grid_size + 1)
    s = dist.cdf(t)
    s[0], s[-1] = 0.0, 1.0
    if np.any(np.diff(s) <= 0):
        raise InstanceError("the CDF must be strictly increasing on the grid")
    B = math.sqrt(2.0) * bridge_paths(s, make_rng(seed, _BRIDGE, grid_size), paths)
    norms = np.array(_map_trials(
        lambda k: ky_norm(GridFunction(t, B[k]), alpha, quantization).norm,
        range(paths), threads))
    return _mean_se(norms)


def fit_rate(table: ScalingTable, raw: bool = True) -> float:
    """Least-squares slope of log(mean) against log(n).

    With ``raw`` the renormalization is undone first, so the slope estimates
    the growth rate of the cost itself.
    """
    if len(table.rows) < 3:
        raise InstanceError("rate fit needs at least 3 rows")
    n = table.ns()
    m = table.means()
    if raw:
        cfg = table.config
        m = m / np.array([renorm_factor(cfg.regime, cfg.alpha, int(k)) for k in n])
    if np.any(m <= 0):
        raise InstanceError("rate fit needs positive means")
    return float(np.polyfit(np.log(n), np.log(m), 1)[0])


def expected_rate(regime: str, alpha: float) -> float:
    if regime == "sub":
        return 1.0 - alpha
    return 0.5


def table_csv(table: ScalingTable) -> str:
    cfg = table.config
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in table.rows:
        w.writerow([r.n, repr(r.renorm_mean), repr(r.se), r.trials,
                    cfg.regime, repr(cfg.alpha), cfg.dist.label, cfg.seed])
    return buf.getvalue()


def summary_text(table: ScalingTable) -> str:
    cfg = table.config
    lines = [
        f"experiment: {cfg.functional} ({table.quantity})",
        f"alpha={cfg.alpha!r} regime={cfg.regime} dist={cfg.dist.label} "
        f"seed={cfg.seed} trials={cfg.trials}",
    ]
    for r in table.rows:
        line = f"n={r.n:>6d}  mean={r.renorm_mean:.6f}  se={r.se:.6f}"
        if not math.isnan(r.lower):
            line += f"  bracket=[{r.lower:.6f}, {r.upper:.6f}]"
        lines.append(line)
    if len(table.rows) >= 3 and table.quantity == "cost":
        lines.append(f"fitted rate: {fit_rate(table):.4f} "
                     f"(regime rate {expected_rate(cfg.regime, cfg.alpha):.4f})")
        lines.append(f"renormalized slope: {fit_rate(table, raw=False):.4f}")
    if len(table.rows) >= 2:
        a, b = table.rows[-2].renorm_mean, table.rows[-1].renorm_mean
        lines.append(f"last two means relative difference: {abs(b - a) / abs(b):.4f}")
    for k, v in table.extra.items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"
