"""Command-line front end: solvers, transport norms and seeded experiments."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import boundary, experiments, kyot, matching, seminorms, tsp
from .core import (GridFunction, InstanceError, check_alpha, make_rng, random_instance,
                   read_instance, validate_instance)
from .stochastic import Distribution


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _alpha(text: str) -> float:
    try:
        return check_alpha(float(text))
    except (ValueError, InstanceError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2^64)")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _dist(text: str) -> Distribution:
    try:
        return Distribution.parse(text)
    except InstanceError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _schedule(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from None


def _load(args):
    inst = read_instance(args.instance)
    if args.alpha is not None:
        inst = validate_instance(inst.xs, inst.ys, args.alpha, inst.interval)
    return inst


def _fmt(v: float) -> str:
    return repr(float(v))


# -- subcommands ------------------------------------------------------------

def cmd_match(args) -> str:
    inst = _load(args)
    solve = {"dp": matching.match_noncrossing_dp, "generic": matching.match_generic,
             "bruteforce": matching.match_bruteforce}[args.solver]
    res = solve(inst)
    if args.format == "csv":
        rows = ["x_index,y_index,x,y,edge_cost"]
        for i, j in enumerate(res.sigma):
            x, y = inst.xs[i], inst.ys[j]
            rows.append(f"{i},{j},{_fmt(x)},{_fmt(y)},{_fmt(abs(x - y) ** inst.alpha)}")
        return "\n".join(rows) + "\n"
    return f"cost {_fmt(res.cost)}\npermutation {' '.join(map(str, res.sigma))}\n"


def cmd_tsp(args) -> str:
    inst = _load(args)
    solve = {"exact": tsp.tsp_exact, "bruteforce": tsp.tsp_bruteforce,
             "upper": tsp.tsp_upper_from_matching}[args.method]
    cyc = solve(inst)
    if args.format == "csv":
        rows = ["step,x_index,y_index,edge_cost"]
        C = inst.cost_matrix()
        for k, (i, j) in enumerate(cyc.edges):
            rows.append(f"{k},{i},{j},{_fmt(C[i, j])}")
        return "\n".join(rows) + "\n"
    return (f"cost {_fmt(cyc.cost)}\nx_order {' '.join(map(str, cyc.x_order))}\n"
            f"y_order {' '.join(map(str, cyc.y_order))}\n")


def cmd_boundary(args) -> str:
    inst = _load(args)
    if args.functional == "tsp":
        res = boundary.tsp_boundary(inst, extra=args.extra)
    else:
        res = boundary.match_boundary(inst, extra=args.extra, solver=args.solver)
    a0, a1, c0, c1 = res.placement
    if args.format == "csv":
        return ("cost,m_used,x_at_0,x_at_1,y_at_0,y_at_1\n"
                f"{_fmt(res.cost)},{res.m_used},{a0},{a1},{c0},{c1}\n")
    return (f"cost {_fmt(res.cost)}\nm_used {res.m_used}\n"
            f"placement x@0={a0} x@1={a1} y@0={c0} y@1={c1}\n")


def _read_grid_function(path) -> GridFunction:
    try:
        data = np.loadtxt(path, ndmin=2)
    except ValueError as exc:
        raise InstanceError(f"cannot parse grid function file: {exc}") from None
    if data.shape[1] != 2:
        raise InstanceError("grid function file needs two columns: t g")
    return GridFunction(data[:, 0], data[:, 1])


def cmd_kynorm(args) -> str:
    alpha = args.alpha if args.alpha is not None else 0.5
    g = _read_grid_function(args.file)
    res = kyot.ky_norm(g, alpha, args.quantization)
    gap = float("nan")
    if args.certificate:
        f = kyot.potential_from_plan(res.plan, alpha, g.grid)
        gap = res.norm - kyot.dual_value(g, f, alpha)
    if args.format == "csv":
        return ("norm,plan_size,certificate_gap,error_bound\n"
                f"{_fmt(res.norm)},{len(res.plan)},{_fmt(gap)},{_fmt(res.error_bound)}\n")
    return (f"norm {_fmt(res.norm)}\nplan_size {len(res.plan)}\n"
            f"certificate_gap {_fmt(gap)}\nerror_bound {_fmt(res.error_bound)}\n")


def cmd_experiment(args) -> str:
    if args.alpha is None:
        raise InstanceError("experiment needs --alpha")
    cfg = experiments.ExperimentConfig(
        functional=args.functional, dist=args.dist, alpha=args.alpha,
        n_schedule=args.n, trials=args.trials, seed=args.seed,
        regime=args.regime or "", threads=args.threads)
    if args.gap:
        table = experiments.compare_boundary_gap(cfg)
    else:
        table = experiments.run_scaling(cfg)
    if args.bridge_paths:
        mean, se = experiments.estimate_bridge_norm(
            cfg.dist, cfg.alpha, args.bridge_grid, args.bridge_paths,
            args.quantization, cfg.seed, cfg.threads)
        table.extra["bridge norm limit"] = f"{mean:.6f} +- {se:.6f}"
    if args.format == "csv":
        return experiments.table_csv(table)
    return experiments.summary_text(table)


def selftest(seed: int = 0) -> tuple[list, int]:
    """Oracle-equivalence checks on seeded instances; returns (report lines, failures)."""
    lines, failures = [], 0

    def record(name, bad, total):
        nonlocal failures
        failures += bad
        lines.append(f"{'PASS' if bad == 0 else 'FAIL'} {name}: {total - bad}/{total}")

    bad = 0
    for k in range(150):
        rng = make_rng(seed, 10, k)
        inst = random_instance(rng, int(rng.integers(1, 8)), float(rng.choice([0.3, 0.5, 0.8, 1.0])))
        b = matching.match_bruteforce(inst)
        g = matching.match_generic(inst)
        d = matching.match_noncrossing_dp(inst)
        ok = abs(b.cost - g.cost) <= 1e-9 and abs(b.cost - d.cost) <= 1e-9
        ok &= matching.check_monotonicity(inst, d.sigma)
        if inst.alpha < 1:
            ok &= matching.check_noncrossing(inst, d.sigma)
        bad += not ok
    record("matching solvers agree", bad, 150)

    bad = 0
    for k in range(60):
        rng = make_rng(seed, 11, k)
        inst = random_instance(rng, int(rng.integers(1, 6)), float(rng.choice([0.3, 0.5, 0.8])))
        bf, hk = tsp.tsp_bruteforce(inst), tsp.tsp_exact(inst)
        lo, hi = tsp.check_capelli_sandwich(inst)
        bad += not (abs(bf.cost - hk.cost) <= 1e-9 and lo and hi)
    record("TSP solvers agree and sandwich holds", bad, 60)

    bad = 0
    for k in range(60):
        rng = make_rng(seed, 12, k)
        inst = random_instance(rng, int(rng.integers(1, 30)), float(rng.choice([0.3, 0.5, 0.8])))
        if not inst.strict:
            continue
        norm = kyot.walpha(kyot.unit_measure(inst), inst.alpha).norm
        bad += abs(norm - matching.match_cost(inst)) > 1e-9
    record("transport norm equals matching cost", bad, 60)

    bad = 0
    for k in range(60):
        rng = make_rng(seed, 13, k)
        N = int(rng.integers(2, 11))
        f = GridFunction(np.arange(N, dtype=float), rng.normal(size=N))
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        bad += seminorms.p_variation(f, p) != seminorms.p_variation_bruteforce(f, p)
    record("p-variation DP equals enumeration", bad, 60)
    return lines, failures


def cmd_selftest(args) -> tuple[str, int]:
    lines, failures = selftest(args.seed)
    lines.append(f"{'ok' if failures == 0 else 'FAILED'}: {failures} violation(s)")
    return "\n".join(lines) + "\n", 1 if failures else 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=_seed, default=0)
    shared.add_argument("--alpha", type=_alpha, default=None)
    shared.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")
    shared.add_argument("--format", choices=("csv", "text"), default="text")
    shared.add_argument("--threads", type=_positive, default=1)

    p = _Parser(prog="concavematch", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("match", parents=[shared], help="optimal assignment of an instance file")
    s.add_argument("--instance", required=True, type=Path)
    s.add_argument("--solver", choices=("dp", "generic", "bruteforce"), default="dp")

    s = sub.add_parser("tsp", parents=[shared], help="alternating cycle of an instance file")
    s.add_argument("--instance", required=True, type=Path)
    s.add_argument("--method", choices=("exact", "bruteforce", "upper"), default="exact")

    s = sub.add_parser("boundary", parents=[shared], help="boundary functional of an instance file")
    s.add_argument("--instance", required=True, type=Path)
    s.add_argument("--functional", choices=("match", "tsp"), default="match")
    s.add_argument("--solver", choices=("dp", "generic"), default="generic")
    s.add_argument("--extra", type=int, default=0, help="search past the cap by this many points")

    s = sub.add_parser("kynorm", parents=[shared], help="transport norm of a two-column t g file")
    s.add_argument("file", type=Path)
    s.add_argument("--quantization", type=_positive, default=kyot.DEFAULT_QUANTIZATION)
    s.add_argument("--no-certificate", dest="certificate", action="store_false",
                   help="skip the dual potential (cubic in the plan support)")

    s = sub.add_parser("experiment", parents=[shared], help="Monte Carlo scaling table")
    s.add_argument("--functional", choices=experiments.FUNCTIONALS, default="match")
    s.add_argument("--regime", choices=experiments.REGIMES, default=None)
    s.add_argument("--dist", type=_dist, default=Distribution())
    s.add_argument("--n", type=_schedule, default=(128, 256, 512, 1024))
    s.add_argument("--trials", type=_positive, default=50)
    s.add_argument("--gap", action="store_true", help="report the boundary gap M - M^D instead")
    s.add_argument("--bridge-paths", type=int, default=0,
                   help="also estimate the bridge-norm limit with this many paths")
    s.add_argument("--bridge-grid", type=_positive, default=2048)
    s.add_argument("--quantization", type=_positive, default=kyot.DEFAULT_QUANTIZATION)

    sub.add_parser("selftest", parents=[shared], help="oracle-equivalence checks")
    return p


COMMANDS = {"match": cmd_match, "tsp": cmd_tsp, "boundary": cmd_boundary,
            "kynorm": cmd_kynorm, "experiment": cmd_experiment, "selftest": cmd_selftest}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = COMMANDS[args.command](args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InstanceError, ValueError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(out, tuple):
        out, code = out
    if args.out is not None:
        args.out.write_text(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
