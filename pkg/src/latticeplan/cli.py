"""Command-line surface: parameter inspection, complexity sweeps,
planning, benchmarking, and stretch-factor sweeps.

Exit codes: 0 solved/ok, 1 usage or scenario errors, 2 certified
infeasible at the clearance floor, 3 search budget exhausted.

Output files never contain wall-clock times (those go to the console),
so re-running a command with identical inputs writes identical bytes.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .completeness import build_sample_set, derive_params
from .complexity import reports_to_csv, sweep_report, theta_bar
from .geometry import Scenario, config_clearance
from .lattices import CapacityError, Family
from .planner import (
    MODE_LATTICE_GLO,
    MODE_LATTICE_LOC,
    MODE_RANDOM_GLO,
    PlanOutcome,
    PlannerConfig,
    ScenarioError,
    delta_ladder,
    lattice_points_in_box,
    matched_count,
    plan_glo,
    plan_loc,
    r_rnd,
    random_samples,
)
from .scenario import (
    FAMILY_TOKENS,
    MODE_NAMES,
    MODE_TOKENS,
    ResultFile,
    ScenarioFile,
    fmt_float,
    parse_scenario,
    serialize_result,
)

BENCH_MODES = ("z-loc", "dstar-loc", "astar-loc", "astar-glo", "random-glo")
BENCH_BASELINE = "astar-loc"
BENCH_CSV_HEADER = (
    "mode,expanded,vertex_checks,edge_checks,edge_check_configs,length,length_norm,success_pct"
)
SWEEP_CSV_HEADER = "eps,status,length,expanded,edge_check_configs"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _parse_dims(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def _parse_eps_list(text: str) -> list[float]:
    values = [float(part) for part in text.split(",") if part.strip()]
    if not values:
        raise _UsageError("sweep-eps: empty eps list")
    return values


def _write(path: str, content: str) -> None:
    Path(path).write_text(content, encoding="utf-8")


def _load_scenario(path: str) -> ScenarioFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario '{path}': {exc}") from exc
    return parse_scenario(text)


def _add_common_overrides(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--delta", type=float, default=None)
    sub.add_argument("--eps", type=float, default=None)
    sub.add_argument("--family", choices=sorted(FAMILY_TOKENS), default=None)
    sub.add_argument("--mode", choices=sorted(MODE_TOKENS), default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--psi", type=float, default=None)
    sub.add_argument("--spacing", type=float, default=None, help="edge validation spacing")
    sub.add_argument("--node-cap", type=int, default=None)
    sub.add_argument("--time-cap", type=float, default=None)
    sub.add_argument("--floor-ratio", type=float, default=None,
                     help="clearance ladder floor as a fraction of the initial delta")


def build_parser() -> _Parser:
    parser = _Parser(prog="latticeplan", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("params", parents=[], help="print completeness parameters")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--family", choices=sorted(FAMILY_TOKENS), required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_params)

    p = subs.add_parser("complexity", help="write the sample/collision complexity CSV")
    p.add_argument("--family", choices=sorted(FAMILY_TOKENS), action="append", default=None)
    p.add_argument("--dims", type=_parse_dims, required=True, help="e.g. 2..8 or 2,4,6")
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=2.0)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_complexity)

    p = subs.add_parser("plan", help="plan one scenario over the clearance ladder")
    p.add_argument("scenario")
    p.add_argument("--out", required=True)
    _add_common_overrides(p)
    p.set_defaults(func=cmd_plan)

    p = subs.add_parser("bench", help="compare planner flavors on one scenario")
    p.add_argument("scenario")
    p.add_argument("--modes", default=",".join(BENCH_MODES))
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--out", required=True)
    _add_common_overrides(p)
    p.set_defaults(func=cmd_bench)

    p = subs.add_parser("sweep-eps", help="solve one scenario across stretch factors")
    p.add_argument("scenario")
    p.add_argument("--eps-list", type=_parse_eps_list, required=True)
    p.add_argument("--out", required=True)
    _add_common_overrides(p)
    p.set_defaults(func=cmd_sweep_eps)

    return parser


def cmd_params(args) -> int:
    params = derive_params(args.delta, args.eps)
    family = FAMILY_TOKENS[args.family]
    sample_set = build_sample_set(family, args.d, params)
    spec = sample_set.spec
    lines = [
        f"family: {family.value}",
        f"d: {args.d}",
        f"delta: {fmt_float(params.delta)}",
        f"eps: {fmt_float(params.eps)}",
        f"beta_star: {fmt_float(params.beta_star)}",
        f"r_star: {fmt_float(params.r_star)}",
        f"covering_radius: {fmt_float(spec.covering_radius)}",
        f"scale: {fmt_float(sample_set.scale)}",
        f"theta_bar: {fmt_float(theta_bar(spec.covering_radius, params.eps))}",
    ]
    block = "\n".join(lines) + "\n"
    sys.stdout.write(block)
    if args.out:
        _write(args.out, block)
    return 0


def cmd_complexity(args) -> int:
    tokens = args.family or sorted(FAMILY_TOKENS)
    families = [FAMILY_TOKENS[token] for token in tokens]
    kwargs = {}
    if args.cap is not None:
        kwargs["cap"] = args.cap
    rows = sweep_report(families, args.dims, args.delta, args.eps, **kwargs)
    _write(args.out, reports_to_csv(rows))
    return 0


def _initial_delta(sf: ScenarioFile, scenario: Scenario, override: float | None) -> float:
    if override is not None:
        return override
    if sf.defaults.delta is not None:
        return sf.defaults.delta
    clearance = config_clearance(scenario.workspace, scenario.team, scenario.start).value
    if clearance <= 0.0:
        raise ScenarioError("start configuration has no positive clearance")
    return clearance


def _run_mode(scenario: Scenario, config: PlannerConfig) -> tuple[PlanOutcome, dict]:
    """Dispatch one planner flavor; returns the outcome and the resolved
    parameter block for the result file."""
    params = derive_params(config.delta, config.eps)
    sample_set = build_sample_set(config.family, scenario.dim, params)
    resolved = {
        "delta": params.delta,
        "eps": params.eps,
        "beta_star": params.beta_star,
        "r_star": params.r_star,
        "scale": sample_set.scale,
    }
    if config.mode == MODE_LATTICE_LOC:
        outcome = plan_loc(scenario, config)
        resolved["radius"] = params.r_star
    elif config.mode == MODE_LATTICE_GLO:
        points = lattice_points_in_box(scenario, config.family, params)
        outcome = plan_glo(scenario, config, points, params.r_star)
        resolved["radius"] = params.r_star
        resolved["n_samples"] = len(points)
    elif config.mode == MODE_RANDOM_GLO:
        n = matched_count(scenario, config.family, params)
        radius = r_rnd(n, config.psi, scenario.dim)
        points = random_samples(scenario, n, config.seed)
        outcome = plan_glo(scenario, config, points, radius)
        resolved["radius"] = radius
        resolved["n_samples"] = n
    else:
        raise ValueError(f"unknown mode {config.mode!r}")
    return outcome, resolved


def _stats_doc(outcome: PlanOutcome) -> dict:
    s = outcome.stats
    return {
        "expanded": s.expanded,
        "generated": s.generated,
        "vertex_checks": s.vertex_checks,
        "edge_checks": s.edge_checks,
        "edge_check_configs": s.edge_check_configs,
    }


def cmd_plan(args) -> int:
    sf = _load_scenario(args.scenario)
    scenario = sf.to_scenario()
    overrides = dict(
        eps=args.eps,
        seed=args.seed,
        psi=args.psi,
        edge_spacing=args.spacing,
        node_cap=args.node_cap,
        time_cap=args.time_cap,
    )
    if args.family is not None:
        overrides["family"] = FAMILY_TOKENS[args.family]
    if args.mode is not None:
        overrides["mode"] = MODE_TOKENS[args.mode]

    first = _initial_delta(sf, scenario, args.delta)
    floor_ratio = args.floor_ratio if args.floor_ratio is not None else sf.defaults.floor_ratio
    ladder_entries = []
    outcome = resolved = None
    t0 = time.perf_counter()
    for delta in delta_ladder(first, floor_ratio=floor_ratio):
        config = sf.planner_config(delta=delta, **overrides)
        outcome, resolved = _run_mode(scenario, config)
        ladder_entries.append({"delta": delta, "status": outcome.status})
        if outcome.status != "infeasible_certified":
            break
    elapsed = time.perf_counter() - t0

    rf = ResultFile(
        scenario=sf.name,
        mode=MODE_NAMES[sf.planner_config(**overrides).mode],
        family=sf.planner_config(**overrides).family.value,
        params=resolved,
        status=outcome.status,
        path=[list(map(float, row)) for row in outcome.path] if outcome.path else None,
        length=outcome.length,
        stats=_stats_doc(outcome),
        delta_ladder=ladder_entries,
    )
    _write(args.out, serialize_result(rf))
    sys.stdout.write(
        f"{sf.name}: {outcome.status}"
        + (f" length={outcome.length:.6g}" if outcome.length is not None else "")
        + f" retries={len(ladder_entries)} time={elapsed:.3f}s\n"
    )
    if outcome.status == "solved":
        return 0
    if outcome.status == "exhausted_budget":
        return 3
    return 2


def _bench_token(token: str) -> tuple[Family, str]:
    try:
        family_token, mode_token = token.split("-", 1)
    except ValueError:
        raise _UsageError(f"bench: bad mode token '{token}' (expected family-mode)") from None
    if mode_token == "random" or family_token == "random":
        return Family.ASTAR, MODE_RANDOM_GLO
    if family_token not in FAMILY_TOKENS or mode_token not in ("loc", "glo"):
        raise _UsageError(f"bench: bad mode token '{token}'")
    return FAMILY_TOKENS[family_token], MODE_TOKENS[mode_token]


def cmd_bench(args) -> int:
    sf = _load_scenario(args.scenario)
    scenario = sf.to_scenario()
    tokens = [t.strip() for t in args.modes.split(",") if t.strip()]
    if BENCH_BASELINE not in tokens:
        tokens.insert(0, BENCH_BASELINE)
    if args.repeats < 1:
        raise _UsageError("bench: --repeats must be >= 1")

    delta = _initial_delta(sf, scenario, args.delta)
    shared = dict(
        delta=delta,
        eps=args.eps,
        psi=args.psi,
        edge_spacing=args.spacing,
        node_cap=args.node_cap,
        time_cap=args.time_cap,
    )

    rows = []
    baseline_length = None
    console = []
    for token in tokens:
        family, mode = _bench_token(token)
        if mode == MODE_RANDOM_GLO:
            seeds = [(args.seed if args.seed is not None else sf.defaults.seed) + k for k in range(args.repeats)]
        else:
            seeds = [args.seed if args.seed is not None else sf.defaults.seed]
        outcomes = []
        t0 = time.perf_counter()
        for seed in seeds:
            config = sf.planner_config(family=family, mode=mode, seed=seed, **shared)
            outcome, _ = _run_mode(scenario, config)
            outcomes.append(outcome)
        elapsed = time.perf_counter() - t0
        solved = [o for o in outcomes if o.status == "solved"]

        def mean(values):
            return sum(values) / len(values)

        row = {
            "mode": token,
            "expanded": mean([o.stats.expanded for o in outcomes]),
            "vertex_checks": mean([o.stats.vertex_checks for o in outcomes]),
            "edge_checks": mean([o.stats.edge_checks for o in outcomes]),
            "edge_check_configs": mean([o.stats.edge_check_configs for o in outcomes]),
            "length": mean([o.length for o in solved]) if solved else None,
            "success_pct": 100.0 * len(solved) / len(outcomes),
        }
        if token == BENCH_BASELINE and solved:
            baseline_length = row["length"]
        rows.append(row)
        console.append(f"{token}: success={row['success_pct']:.0f}% time={elapsed:.3f}s")

    lines = [BENCH_CSV_HEADER]
    for row in rows:
        norm = (
            row["length"] / baseline_length
            if (row["length"] is not None and baseline_length)
            else None
        )
        cells = [
            row["mode"],
            format(row["expanded"], ".12g"),
            format(row["vertex_checks"], ".12g"),
            format(row["edge_checks"], ".12g"),
            format(row["edge_check_configs"], ".12g"),
            format(row["length"], ".12g") if row["length"] is not None else "",
            format(norm, ".12g") if norm is not None else "",
            format(row["success_pct"], ".12g"),
        ]
        lines.append(",".join(cells))
    _write(args.out, "\n".join(lines) + "\n")
    sys.stdout.write("\n".join(console) + "\n")
    return 0


def cmd_sweep_eps(args) -> int:
    sf = _load_scenario(args.scenario)
    scenario = sf.to_scenario()
    delta = _initial_delta(sf, scenario, args.delta)
    overrides = dict(
        delta=delta,
        seed=args.seed,
        psi=args.psi,
        edge_spacing=args.spacing,
        node_cap=args.node_cap,
        time_cap=args.time_cap,
    )
    if args.family is not None:
        overrides["family"] = FAMILY_TOKENS[args.family]
    if args.mode is not None:
        overrides["mode"] = MODE_TOKENS[args.mode]

    lines = [SWEEP_CSV_HEADER]
    console = []
    for eps in args.eps_list:
        config = sf.planner_config(eps=eps, **overrides)
        t0 = time.perf_counter()
        outcome, _ = _run_mode(scenario, config)
        elapsed = time.perf_counter() - t0
        cells = [
            format(eps, ".12g"),
            outcome.status,
            format(outcome.length, ".12g") if outcome.length is not None else "",
            str(outcome.stats.expanded),
            str(outcome.stats.edge_check_configs),
        ]
        lines.append(",".join(cells))
        console.append(f"eps={eps:g}: {outcome.status} time={elapsed:.3f}s")
    _write(args.out, "\n".join(lines) + "\n")
    sys.stdout.write("\n".join(console) + "\n")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ScenarioError, CapacityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
