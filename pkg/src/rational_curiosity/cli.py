"""Command-line entry point: ``rational-curiosity <command> [options]``.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .analysis import bin_reveal_curve, normalize_curiosity, quadratic_fit, rescale_confidence
from .exceptions import CuriosityError
from .experiment import CONDITIONS, apply_exclusion, exclusion_bounds, run_experiment
from .policies import CURVES, theoretical_curve
from .simulation import compare, run
from .tables import read_ratings, read_reveals

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(CuriosityError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for I/O failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_json(path: Path, obj):
    _write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _prepare(args, seed_key):
    cfg = cfgmod.load(args.config) if getattr(args, "config", None) else cfgmod.resolve()
    overrides = list(getattr(args, "set", None) or [])
    if getattr(args, "seed", None) is not None and seed_key:
        overrides.append(f"{seed_key}={args.seed}")
    if getattr(args, "out", None) is not None:
        overrides.append(f"output.dir={json.dumps(args.out)}")
    if getattr(args, "format", None) is not None:
        overrides.append(f"output.format={args.format}")
    cfg = cfgmod.apply_overrides(cfg, overrides)
    if cfg["output"]["format"] not in ("csv", "json"):
        raise cfgmod.ConfigurationError("output.format must be 'csv' or 'json'", key="output.format")
    out = Path(cfg["output"]["dir"])
    return cfg, out


def _finish_outdir(out: Path, cfg: dict, options: dict = None):
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "config.resolved.json", cfgmod.dumps(cfg))
    if options is not None:
        # command-line options that are not part of the config document
        _write_json(out / "options.json", options)


def cmd_simulate(args) -> int:
    cfg, out = _prepare(args, "simulation.seed")
    sim = cfgmod.build_sim_config(cfg)
    traj = run(sim)
    _finish_outdir(out, cfg)
    if cfg["output"]["format"] == "json":
        _write_json(out / "trajectory.json", traj.to_rows())
    else:
        _write(out / "trajectory.csv", traj.to_csv())
    summary = {
        "policy": sim.policy.value,
        "steps": sim.steps,
        "seed": sim.seed,
        "n": sim.env.n,
        "coupling": sim.env.coupling.value,
        "cumulative_reward": traj.cumulative_reward,
        "final_knowledge_value": traj.records[-1].knowledge_value,
        "final_exposures": traj.final_state.exposures.tolist(),
    }
    _write_json(out / "summary.json", summary)
    print(f"{sim.policy.value}: cumulative reward {traj.cumulative_reward} over {sim.steps} steps")
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg, out = _prepare(args, "simulation.seed")
    policies = cfg["compare"]["policies"]
    if not policies:
        raise cfgmod.ConfigurationError("compare.policies must not be empty", key="compare.policies")
    configs = [cfgmod.build_sim_config(cfg, policy=p) for p in policies]
    try:
        summaries = compare(configs, cfg["compare"]["replications"])
    except cfgmod.ConfigurationError as exc:
        raise cfgmod.ConfigurationError(f"compare.{exc.key}: {exc}", key=f"compare.{exc.key}") from exc
    _finish_outdir(out, cfg)
    if cfg["output"]["format"] == "json":
        _write_json(out / "compare.json", [
            {"policy": s.policy.value, "mean_cumulative_reward": s.mean_cumulative_reward,
             "sd_cumulative_reward": s.sd_cumulative_reward, "replications": s.replications,
             "rewards": list(s.rewards)} for s in summaries])
    else:
        lines = ["policy,mean_cumulative_reward,sd_cumulative_reward,replications"]
        lines += [f"{s.policy.value},{s.mean_cumulative_reward!r},{s.sd_cumulative_reward!r},"
                  f"{s.replications}" for s in summaries]
        _write(out / "compare.csv", "\n".join(lines) + "\n")
    for s in summaries:
        print(f"{s.policy.value}: mean {s.mean_cumulative_reward:.3f} sd {s.sd_cumulative_reward:.3f} "
              f"(n={s.replications})")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg, out = _prepare(args, "experiment.seed")
    xcfg = cfgmod.build_experiment_config(cfg)
    data = run_experiment(xcfg)
    _, report = apply_exclusion(data)
    _finish_outdir(out, cfg)
    _write(out / "ratings.csv", data.ratings_csv())
    _write(out / "reveals.csv", data.reveals_csv())
    _write(out / "exclusions.txt", report.to_text())
    sys.stdout.write(report.to_text())
    return EXIT_OK


def _exclusion_mask(rev) -> tuple:
    """Participants kept by the reveal-count rule, plus the counts per condition."""
    keep, excluded = set(), {}
    for pid in np.unique(rev["participant_id"]).tolist():
        rows = rev["participant_id"] == pid
        low, high = exclusion_bounds(int(rows.sum()))
        cond = str(rev["condition"][rows][0])
        if low <= int(rev["revealed"][rows].sum()) <= high:
            keep.add(pid)
        else:
            excluded[cond] = excluded.get(cond, 0) + 1
    return keep, excluded


def _conf(values, percent):
    return rescale_confidence(values) if percent else values


def cmd_analyze(args) -> int:
    if not args.ratings and not args.reveals:
        raise UsageError("analyze needs --ratings and/or --reveals")
    cfg, out = _prepare(args, "analysis.seed")
    for key in ("permutations", "bin_width", "alpha"):
        if getattr(args, key) is not None:
            cfg = cfgmod.apply_overrides(cfg, [f"analysis.{key}={getattr(args, key)}"])
    acfg = cfg["analysis"]
    ratings = read_ratings(args.ratings, args.percent) if args.ratings else None
    reveals = read_reveals(args.reveals, args.percent) if args.reveals else None

    keep, excluded = (None, {})
    if reveals is not None and not args.no_exclusion:
        keep, excluded = _exclusion_mask(reveals)

    present = set()
    for table in (ratings, reveals):
        if table is not None:
            present.update(table["condition"].tolist())
    if args.condition == "all":
        conditions = [c.value for c in CONDITIONS if c.value in present]
    else:
        if args.condition not in present:
            raise UsageError(f"condition {args.condition!r} does not occur in the input")
        conditions = [args.condition]

    _finish_outdir(out, cfg, {
        "ratings": args.ratings, "reveals": args.reveals, "condition": args.condition,
        "raw_ratings": args.raw_ratings, "percent": args.percent, "no_exclusion": args.no_exclusion})
    for cond in conditions:
        report = {}
        if ratings is not None:
            m = ratings["condition"] == cond
            if keep is not None:
                m &= np.isin(ratings["participant_id"], list(keep))
            if m.any():
                c = _conf(ratings["reported_confidence"][m], args.percent)
                y = ratings["curiosity_rating"][m]
                if not args.raw_ratings:
                    y = normalize_curiosity(y, ratings["participant_id"][m])
                fit = quadratic_fit(y, c, acfg["permutations"], acfg["seed"])
                report["main"] = fit.to_dict(acfg["alpha"])
                _write(out / f"bins_{cond}_ratings.csv",
                       bin_reveal_curve(y, c, acfg["bin_width"]).to_csv())
        if reveals is not None:
            m = reveals["condition"] == cond
            if keep is not None:
                m &= np.isin(reveals["participant_id"], list(keep))
            if m.any():
                c = _conf(reveals["reported_confidence"][m], args.percent)
                v = reveals["revealed"][m].astype(float)
                fit = quadratic_fit(v, c, acfg["permutations"], acfg["seed"])
                report["bonus"] = fit.to_dict(acfg["alpha"])
                _write(out / f"bins_{cond}.csv", bin_reveal_curve(v, c, acfg["bin_width"]).to_csv())
        report["excluded_participants"] = excluded.get(cond, 0)
        _write_json(out / f"fit_{cond}.json", report)
        for rnd in ("main", "bonus"):
            if rnd in report:
                r = report[rnd]
                print(f"{cond} {rnd}: {r['shape']} (coef_confidence={r['coef_confidence']:.4g}, "
                      f"coef_uncertainty={r['coef_uncertainty']:.4g}, r={r['r']:.3f})")
    return EXIT_OK


def cmd_curves(args) -> int:
    cfg, out = _prepare(args, None)
    names = list(CURVES) if args.names in (None, "all") else [n.strip() for n in args.names.split(",")]
    unknown = [n for n in names if n not in CURVES]
    if unknown:
        raise UsageError(f"unknown curve(s) {', '.join(unknown)}; valid names: {', '.join(CURVES)}")
    if args.resolution < 2:
        raise UsageError("--resolution must be at least 2")
    _finish_outdir(out, cfg, {"names": names, "resolution": args.resolution, "h_max": args.h_max})
    for name in names:
        xy = theoretical_curve(name, args.resolution, args.h_max)
        lines = ["x,curiosity"] + [f"{x!r},{y!r}" for x, y in xy.tolist()]
        _write(out / f"curve_{name}.csv", "\n".join(lines) + "\n")
        peak = xy[int(np.argmax(xy[:, 1]))]
        print(f"{name}: peak curiosity {peak[1]:.6f} at x = {peak[0]:.4f}")
    return EXIT_OK


def _global_flags(parser, default):
    parser.add_argument("--config", default=default, help="JSON run configuration")
    parser.add_argument("--seed", type=int, default=default, help="override the command's seed")
    parser.add_argument("--out", default=default, help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default=default,
                        help="table format where applicable")
    parser.add_argument("--set", action="append", default=default, metavar="KEY=VALUE",
                        help="override a config entry, e.g. simulation.steps=500")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rational-curiosity",
                     description="Rational curiosity simulations, in-silico experiment and analysis.")
    _global_flags(parser, None)
    # subcommand copies must not clobber values given before the subcommand
    common = _Parser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="run one explore/test simulation")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", parents=[common], help="compare policies over replications")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("experiment", parents=[common], help="simulate the two-condition experiment")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("analyze", parents=[common], help="fit and bin ratings/reveals CSVs")
    p.add_argument("--ratings", help="ratings CSV from the experiment command")
    p.add_argument("--reveals", help="reveals CSV from the experiment command")
    p.add_argument("--condition", default="all", choices=("all",) + tuple(c.value for c in CONDITIONS))
    p.add_argument("--permutations", type=int)
    p.add_argument("--bin-width", dest="bin_width", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--raw-ratings", action="store_true", help="skip per-participant z-scoring")
    p.add_argument("--percent", action="store_true", help="confidence columns are on a 0-100 scale")
    p.add_argument("--no-exclusion", action="store_true", help="keep every participant")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("curves", parents=[common], help="emit theoretical curiosity curves")
    p.add_argument("--names", help=f"comma-separated subset of: {', '.join(CURVES)} (default all)")
    p.add_argument("--resolution", type=int, default=10001)
    p.add_argument("--h-max", dest="h_max", type=float, default=10.0)
    p.set_defaults(func=cmd_curves)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CuriosityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
