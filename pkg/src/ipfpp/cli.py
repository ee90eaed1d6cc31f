"""Command-line surface: single traces, coupled trials, experiments, fits.

Exit codes: 0 success, 2 usage error, 3 runtime error, 4 coupling
invariant violation (a replay dump is written before exiting).

A flat TOML config file may supply any long flag (underscored keys);
explicit flags win on conflict. All randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import coupling, experiments, fpp, invasion
from .lattice import parse_region_spec
from .randomness import Configuration, CouplingParams, delta, k_param


def _add_region_args(p):
    p.add_argument("--dim", type=int, default=2, help="lattice dimension")
    p.add_argument("--region", default="l1:10",
                   help="region spec: l1:R or lopsided:R")


def _add_seed_args(p):
    p.add_argument("--seed", type=int, default=0, help="master seed (64-bit)")
    p.add_argument("--trial", type=int, default=0, help="trial index")


def _add_k_args(p):
    p.add_argument("--epsilon-half", type=float, default=0.01,
                   help="epsilon/2 used in K = ln|E| / delta(|E|, epsilon/2)")
    p.add_argument("--K", type=float, default=None,
                   help="override K (non-theorem value, tagged in outputs)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ipfpp",
        description="Coupled invasion / log-uniform first passage percolation "
                    "simulator and verification toolkit",
    )
    parser.add_argument("--config", default=None,
                        help="TOML file of default flag values (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print |E|, delta and K for a region")
    _add_region_args(p)
    p.add_argument("--epsilon-half", type=float, default=0.01)

    p = sub.add_parser("invade", help="dump a single invasion trace (JSONL)")
    _add_region_args(p)
    _add_seed_args(p)
    p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("fpp", help="dump a single FPP trace (CSV of log times)")
    _add_region_args(p)
    _add_seed_args(p)
    _add_k_args(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("couple", help="run n coupled trials, one CSV row each")
    _add_region_args(p)
    _add_seed_args(p)
    _add_k_args(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--inner-r", type=int, default=1)
    p.add_argument("--out", default=None)

    p = sub.add_parser("experiment", help="Monte Carlo proportion grid + summary")
    _add_region_args(p)
    _add_k_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--inner-r", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--coupling-stats", action="store_true",
                   help="also run invasion per trial and record event frequencies")
    p.add_argument("--epsilon-reading", choices=["epsilon_half", "epsilon"],
                   default="epsilon_half",
                   help="how --epsilon-half is interpreted when deriving K")
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("slice", help="extract the y=0 slice from a grid CSV")
    p.add_argument("--grid", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("fit", help="fit 1-|x|^alpha to a slice CSV")
    p.add_argument("--slice", required=True)
    p.add_argument("--out", default=None, help="write fit JSON here")

    p = sub.add_parser("levelcurve", help="interpolated P=level curve from a grid")
    p.add_argument("--grid", required=True)
    p.add_argument("--level", type=float, default=0.1)
    p.add_argument("--out", default=None)

    return parser


def _apply_config(parser, argv):
    """Read --config TOML (if any) and use it as defaults; flags win."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    args = parser.parse_args(argv)
    if known.config:
        try:
            with open(known.config, "rb") as fh:
                conf = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            parser.error(f"cannot read config file: {exc}")
        explicit = _explicit_dests(parser, argv)
        for key, value in conf.items():
            dest = key.replace("-", "_")
            if hasattr(args, dest) and dest not in explicit:
                setattr(args, dest, value)
    return args


def _explicit_dests(parser, argv):
    """Dests that were actually given on the command line."""
    given = set()
    for tok in argv:
        if tok.startswith("--"):
            given.add(tok[2:].split("=")[0].replace("-", "_"))
    return given


def _outfh(path):
    return open(path, "w") if path else sys.stdout


def cmd_params(args):
    region = parse_region_spec(args.region, args.dim)
    m = region.edge_count
    d = delta(m, args.epsilon_half)
    print(f"edges |E| = {m}")
    print(f"delta(|E|, {args.epsilon_half:g}) = {d:.17g}")
    print(f"K = ln|E|/delta = {k_param(m, args.epsilon_half):.17g}")
    return 0


def cmd_invade(args):
    region = parse_region_spec(args.region, args.dim)
    cfg = Configuration(args.seed, args.trial)
    rec = invasion.invade(cfg, region)
    fh = _outfh(args.out)
    step = 0
    vit = iter(rec.vertex_sequence)
    print(json.dumps({"step": step, "kind": "vertex",
                      "coords": list(next(vit))}), file=fh)
    for e, w in zip(rec.edge_sequence, rec.edge_weights):
        step += 1
        print(json.dumps({"step": step, "kind": "edge",
                          "coords": [list(e[0]), list(e[1])],
                          "weight": w}), file=fh)
        new_v = next(vit, None)
        if new_v is not None:
            print(json.dumps({"step": step, "kind": "vertex",
                              "coords": list(new_v)}), file=fh)
    if fh is not sys.stdout:
        fh.close()
    return 0


def _derive_params(args, region):
    params = CouplingParams.theorem(region.edge_count, 2.0 * args.epsilon_half)
    if args.K is not None:
        params = params.with_k(args.K)
    return params


def cmd_fpp(args):
    region = parse_region_spec(args.region, args.dim)
    cfg = Configuration(args.seed, args.trial)
    params = _derive_params(args, region)
    res = fpp.dijkstra(cfg, region, params.K)
    fh = _outfh(args.out)
    names = ",".join("xyz"[:args.dim])
    print(f"{names},log_time", file=fh)
    for v, t in res.settled:
        print(",".join(str(c) for c in v) + f",{t:.17g}", file=fh)
    print(f"# boundary_time,{res.boundary_time:.17g}", file=fh)
    if fh is not sys.stdout:
        fh.close()
    return 0


def cmd_couple(args):
    region = parse_region_spec(args.region, args.dim)
    params = _derive_params(args, region)
    if not params.theorem_k:
        print("note: non-theorem K override in effect", file=sys.stderr)
    fh = _outfh(args.out)
    print("trial_index,t_delta,order_agreement,ip_contains_fpp,"
          "fpp_contains_ip,late_invasion,min_gap,K", file=fh)
    for t in range(args.trial, args.trial + args.trials):
        cfg = Configuration(args.seed, t)
        out = coupling.run_coupled(cfg, region, args.inner_r, params)
        print(f"{t},{int(out.t_delta_holds)},{int(out.order_agreement)},"
              f"{int(out.ip_contains_fpp)},{int(out.fpp_contains_ip_on_inner)},"
              f"{int(out.late_invasion_in_inner)},{out.min_gap:.17g},"
              f"{params.K:.17g}", file=fh)
    if fh is not sys.stdout:
        fh.close()
    return 0


def cmd_experiment(args):
    out_dir = os.environ.get("IPFPP_OUT_DIR", args.out_dir)
    plan = experiments.ExperimentPlan(
        dimension=args.dim,
        region_spec=args.region,
        trials=args.trials,
        master_seed=args.seed,
        inner_r=args.inner_r,
        epsilon_half=args.epsilon_half,
        epsilon_reading=args.epsilon_reading,
        k_override=args.K,
        workers=args.workers,
        coupling_stats=args.coupling_stats,
    )
    result = experiments.run_experiment(plan)
    os.makedirs(out_dir, exist_ok=True)
    region = parse_region_spec(plan.region_spec, plan.dimension)
    grid_path = os.path.join(out_dir, "grid.csv")
    summary_path = os.path.join(out_dir, "summary.json")
    experiments.write_grid_csv(grid_path, region, result.grid)
    experiments.write_summary_json(summary_path, result)
    print(f"wrote {grid_path} and {summary_path}")
    return 0


def cmd_slice(args):
    grid = experiments.read_grid_csv(args.grid)
    pairs = experiments.slice_profile(grid, args.radius)
    if args.out:
        experiments.write_slice_csv(args.out, pairs)
        print(f"wrote {args.out}")
    else:
        experiments.write_slice_csv("/dev/stdout", pairs)
    return 0


def cmd_fit(args):
    pairs = experiments.read_slice_csv(args.slice)
    fit = experiments.fit_alpha(pairs)
    print(f"alpha = {fit.alpha:.17g}")
    print(f"r = {fit.r:.17g}")
    print(f"points_used = {fit.points_used}")
    if args.out:
        experiments.write_fit_json(args.out, fit)
    return 0


def cmd_levelcurve(args):
    grid = experiments.read_grid_csv(args.grid)
    points, ratio = experiments.level_curve(grid, args.level)
    fh = _outfh(args.out)
    print("x,y", file=fh)
    for x, y in points:
        print(f"{x:.17g},{y:.17g}", file=fh)
    if fh is not sys.stdout:
        fh.close()
    print(f"isotropy_ratio = {ratio}", file=sys.stderr)
    return 0


_COMMANDS = {
    "params": cmd_params,
    "invade": cmd_invade,
    "fpp": cmd_fpp,
    "couple": cmd_couple,
    "experiment": cmd_experiment,
    "slice": cmd_slice,
    "fit": cmd_fit,
    "levelcurve": cmd_levelcurve,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    args = _apply_config(parser, argv)
    try:
        return _COMMANDS[args.command](args)
    except coupling.CouplingInvariantError as exc:
        dump_path = os.path.abspath("coupling_violation.json")
        with open(dump_path, "w") as fh:
            json.dump(exc.dump, fh, indent=2)
        print(f"error: {exc} (dump written to {dump_path})", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
