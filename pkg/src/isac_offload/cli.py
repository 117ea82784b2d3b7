"""Command-line entry point: ``isac-offload {optimize,sweep,radar-sweep,validate-config}``."""

import argparse
import logging
import sys

from .config import load_config
from ._base import InfeasibleScenarioError
from .harness import SOLVERS, SWEEP_AXES, cmd_optimize, cmd_radar_sweep, cmd_sweep
from .model import evaluate

log = logging.getLogger("isac_offload")


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text):
    return [int(float(t)) for t in text.split(",") if t.strip()]


def _names(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: from config)")
    common.add_argument("--out-dir", default=".", help="directory for output files")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")

    parser = argparse.ArgumentParser(prog="isac-offload", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", parents=[common], help="run one solver on a scenario")
    p.add_argument("config")
    p.add_argument("solver", choices=SOLVERS)
    p.add_argument("seed_pos", nargs="?", type=int, metavar="SEED")
    p.add_argument("--emit-grid", action="store_true", help="oracle: also write the full lattice CSV")
    p.add_argument("--timing", action="store_true", help="record wall time in the JSON result")

    p = sub.add_parser("sweep", parents=[common], help="solver sweep over one scenario axis")
    p.add_argument("config")
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--values", required=True, type=_floats, help="comma-separated, increasing")
    p.add_argument("--solvers", type=_names, default=["ga"], help=f"subset of {','.join(SOLVERS)}")
    p.add_argument("--seeds", type=_ints, default=None, help="comma-separated seeds")

    p = sub.add_parser("radar-sweep", parents=[common], help="Monte-Carlo MSE vs CRB sweep")
    p.add_argument("config")
    p.add_argument("--lengths", required=True, type=_ints, help="window lengths L")
    p.add_argument("--snrs", required=True, type=_floats, help="radar SNR values (linear)")
    p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser("validate-config", parents=[common], help="parse and check a config file")
    p.add_argument("config")
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "validate-config":
            sc = cfg.scenario
            mid = (sc.beta_max / 2, sum(sc.area_bounds[:2]) / 2, sum(sc.area_bounds[2:]) / 2)
            ev = evaluate(sc, mid)
            print(f"ok: {args.config} (sha256 {cfg.digest}); "
                  f"z at centre = {ev.objective:.6g}, feasible = {ev.feasible}")
            return 0

        if args.command == "optimize":
            seed = args.seed_pos if args.seed_pos is not None else args.seed
            if seed is None:
                seed = cfg.ga.rng_seed if args.solver != "pso" else cfg.pso.rng_seed
            rec = cmd_optimize(cfg, args.solver, seed, args.out_dir,
                               emit_grid=args.emit_grid, timing=args.timing)
            log.info("%s seed %d: z = %.6g at beta=%.4f x=%.1f y=%.1f (%d evaluations)",
                     args.solver, seed, rec["best_z"], rec["best_decision"]["beta"],
                     rec["best_decision"]["x"], rec["best_decision"]["y"], rec["n_evaluations"])
            return 0

        seed = args.seed if args.seed is not None else cfg.ga.rng_seed
        if args.command == "sweep":
            seeds = args.seeds if args.seeds is not None else [seed]
            path, rows = cmd_sweep(cfg, args.axis, args.values, args.solvers, seeds,
                                   args.out_dir, args.threads)
        else:
            path, rows = cmd_radar_sweep(cfg, args.lengths, args.snrs, args.trials, seed,
                                         args.out_dir, args.threads)
        log.info("wrote %d rows to %s", len(rows), path)
        return 0
    except InfeasibleScenarioError as exc:
        print(f"error: infeasible scenario: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
