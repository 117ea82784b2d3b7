"""Experiment runners behind the command line: optimize, sweep, radar-sweep."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
import itertools
import time

from . import io
from ._base import HISTORY_COLUMNS
from .ga import GeneticOptimizer
from .oracle import GRID_COLUMNS, GridSearchOracle
from .pso import ParticleSwarmOptimizer
from .radarsim import RadarFrame, monte_carlo_mse

SOLVERS = ("ga", "pso", "oracle", "ga-fixed-beta", "ga-fixed-xy")
SWEEP_AXES = ("uav_capacity", "task_bits")
SWEEP_COLUMNS = ("axis_value", "solver", "seed", "best_z", "t_total", "crb",
                 "c_total", "beta", "x", "y")
RADAR_COLUMNS = ("L", "gamma_rad", "true_velocity", "mse", "crb", "trials",
                 "mse_std_error", "mse_over_crb")


def make_solver(run_config, solver, seed):
    """Estimator for ``solver`` configured from ``run_config`` with ``seed``."""
    ga_cfg = replace(run_config.ga, rng_seed=seed)
    if solver == "ga":
        return GeneticOptimizer.from_config(ga_cfg)
    if solver == "ga-fixed-beta":
        return GeneticOptimizer.from_config(ga_cfg, fixed_beta=run_config.fixed_beta)
    if solver == "ga-fixed-xy":
        return GeneticOptimizer.from_config(ga_cfg, fixed_xy=run_config.fixed_xy)
    if solver == "pso":
        return ParticleSwarmOptimizer.from_config(replace(run_config.pso, rng_seed=seed))
    if solver == "oracle":
        return GridSearchOracle(run_config.oracle_resolution, run_config.ga.penalty_mu)
    raise ValueError(f"unknown solver {solver!r}; choose from {', '.join(SOLVERS)}")


def _comment(run_config, seed):
    return f"config_sha256={run_config.digest} seed={seed}"


def cmd_optimize(run_config, solver, seed, out_dir, emit_grid=False, timing=False):
    """Run one solver; write ``<stem>.json`` and (for iterative solvers) ``<stem>_history.csv``.

    Returns the result record.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    scenario = run_config.scenario
    est = make_solver(run_config, solver, seed)
    start = time.perf_counter()
    est.fit(scenario)
    elapsed = time.perf_counter() - start
    ev = est.evaluate_best(scenario)

    record = {
        "solver": solver,
        "seed": seed,
        "config_sha256": run_config.digest,
        "best_decision": {"beta": est.best_decision_.beta, "x": est.best_decision_.x,
                          "y": est.best_decision_.y},
        "best_z": est.best_z_,
        "evaluation": ev.as_dict(),
        "n_evaluations": est.n_evaluations_,
    }
    if solver == "oracle":
        res = est.result_
        record["resolution"] = list(res.resolution)
        record["feasible_fraction"] = res.feasible_fraction
        record["feasible_found"] = res.feasible_found
    if timing:
        # wall time breaks byte-identical reruns, so it is opt-in
        record["wall_time_s"] = elapsed

    stem = out_dir / f"optimize_{solver}_seed{seed}"
    io.write_json(stem.with_suffix(".json"), record)
    if solver != "oracle":
        io.write_csv(f"{stem}_history.csv", HISTORY_COLUMNS, est.history_,
                     comment=_comment(run_config, seed))
    elif emit_grid:
        io.write_csv(f"{stem}_grid.csv", GRID_COLUMNS, est.result_.rows(),
                     comment=_comment(run_config, seed))
    return record


def _sweep_cell(run_config, axis, value, solver, seed):
    scenario = run_config.scenario.replace(**{axis: value})
    est = make_solver(replace(run_config, scenario=scenario), solver, seed).fit(scenario)
    ev = est.evaluate_best(scenario)
    d = est.best_decision_
    return (value, solver, seed, est.best_z_, ev.t_total, ev.crb, ev.c_total, d.beta, d.x, d.y)


def sweep_rows(run_config, axis, values, solvers, seeds, threads=1):
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}")
    values = [float(v) for v in values]
    if not values:
        raise ValueError("sweep needs at least one axis value")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("sweep values must be strictly increasing")
    if not solvers:
        raise ValueError("sweep needs at least one solver")
    for s in solvers:
        if s not in SOLVERS:
            raise ValueError(f"unknown solver {s!r}; choose from {', '.join(SOLVERS)}")
    if not seeds:
        raise ValueError("sweep needs at least one seed")
    cells = list(itertools.product(values, solvers, seeds))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(lambda c: _sweep_cell(run_config, axis, *c), cells))


def cmd_sweep(run_config, axis, values, solvers, seeds, out_dir, threads=1):
    rows = sweep_rows(run_config, axis, values, solvers, seeds, threads)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"sweep_{axis}.csv"
    io.write_csv(path, SWEEP_COLUMNS, rows,
                 comment=f"config_sha256={run_config.digest} seeds={' '.join(map(str, seeds))}")
    return path, rows


def radar_rows(run_config, lengths, snrs, trials, seed, threads=1):
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not lengths or not snrs:
        raise ValueError("radar sweep needs at least one L and one SNR value")
    sc = run_config.scenario
    cells = list(itertools.product([int(L) for L in lengths], [float(g) for g in snrs]))

    def run(idx_cell):
        idx, (L, snr) = idx_cell
        frame = RadarFrame(L, sc.sample_period, sc.wavelength, delay=run_config.radar_delay)
        res = monte_carlo_mse(frame, run_config.radar_velocity, snr, trials,
                              seed=(seed, idx), conjugate_both=run_config.radar_conjugate_both)
        return (L, snr, run_config.radar_velocity, res.mse, res.crb, trials,
                res.mse_std_error, res.ratio)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(run, enumerate(cells)))


def cmd_radar_sweep(run_config, lengths, snrs, trials, seed, out_dir, threads=1):
    rows = radar_rows(run_config, lengths, snrs, trials, seed, threads)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "radar_sweep.csv"
    io.write_csv(path, RADAR_COLUMNS, rows, comment=_comment(run_config, seed))
    return path, rows
