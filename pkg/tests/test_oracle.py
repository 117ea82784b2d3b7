import numpy as np
import pytest

from isac_offload import model
from isac_offload.ga import GaConfig, run_ga
from isac_offload.oracle import GRID_COLUMNS, GridSearchOracle, grid_search
from isac_offload.scenario import Scenario


def test_coincident_ue_and_target_picks_nearest_corner():
    sc = Scenario(ue_position=(100.0, 120.0), target_position=(100.0, 120.0))
    res = grid_search(sc, (2, 2, 2))
    assert (res.best_decision.x, res.best_decision.y) == (0.0, 0.0)
    # brute-force re-enumeration of the eight lattice points
    pts = [(b, x, y) for b in (0.0, 0.9) for x in (0.0, 1000.0) for y in (0.0, 1000.0)]
    feas = [p for p in pts if model.evaluate(sc, p).feasible]
    assert res.best_z == min(model.evaluate(sc, p).objective for p in feas)


def test_balance_point():
    sc = Scenario(weight_crb=0.0, price_bandwidth=0.0, price_cycle=0.0,
                  price_tx_energy=0.0, price_ue_energy=0.0)
    res = grid_search(sc, (101, 101, 101))
    rate = model.transmission_rate(sc, (0.0, *sc.ue_position))
    ws = sc.cycles_per_bit * sc.task_bits
    a = 2 * sc.task_bits / rate + ws / sc.ue_capacity
    beta_star = a / (ws / sc.uav_capacity + a)
    step = sc.beta_max / 100
    assert abs(res.best_decision.beta - beta_star) <= step


def test_nested_refinement_never_worse(table1):
    zs = [grid_search(table1, (n, n, n)).best_z for n in (3, 5, 9, 17, 33, 65)]
    assert all(b <= a for a, b in zip(zs, zs[1:]))


def test_infeasible_lattice_flagged(table1):
    sc = table1.replace(beta_max=0.1)
    res = grid_search(sc, (3, 3, 3))
    assert not res.feasible_found
    assert res.best_z == res.z.min()


def test_grid_rows_and_fraction(table1):
    res = grid_search(table1, (3, 2, 2))
    rows = list(res.rows())
    assert len(rows) == 12 and len(rows[0]) == len(GRID_COLUMNS)
    assert res.feasible_fraction == pytest.approx(np.mean([r[-1] for r in rows]))


def test_solver_not_below_lattice_minus_gap(table1):
    res = grid_search(table1)
    eps = res.lattice_gap()
    run = run_ga(table1, GaConfig(rng_seed=1))
    assert run.best_z >= res.best_z - eps


def test_rejects_coarse_resolution(table1):
    with pytest.raises(ValueError):
        grid_search(table1, (1, 5, 5))


def test_estimator(table1):
    est = GridSearchOracle(resolution=(5, 5, 5)).fit(table1)
    assert est.n_evaluations_ == 125
    assert est.evaluate_best(table1).objective == est.best_z_
