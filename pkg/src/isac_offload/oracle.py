"""Brute-force lattice search used as the reference optimum for the solvers."""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from . import model
from .scenario import Decision

GRID_COLUMNS = ("beta", "x", "y", "z", "t_total", "crb", "c_total", "feasible")


@dataclass
class GridResult:
    best_decision: Decision
    best_z: float
    best_index: tuple
    feasible_found: bool
    resolution: tuple
    axes: tuple
    z: np.ndarray          # penalised objective, shape = resolution
    t_total: np.ndarray
    crb: np.ndarray
    c_total: np.ndarray
    feasible: np.ndarray

    @property
    def feasible_fraction(self):
        return float(np.mean(self.feasible))

    @property
    def n_evaluations(self):
        return int(np.prod(self.resolution))

    def rows(self):
        """Yield one tuple per lattice point in C order, columns as GRID_COLUMNS."""
        betas, xs, ys = self.axes
        for i, b in enumerate(betas):
            for j, x in enumerate(xs):
                for k, y in enumerate(ys):
                    yield (b, x, y, self.z[i, j, k], self.t_total[i, j, k],
                           self.crb[i, j, k], self.c_total[i, j, k], bool(self.feasible[i, j, k]))

    def lattice_gap(self):
        """Half the largest objective jump to a neighbour of the best lattice point.

        A cheap Lipschitz-style bound on how far the continuous optimum inside
        the best cell can undercut the lattice optimum.
        """
        idx = np.array(self.best_index)
        z0 = self.z[tuple(idx)]
        jumps = []
        for axis in range(3):
            for step in (-1, 1):
                nb = idx.copy()
                nb[axis] += step
                if 0 <= nb[axis] < self.resolution[axis]:
                    jumps.append(abs(self.z[tuple(nb)] - z0))
        return 0.5 * sum(sorted(jumps)[-3:]) if jumps else 0.0


def grid_search(scenario, resolution=(101, 101, 101), penalty_mu=1e6):
    """Evaluate the penalised objective on the full (beta, x, y) lattice.

    Returns the best feasible lattice point, or the best penalised point with
    ``feasible_found=False`` when no lattice point meets the budget.
    """
    n_beta, n_x, n_y = (int(n) for n in resolution)
    if min(n_beta, n_x, n_y) < 2:
        raise ValueError("resolution must be >= 2 along every axis")
    x_min, x_max, y_min, y_max = scenario.area_bounds
    betas = np.linspace(0.0, scenario.beta_max, n_beta)
    xs = np.linspace(x_min, x_max, n_x)
    ys = np.linspace(y_min, y_max, n_y)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")

    shape = (n_beta, n_x, n_y)
    out = {name: np.empty(shape) for name in ("z", "t_total", "crb", "c_total")}
    feasible = np.empty(shape, dtype=bool)
    for i, b in enumerate(betas):
        v = model.evaluate_arrays(scenario, b, gx, gy)
        out["z"][i] = v["objective"] + model.penalty(scenario, v["c_total"], penalty_mu)
        out["t_total"][i] = v["t_total"]
        out["crb"][i] = v["crb"]
        out["c_total"][i] = v["c_total"]
        feasible[i] = v["feasible"]

    found = bool(feasible.any())
    masked = np.where(feasible, out["z"], np.inf) if found else out["z"]
    flat = int(np.argmin(masked))
    best_index = np.unravel_index(flat, shape)
    best = Decision(float(betas[best_index[0]]), float(xs[best_index[1]]), float(ys[best_index[2]]))
    return GridResult(
        best_decision=best,
        best_z=float(out["z"][best_index]),
        best_index=tuple(int(i) for i in best_index),
        feasible_found=found,
        resolution=shape,
        axes=(betas, xs, ys),
        feasible=feasible,
        **out,
    )


class GridSearchOracle(BaseEstimator):
    def __init__(self, resolution=(101, 101, 101), penalty_mu=1e6):
        self.resolution = resolution
        self.penalty_mu = penalty_mu

    def fit(self, scenario, y=None):
        self.result_ = grid_search(scenario, self.resolution, self.penalty_mu)
        self.best_decision_ = self.result_.best_decision
        self.best_z_ = self.result_.best_z
        self.n_evaluations_ = self.result_.n_evaluations
        self.history_ = []
        return self

    def evaluate_best(self, scenario):
        return model.evaluate(scenario, self.best_decision_)
