"""Pieces shared by the stochastic solvers: result record, bounds, feasible sampling."""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator

from . import model
from .scenario import Decision


class InfeasibleScenarioError(RuntimeError):
    """No decision satisfying the budget could be found."""


class HistoryRow(NamedTuple):
    generation: int
    best_z: float
    mean_z: float
    best_beta: float
    best_x: float
    best_y: float
    feasible_count: int


HISTORY_COLUMNS = HistoryRow._fields


@dataclass
class SolverRun:
    """Outcome of one seeded solver run.

    ``history`` holds one row per generation (iteration for PSO), starting at
    generation 1; the initial population is summarised by ``initial_best_z``.
    """

    config: object
    best_decision: Decision
    best_fitness: float
    best_z: float
    initial_best_z: float
    n_evaluations: int
    history: list = field(default_factory=list)

    def best_z_trace(self):
        return np.array([self.initial_best_z] + [row.best_z for row in self.history])


def check_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gene_bounds(scenario, fixed_beta=None, fixed_xy=None):
    """Lower/upper bounds per gene; frozen genes get a degenerate interval."""
    lo = np.array(scenario.lower_bounds, dtype=float)
    hi = np.array(scenario.upper_bounds, dtype=float)
    if fixed_beta is not None:
        if not lo[0] <= fixed_beta <= hi[0]:
            raise ValueError(f"fixed_beta={fixed_beta} outside [0, {hi[0]}]")
        lo[0] = hi[0] = fixed_beta
    if fixed_xy is not None:
        fx, fy = fixed_xy
        if not (lo[1] <= fx <= hi[1] and lo[2] <= fy <= hi[2]):
            raise ValueError(f"fixed_xy={fixed_xy} outside the area bounds")
        lo[1] = hi[1] = fx
        lo[2] = hi[2] = fy
    return lo, hi


def _cost_feasible(scenario, genes):
    values = model.evaluate_arrays(scenario, genes[:, 0], genes[:, 1], genes[:, 2])
    return values["feasible"]


def sample_feasible(scenario, n, rng, lower, upper, max_draws=10_000):
    """Draw ``n`` points uniformly from the box, rejecting budget violations.

    The cheapest point of the box (largest beta, closest to the UE) is checked
    first; if even that exceeds the budget the scenario is infeasible.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    u, v = scenario.ue_position
    witness = np.array([[upper[0],
                         np.clip(u, lower[1], upper[1]),
                         np.clip(v, lower[2], upper[2])]])
    if not _cost_feasible(scenario, witness)[0]:
        raise InfeasibleScenarioError(
            "no decision meets the budget: minimum cost exceeds c_budget")

    accepted = []
    n_accepted = 0
    draws = 0
    while n_accepted < n:
        batch = min(max(n - n_accepted, 1), max_draws - draws)
        if batch <= 0:
            raise InfeasibleScenarioError(
                f"found only {n_accepted}/{n} feasible samples in {max_draws} draws")
        cand = lower + rng.random((batch, 3)) * (upper - lower)
        draws += batch
        ok = cand[_cost_feasible(scenario, cand)]
        accepted.append(ok[: n - n_accepted])
        n_accepted += len(accepted[-1])
    return np.concatenate(accepted, axis=0)


class BaseOptimizer(BaseEstimator):
    """Estimator-style wrapper: ``fit(scenario)`` runs the solver.

    Fitted attributes: ``run_``, ``best_decision_``, ``best_z_``,
    ``history_``, ``n_evaluations_``.
    """

    def fit(self, scenario, y=None):
        run = self._solve(scenario)
        self.run_ = run
        self.best_decision_ = run.best_decision
        self.best_z_ = run.best_z
        self.history_ = run.history
        self.n_evaluations_ = run.n_evaluations
        return self

    def _solve(self, scenario):  # pragma: no cover - abstract
        raise NotImplementedError

    def evaluate_best(self, scenario):
        if not hasattr(self, "run_"):
            raise AttributeError(f"{type(self).__name__} is not fitted yet")
        return model.evaluate(scenario, self.best_decision_)


class _Counter:
    """Counts objective evaluations (one per gene row)."""

    def __init__(self, scenario, penalty_mu):
        self.scenario = scenario
        self.penalty_mu = penalty_mu
        self.count = 0

    def __call__(self, genes):
        self.count += len(genes)
        return model.penalized_arrays(self.scenario, genes, self.penalty_mu)


def history_row(generation, best_genes, best_z, z, feasible):
    return HistoryRow(
        generation=int(generation),
        best_z=float(best_z),
        mean_z=float(np.mean(z)),
        best_beta=float(best_genes[0]),
        best_x=float(best_genes[1]),
        best_y=float(best_genes[2]),
        feasible_count=int(np.count_nonzero(feasible)),
    )


def as_decision(genes):
    return Decision(float(genes[0]), float(genes[1]), float(genes[2]))

