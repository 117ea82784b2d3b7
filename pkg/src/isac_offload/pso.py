"""Global-best particle swarm baseline on the same penalised objective."""

from dataclasses import asdict, dataclass

import numpy as np

from ._base import (BaseOptimizer, SolverRun, _Counter, as_decision, check_rng,
                    gene_bounds, history_row, sample_feasible)


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 20
    iterations: int = 800
    inertia: float = 0.729
    cognitive: float = 1.49445
    social: float = 1.49445
    max_velocity: float = 0.2
    penalty_mu: float = 1e6
    rng_seed: int = 0

    def __post_init__(self):
        if int(self.swarm_size) < 1:
            raise ValueError("swarm_size must be a positive integer")
        if int(self.iterations) < 0:
            raise ValueError("iterations must be nonnegative")
        if self.cognitive < 0 or self.social < 0:
            raise ValueError("cognitive and social coefficients must be nonnegative")
        if not 0.0 < self.max_velocity <= 1.0:
            raise ValueError("max_velocity must lie in (0, 1]")
        if self.penalty_mu < 0:
            raise ValueError("penalty_mu must be nonnegative")

    @property
    def evaluation_budget(self):
        return self.swarm_size * (self.iterations + 1)

    @classmethod
    def matching_ga(cls, ga_config, **kwargs):
        """Config whose evaluation budget equals the GA's 2KT + K."""
        swarm = kwargs.pop("swarm_size", ga_config.population_size)
        budget = ga_config.evaluation_budget
        iterations = max(budget // swarm - 1, 0)
        return cls(swarm_size=swarm, iterations=iterations, **kwargs)


def run_pso(scenario, config=PsoConfig(), initial_positions=None):
    rng = check_rng(config.rng_seed)
    lower, upper = gene_bounds(scenario)
    span = upper - lower
    vmax = config.max_velocity * span
    objective = _Counter(scenario, config.penalty_mu)

    if initial_positions is None:
        pos = sample_feasible(scenario, config.swarm_size, rng, lower, upper)
    else:
        pos = np.clip(np.array(initial_positions, dtype=float).reshape(-1, 3), lower, upper)
    vel = np.zeros_like(pos)
    z, feasible = objective(pos)
    pbest, pbest_z = pos.copy(), z.copy()
    g = int(np.argmin(pbest_z))
    gbest, gbest_z = pbest[g].copy(), pbest_z[g]
    initial_best_z = float(gbest_z)

    history = []
    for it in range(1, config.iterations + 1):
        r1 = rng.random(pos.shape)
        r2 = rng.random(pos.shape)
        vel = (config.inertia * vel
               + config.cognitive * r1 * (pbest - pos)
               + config.social * r2 * (gbest - pos))
        vel = np.clip(vel, -vmax, vmax)
        pos = np.clip(pos + vel, lower, upper)
        z, feasible = objective(pos)

        better = z < pbest_z
        pbest[better] = pos[better]
        pbest_z[better] = z[better]
        g = int(np.argmin(pbest_z))
        if pbest_z[g] < gbest_z:
            gbest, gbest_z = pbest[g].copy(), pbest_z[g]
        history.append(history_row(it, gbest, gbest_z, z, feasible))

    return SolverRun(
        config=config,
        best_decision=as_decision(gbest),
        best_fitness=float(1.0 / gbest_z),
        best_z=float(gbest_z),
        initial_best_z=initial_best_z,
        n_evaluations=objective.count,
        history=history,
    )


class ParticleSwarmOptimizer(BaseOptimizer):
    def __init__(self, swarm_size=20, iterations=800, inertia=0.729, cognitive=1.49445,
                 social=1.49445, max_velocity=0.2, penalty_mu=1e6, rng_seed=0):
        self.swarm_size = swarm_size
        self.iterations = iterations
        self.inertia = inertia
        self.cognitive = cognitive
        self.social = social
        self.max_velocity = max_velocity
        self.penalty_mu = penalty_mu
        self.rng_seed = rng_seed

    @property
    def config(self):
        return PsoConfig(**self.get_params())

    @classmethod
    def from_config(cls, config):
        return cls(**asdict(config))

    def _solve(self, scenario):
        return run_pso(scenario, self.config)
