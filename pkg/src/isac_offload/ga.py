"""Real-coded genetic algorithm over (beta, x, y).

One generation: K rounds of roulette parent selection, one-point crossover
and polynomial mutation fill a pool of 2K offspring; K pairwise tournaments
on that pool form the next population.  The best individual seen so far is
kept aside and only replaced on strict improvement.

All random numbers of a generation are drawn before the pool is evaluated,
so the evaluation step is a single vectorised call and never reorders the
RNG stream.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import model
from ._base import (BaseOptimizer, SolverRun, _Counter, as_decision, check_rng,
                    gene_bounds, history_row, sample_feasible)
from .scenario import Decision

MUTATION_MODES = ("chromosome", "gene")


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 20
    generations: int = 400
    crossover_prob: float = 0.8
    mutation_prob: float = 0.15
    mutation_index: float = 20.0
    penalty_mu: float = 1e6
    rng_seed: int = 0
    mutation_mode: str = "chromosome"

    def __post_init__(self):
        if int(self.population_size) < 1:
            raise ValueError("population_size must be a positive integer")
        if int(self.generations) < 0:
            raise ValueError("generations must be nonnegative")
        for name in ("crossover_prob", "mutation_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not self.mutation_index >= 1.0:
            raise ValueError("mutation_index must be >= 1")
        if self.penalty_mu < 0:
            raise ValueError("penalty_mu must be nonnegative")
        if self.mutation_mode not in MUTATION_MODES:
            raise ValueError(f"mutation_mode must be one of {MUTATION_MODES}")

    @property
    def evaluation_budget(self):
        return self.generations * 2 * self.population_size + self.population_size


# --- operators --------------------------------------------------------------

def initialize_population(scenario, config, rng=None, lower=None, upper=None,
                          max_draws=10_000):
    """K chromosomes sampled uniformly from C1 x area, resampled until C2 holds."""
    rng = check_rng(config.rng_seed if rng is None else rng)
    if lower is None or upper is None:
        lower, upper = gene_bounds(scenario)
    return sample_feasible(scenario, config.population_size, rng, lower, upper,
                           max_draws=max_draws)


def fitness(scenario, config, chromosome):
    """Reciprocal of the penalised objective."""
    genes = np.asarray(_genes(chromosome), dtype=float)
    z, _ = model.penalized_arrays(scenario, np.atleast_2d(genes), config.penalty_mu)
    f = 1.0 / z
    return float(f[0]) if genes.ndim == 1 else f


def _genes(chromosome):
    if isinstance(chromosome, Decision):
        return chromosome.as_tuple()
    return chromosome


def roulette_indices(fitnesses, n, rng):
    """``n`` independent fitness-proportionate draws (indices)."""
    f = np.asarray(fitnesses, dtype=float)
    cum = np.cumsum(f)
    idx = np.searchsorted(cum, rng.random(n) * cum[-1], side="right")
    return np.minimum(idx, len(f) - 1)


def select_parents(population, fitnesses, rng):
    i, j = roulette_indices(fitnesses, 2, rng)
    population = np.asarray(population)
    return population[i].copy(), population[j].copy()


def one_point_crossover(parents1, parents2, cuts, apply):
    """Swap genes at positions >= cut (cut in {1, 2}) where ``apply`` is set."""
    parents1 = np.atleast_2d(parents1)
    parents2 = np.atleast_2d(parents2)
    swap = (np.arange(parents1.shape[1])[None, :] >= np.asarray(cuts)[:, None])
    swap &= np.asarray(apply, dtype=bool)[:, None]
    child1 = np.where(swap, parents2, parents1)
    child2 = np.where(swap, parents1, parents2)
    return child1, child2


def crossover(parent1, parent2, rng, crossover_prob=0.8):
    apply = rng.random(1) < crossover_prob
    cut = rng.integers(1, 3, size=1)
    c1, c2 = one_point_crossover(np.asarray(parent1, float), np.asarray(parent2, float), cut, apply)
    return c1[0], c2[0]


def polynomial_mutation(genes, lower, upper, eta, u):
    """Bounded polynomial perturbation of every gene for given uniforms ``u``.

    u <= 0.5 moves towards the lower bound by ((2u)^(1/(1+eta)) - 1)(p - a);
    u > 0.5 moves towards the upper bound by (1 - (2(1-u))^(1/(1+eta)))(b - p).
    """
    genes = np.asarray(genes, dtype=float)
    u = np.asarray(u, dtype=float)
    expo = 1.0 / (1.0 + eta)
    left = u <= 0.5
    # evaluate each branch only on its own half of [0, 1]
    delta_l = np.power(2.0 * np.where(left, u, 0.5), expo) - 1.0
    delta_r = 1.0 - np.power(2.0 * (1.0 - np.where(left, 0.5, u)), expo)
    mutated = np.where(left, genes + delta_l * (genes - lower),
                       genes + delta_r * (upper - genes))
    return np.clip(mutated, lower, upper)


def _mutation_mask(rng, shape, config):
    # shape = (n_children, n_genes)
    if config.mutation_mode == "gene":
        return rng.random(shape) < config.mutation_prob
    flags = rng.random(shape[0]) < config.mutation_prob
    return np.repeat(flags[:, None], shape[1], axis=1)


def mutate(chromosome, scenario, config, rng, lower=None, upper=None):
    if lower is None or upper is None:
        lower, upper = gene_bounds(scenario)
    genes = np.asarray(_genes(chromosome), dtype=float)
    mask = _mutation_mask(rng, (1, genes.size), config)[0]
    u = rng.random(genes.size)
    return np.where(mask, polynomial_mutation(genes, lower, upper, config.mutation_index, u), genes)


def tournament_indices(fitnesses, k, rng):
    """``k`` binary tournaments with replacement; the first draw wins ties."""
    n = len(fitnesses)
    draws = rng.integers(0, n, size=(k, 2))
    f = np.asarray(fitnesses)
    return np.where(f[draws[:, 0]] >= f[draws[:, 1]], draws[:, 0], draws[:, 1])


def tournament_survival(offspring_pool, scenario, config, rng):
    pool = np.asarray(offspring_pool, dtype=float)
    if len(pool) < 2:
        raise ValueError("offspring pool needs at least two individuals")
    z, _ = model.penalized_arrays(scenario, pool, config.penalty_mu)
    return pool[tournament_indices(1.0 / z, config.population_size, rng)]


# --- driver -----------------------------------------------------------------

def _variation(population, fit, lower, upper, config, rng):
    """Produce the 2K offspring pool; draws every random number up front."""
    k = config.population_size
    parents = roulette_indices(fit, 2 * k, rng).reshape(k, 2)
    do_cross = rng.random(k) < config.crossover_prob
    cuts = rng.integers(1, 3, size=k)
    mask = _mutation_mask(rng, (2 * k, 3), config)
    u = rng.random((2 * k, 3))

    c1, c2 = one_point_crossover(population[parents[:, 0]], population[parents[:, 1]],
                                 cuts, do_cross)
    # interleave so that the pool reads child1, child2 per round
    pool = np.empty((2 * k, 3))
    pool[0::2] = c1
    pool[1::2] = c2
    mutated = polynomial_mutation(pool, lower, upper, config.mutation_index, u)
    pool = np.where(mask, mutated, pool)
    return np.clip(pool, lower, upper)


def run_ga(scenario, config=GaConfig(), fixed_beta=None, fixed_xy=None):
    """Run the genetic algorithm; ``fixed_beta``/``fixed_xy`` freeze genes (ablations)."""
    rng = check_rng(config.rng_seed)
    lower, upper = gene_bounds(scenario, fixed_beta, fixed_xy)
    objective = _Counter(scenario, config.penalty_mu)

    population = initialize_population(scenario, config, rng, lower, upper)
    z, feasible = objective(population)
    fit = 1.0 / z
    i_best = int(np.argmax(fit))
    best_genes, best_fit = population[i_best].copy(), fit[i_best]
    initial_best_z = float(z[i_best])

    history = []
    for generation in range(1, config.generations + 1):
        pool = _variation(population, fit, lower, upper, config, rng)
        pool_z, pool_feasible = objective(pool)
        pool_fit = 1.0 / pool_z
        keep = tournament_indices(pool_fit, config.population_size, rng)
        population, fit = pool[keep], pool_fit[keep]
        z, feasible = pool_z[keep], pool_feasible[keep]

        j = int(np.argmax(pool_fit))
        if pool_fit[j] > best_fit:
            best_genes, best_fit = pool[j].copy(), pool_fit[j]
        history.append(history_row(generation, best_genes, 1.0 / best_fit, z, feasible))

    return SolverRun(
        config=config,
        best_decision=as_decision(best_genes),
        best_fitness=float(best_fit),
        best_z=float(1.0 / best_fit),
        initial_best_z=initial_best_z,
        n_evaluations=objective.count,
        history=history,
    )


class GeneticOptimizer(BaseOptimizer):
    """Estimator front-end for :func:`run_ga`.

    ``fixed_beta`` freezes the splitting factor (location-only ablation);
    ``fixed_xy`` freezes the UAV position (splitting-only ablation).
    """

    def __init__(self, population_size=20, generations=400, crossover_prob=0.8,
                 mutation_prob=0.15, mutation_index=20.0, penalty_mu=1e6,
                 rng_seed=0, mutation_mode="chromosome", fixed_beta=None, fixed_xy=None):
        self.population_size = population_size
        self.generations = generations
        self.crossover_prob = crossover_prob
        self.mutation_prob = mutation_prob
        self.mutation_index = mutation_index
        self.penalty_mu = penalty_mu
        self.rng_seed = rng_seed
        self.mutation_mode = mutation_mode
        self.fixed_beta = fixed_beta
        self.fixed_xy = fixed_xy

    @property
    def config(self):
        params = self.get_params()
        params.pop("fixed_beta")
        params.pop("fixed_xy")
        return GaConfig(**params)

    @classmethod
    def from_config(cls, config, **kwargs):
        return cls(**asdict(config), **kwargs)

    def _solve(self, scenario):
        return run_ga(scenario, self.config, self.fixed_beta, self.fixed_xy)
