"""Joint computation offloading and target tracking for an ISAC-enabled UAV.

Closed-form latency / cost / velocity-CRB model, a real-coded genetic
algorithm, a particle-swarm baseline, a brute-force lattice oracle and a
Monte-Carlo check of the autocorrelation velocity estimator.
"""

from ._base import InfeasibleScenarioError, SolverRun
from .config import load_config
from .ga import GaConfig, GeneticOptimizer, run_ga
from .model import Evaluation, evaluate, penalized_objective
from .oracle import GridSearchOracle, grid_search
from .pso import ParticleSwarmOptimizer, PsoConfig, run_pso
from .scenario import Decision, Scenario, ScenarioError

__all__ = [
    "Decision", "Evaluation", "GaConfig", "GeneticOptimizer", "GridSearchOracle",
    "InfeasibleScenarioError", "ParticleSwarmOptimizer", "PsoConfig", "Scenario",
    "ScenarioError", "SolverRun", "evaluate", "grid_search", "load_config",
    "penalized_objective", "run_ga", "run_pso",
]

__version__ = "0.1.0"
