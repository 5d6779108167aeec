"""Szegedy quantum-walk simulation of best-arm identification on graph bandits."""
from ._backend import BACKEND
from .analysis import (
    SweepResult,
    TheoremReport,
    bound_bipartite,
    bound_complete,
    first_peak,
    run_sweep,
    sample_arm,
    timing,
    verify_theorem,
)
from .environment import (
    ArmStatistics,
    EnvironmentModel,
    arm_statistics,
    best_arm,
    cluster_mean_q,
    two_state_environment,
    winning_probabilities,
    winning_probability,
)
from .graph import (
    ExecutiveGraph,
    SymmetricDigraph,
    build_complete_bipartite,
    build_complete_with_loops,
    build_executive,
    build_from_edges,
)
from .walk import (
    WalkOperator,
    WalkState,
    apply,
    build_grover_coin,
    build_oracle,
    build_search_operator,
    build_szegedy_coin,
    build_walk_operator,
    evolve,
    initial_state,
    marked_vertex_probability,
    recommendation,
    recommendation_distribution,
    vertex_probability,
)

__version__ = "0.1.0"
