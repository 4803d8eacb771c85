"""Evolutionary dynamics on undirected graphs.

Two models on a shared graph core: the sequential all-or-nothing birth-death
process (Monte Carlo simulation, exact absorption probabilities, closed
forms, and degree-based fixation bounds) and the simultaneous
mutual-influence dynamic (potential-certified convergence, limit-fitness
analysis on the complete graph, and two invasion-control mechanisms).
"""

__version__ = "0.1.0"

from .aggregation import (
    AggregationError,
    AggregationRun,
    CompleteGraphTrajectory,
    FitnessVector,
    InfluenceResult,
    LimitFitnessBounds,
    aggregate_step,
    complete_graph_trajectory,
    degree_of_influence,
    influence_matrix,
    limit_fitness_bounds,
    max_adjacent_gap,
    mutant_vector,
    potential,
    potential_increment,
    round_mutant_count,
    run_to_convergence,
)
from .bounds import DegreeRatioBounds, GenericUpperBound, generic_upper_bound, lambda_bounds
from .control import (
    ControlConfig,
    ControlError,
    ControlReport,
    PhaseSummary,
    class_counts,
    continuous_bound,
    continuous_full_matrix_check,
    phase_bound,
    run_continuous_control,
    run_phase_control,
)
from .graphs import (
    Graph,
    GraphError,
    GraphFamily,
    clique_side,
    clique_wheel,
    complete_graph,
    cycle_graph,
    generate,
    is_connected,
    load_edge_list,
    path_graph,
    ring_side,
    save_edge_list,
    star_graph,
    weighted_star,
)
from .moran import (
    AbsorptionSolution,
    FixationEstimate,
    MoranConfig,
    MoranError,
    Placement,
    SimulationResult,
    absorption_csv,
    birth_death_fixation,
    estimate_fixation,
    exact_fixation,
    expected_hitting_time,
    simulate_to_absorption,
    step,
    transition_distribution,
    trial_stream,
)
from .rng import Stream, derive_seed, mix64
