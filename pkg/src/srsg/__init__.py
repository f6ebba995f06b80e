"""Schelling resource selection games: exact evaluation, dynamics and equilibrium solvers."""
from .core import (
    BLUE,
    RED,
    Color,
    Instance,
    counts,
    fraction,
    parse_instance,
    format_instance,
    parse_profile,
    format_profile,
    social_welfare,
    utilities,
    utility,
    validate,
)
from .dynamics import (
    AWARE,
    BLIND,
    BEST_GAIN,
    ROUND_ROBIN,
    Move,
    MoveMode,
    Scheduler,
    is_beta_approx_iae,
    is_equilibrium,
    is_improving,
    find_improving_move,
    potential_phi,
    run_dynamics,
    utility_vector_z,
    welfare_at_tau1,
    witness_move,
)
from .exact import (
    EnumerationBudget,
    approx_iae_2,
    brute_force_optimum,
    decide_all_satisfied_agent_deg2,
    enumerate_equilibria,
    find_all_max_profile,
    max_bipartite_matching,
    optimum_resource_deg2,
    welfare_ascent,
)
from .generators import (
    RandomParams,
    figure1,
    poa_family,
    pos_gap_family,
    random_34_formula,
    random_instance,
    random_profile,
)
from .greedy import compute_ibe_greedy
from .metrics import poa_bound, pos_bound_ibe, quality_report
from .reductions import (
    CnfFormula,
    brute_force_sat,
    derived_assignment,
    sat_to_srsg,
    solve_2sat,
    verify_reduction,
)

__version__ = "0.1.0"
