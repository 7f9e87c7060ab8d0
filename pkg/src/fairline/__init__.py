"""fairline: exact-arithmetic fair ride allocation on a line.

Agents ride from a common origin to destinations on a half-line, split the
fare of each taxi by the sequential equal-contributions rule (the Shapley
value of the induced cost game), and the library decides fairness,
stability, and efficiency of allocations — or constructs them.
"""

from .backward import backward_greedy
from .core import (
    Allocation,
    Coalition,
    Cost,
    INFINITY,
    Instance,
    Rational,
    agent_cost,
    allocation_costs,
    coalition_types,
    is_feasible,
    load_instance,
    pad_to_k,
    phi,
    phi_capacitated,
    psi,
    shapley_permutation_oracle,
    total_cost,
    validate_partition,
)
from .criteria import (
    ConceptReport,
    DeviationWitness,
    EnvyWitness,
    SwapWitness,
    check_consecutive,
    check_envy_free,
    check_envy_free_in_groups,
    check_nash_stable,
    check_socially_optimal,
    check_split_conditions,
    check_swap_stable,
    envy_pairs,
    evaluate_concepts,
)
from .ef_cap4 import (
    enumerate_size_profiles,
    normalize_allocation,
    solve_ef_cap4,
    split_pattern_for,
)
from .ef_config import (
    Configuration,
    TaxiConfig,
    enumerate_configurations,
    greedy_from_configuration,
    solve_ef_constant_taxis,
)
from .ef_consecutive import boundary_envy_ok, solve_ef_consecutive
from .ef_types import (
    AllocationGraph,
    StarForest,
    TypeSet,
    allocation_graph,
    enumerate_star_forests,
    realize_allocation,
    solve_ef_fpt_types,
)
from .oracle import (
    EnumerationBudget,
    OracleAnswer,
    allocation_signature,
    enumerate_feasible,
    oracle_exists,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
