"""Fixed-price diffusion mechanism: pricing, allocation and verification."""

__version__ = "0.1.0"

from .estimators import DiffusionMechanism, FixedPriceMechanism
from .mechanisms import (
    MechanismConfig,
    Outcome,
    OutcomeDistribution,
    expected_utilities,
    run_baseline,
    run_fpdm,
    utilities,
)
from .network import (
    ActionProfile,
    BranchDecomposition,
    InfeasibleProfileError,
    SocialTree,
    TreeError,
    branches,
    build_tree,
    depth,
    effective_tree,
    enumerate_action_profiles,
    make_profile,
    path_to,
)
from .pricing import (
    RevenuePoint,
    branch_prices,
    brute_force_optimal_price,
    chain_case_revenue,
    expected_revenue_base,
    expected_revenue_fpdm,
    expected_revenue_opt,
    optimal_price,
    revenue_curve,
)
from .treegen import enumerate_rooted_trees
from .verification import (
    MonteCarloEstimate,
    PropertyReport,
    ValuationGrid,
    ValuationSample,
    check_ic,
    check_ir,
    monte_carlo_revenue,
    revenue_dominance_scan,
)
