"""Music-streaming revenue allocation through (multi-issue) claims rules."""
from .claims import (
    CEA,
    PROPORTIONAL,
    Allocation,
    ClaimsProblem,
    ClaimsRule,
    RulePropertyReport,
    cea,
    cea_lambda,
    probe_rule_properties,
    proportional,
    weighted_proportional,
    weighted_proportional_rule,
)
from .multi_issue import (
    IssueWeightFunction,
    MultiIssueClaimsProblem,
    TwoStageBreakdown,
    issue_totals,
    multi_issue_weighted_proportional,
    per_issue,
    two_stage,
)
from .streaming import (
    ProbabilitySystem,
    RewardVector,
    StreamingProblem,
    StreamStats,
    WeightSystem,
    pro_rata_rewards,
    probabilistic_index_rewards,
    rewards_from_index,
    shapley_rewards,
    stream_stats,
    user_centric_rewards,
    weighted_index_rewards,
)
from .bridge import (
    EquivalenceReport,
    induced_claims_rules,
    probability_system_from_rules,
    prorata_weight_function,
    reallocation_proofness_probe,
    to_multi_issue,
    total_streams_weight_function,
    usercentric_weight_function,
    verify_equivalences,
    weight_system_from_first_stage,
)
from .generate import generate_random_problem

__version__ = "0.1.0"
