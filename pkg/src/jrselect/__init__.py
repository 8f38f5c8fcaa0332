"""Approval-based top-k selection under justified representation.

The package selects k items from an approval profile so that an additive
scoring rule is maximized subject to justified representation (JR): no
group of at least n/k users may share an approved item while none of its
members approves anything selected. It ships exact solvers, the GreedyCC
approximation, worst-case instance families, and Mallows-mixture
simulations for the price of imposing JR.
"""

from .core import (
    ApprovalProfile,
    Committee,
    GroupPartition,
    Instance,
    Score,
    build_instance,
    threshold_probabilistic_approvals,
)
from .errors import (
    BudgetExceededError,
    ChecksumError,
    CommitteeSizeError,
    DuplicatePairError,
    DuplicateUserError,
    EmptyGroupError,
    ItemIndexError,
    JRSelectError,
    MissingGroupsError,
    MissingScoresError,
    MissingUserError,
    MixedModeError,
    NegativeScoreError,
    NetworkError,
    ParameterError,
    ParseError,
    PartitionError,
    PermutationError,
    ProbabilityError,
    ProfileTooLargeError,
    UnapprovedItemError,
    ValidationError,
)
from .examples import bridge_conflict_instance, mini_bridge_instance
from .io import (
    RepresentationReport,
    fetch_dataset,
    load_instance,
    load_instance_json,
    parse_approval_csv,
    parse_groups_csv,
    parse_scores_csv,
    question_instances_from_files,
    representation_report,
    representation_report_to_csv,
    representation_report_to_dict,
    save_instance_json,
    sweep_to_csv,
    sweep_to_dict,
    write_approvals_csv,
    write_groups_csv,
    write_instance_files,
    write_scores_csv,
    write_sweep_svg,
)
from .jr import (
    JrWitness,
    is_cohesive,
    jr_set_containing,
    unrepresented_users,
    verify_jr,
    verify_jr_bruteforce,
)
from .mallows import (
    MallowsConfig,
    MallowsMixtureConfig,
    SimulationReport,
    bound_blowup_size,
    kendall_tau,
    mallows_normalizer,
    mallows_pmf,
    mixture_price_bound,
    polarized_mixture,
    run_price_sweep,
    sample_mallows_bottom_up,
    sample_mixture_instance,
    top_displacement_bound,
)
from .scoring import (
    ENGAGEMENT,
    EXTERNAL,
    MAXIMIN_DIVERSE_APPROVAL,
    PRODUCT_DIVERSE_APPROVAL,
    RULES,
    MonotonicityWitness,
    ScoringRule,
    check_approval_dependent,
    check_approval_monotonic,
    engagement_score,
    external_score,
    inverse_engagement_rule,
    maximin_diverse_approval,
    product_diverse_approval,
)
from .solve import (
    DEFAULT_ENUMERATION_BUDGET,
    PriceReport,
    SelectionResult,
    cohesive_groups_worst_case,
    diverse_approval_worst_case,
    greedy_cc,
    item_scores,
    optimal_jr_set_exact,
    optimal_set,
    price_of_jr,
    unbounded_price_instance,
)

__version__ = "0.1.0"

__all__ = [
    "ApprovalProfile",
    "BudgetExceededError",
    "ChecksumError",
    "Committee",
    "CommitteeSizeError",
    "DEFAULT_ENUMERATION_BUDGET",
    "DuplicatePairError",
    "DuplicateUserError",
    "ENGAGEMENT",
    "EXTERNAL",
    "EmptyGroupError",
    "GroupPartition",
    "Instance",
    "ItemIndexError",
    "JRSelectError",
    "JrWitness",
    "MAXIMIN_DIVERSE_APPROVAL",
    "MallowsConfig",
    "MallowsMixtureConfig",
    "MissingGroupsError",
    "MissingScoresError",
    "MissingUserError",
    "MixedModeError",
    "MonotonicityWitness",
    "NegativeScoreError",
    "NetworkError",
    "PRODUCT_DIVERSE_APPROVAL",
    "ParameterError",
    "ParseError",
    "PartitionError",
    "PermutationError",
    "PriceReport",
    "ProbabilityError",
    "ProfileTooLargeError",
    "RULES",
    "RepresentationReport",
    "Score",
    "ScoringRule",
    "SelectionResult",
    "SimulationReport",
    "UnapprovedItemError",
    "ValidationError",
    "bound_blowup_size",
    "bridge_conflict_instance",
    "build_instance",
    "check_approval_dependent",
    "check_approval_monotonic",
    "cohesive_groups_worst_case",
    "diverse_approval_worst_case",
    "engagement_score",
    "external_score",
    "fetch_dataset",
    "greedy_cc",
    "inverse_engagement_rule",
    "is_cohesive",
    "item_scores",
    "jr_set_containing",
    "kendall_tau",
    "load_instance",
    "load_instance_json",
    "mallows_normalizer",
    "mallows_pmf",
    "maximin_diverse_approval",
    "mini_bridge_instance",
    "mixture_price_bound",
    "optimal_jr_set_exact",
    "optimal_set",
    "parse_approval_csv",
    "parse_groups_csv",
    "parse_scores_csv",
    "polarized_mixture",
    "price_of_jr",
    "product_diverse_approval",
    "question_instances_from_files",
    "representation_report",
    "representation_report_to_csv",
    "representation_report_to_dict",
    "run_price_sweep",
    "sample_mallows_bottom_up",
    "sample_mixture_instance",
    "save_instance_json",
    "sweep_to_csv",
    "sweep_to_dict",
    "threshold_probabilistic_approvals",
    "top_displacement_bound",
    "unbounded_price_instance",
    "unrepresented_users",
    "verify_jr",
    "verify_jr_bruteforce",
    "write_approvals_csv",
    "write_groups_csv",
    "write_instance_files",
    "write_scores_csv",
    "write_sweep_svg",
]
