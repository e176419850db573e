"""Partial information decomposition via secret key agreement rates.

The package decomposes I(S0,S1 : T) of a trivariate discrete distribution
into redundancy, two unique informations, and synergy, quantifying the
unique components as secret key agreement rates under a chosen
communication scheme (or as the BROJA convex program), and checking the
consistency relation that any pair of unique informations must satisfy.
"""

from .distributions import (
    ERASED,
    Channel,
    JointDistribution,
    bec,
    from_events,
    grouped_array,
)
from .errors import (
    AlphabetMismatch,
    ArityMismatch,
    ConvergenceFailure,
    DuplicateOutcome,
    InconsistentDecomposition,
    InvalidVariable,
    NegativeProbability,
    NotNormalized,
    OutOfRange,
    OverlappingSets,
    ParameterOutOfRange,
    SkarpidError,
    SupportViolation,
    UnknownName,
    UnknownVariable,
    ZeroProbabilityCondition,
)
from .catalog import CatalogEntry, ParamSpec
from .catalog import entries as catalog_entries
from .catalog import get as catalog_get
from .catalog import names as catalog_names
from .gacs_korner import MeetAssignment, meet, skar_no_comm
from .key_rates import (
    DEFAULT_CONFIG,
    OneWayParametrization,
    OptimizerConfig,
    RateBounds,
    RateResult,
    evaluate_intrinsic_objective,
    evaluate_one_way_objective,
    intrinsic_mutual_information,
    intrinsic_mutual_information_result,
    skar_one_way,
    skar_one_way_result,
    skar_two_way_bounds,
    skar_two_way_bounds_result,
)
from .marginal import (
    BrojaResult,
    MarginalPolytope,
    broja_intermediate_entropy_report,
    broja_minimize,
    connected_information,
    maxent_with_marginals,
)
from .pid import (
    PidComponents,
    PidScheme,
    assemble,
    cmi_identity_report,
    decompose,
)
from .shannon import (
    conditional_entropy,
    conditional_mutual_information,
    entropy,
    mutual_information,
    relative_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "ERASED",
    "Channel",
    "JointDistribution",
    "bec",
    "from_events",
    "grouped_array",
    "entropy",
    "conditional_entropy",
    "mutual_information",
    "conditional_mutual_information",
    "relative_entropy",
    "MeetAssignment",
    "meet",
    "skar_no_comm",
    "OptimizerConfig",
    "DEFAULT_CONFIG",
    "RateBounds",
    "RateResult",
    "OneWayParametrization",
    "skar_one_way",
    "skar_one_way_result",
    "intrinsic_mutual_information",
    "intrinsic_mutual_information_result",
    "skar_two_way_bounds",
    "skar_two_way_bounds_result",
    "evaluate_one_way_objective",
    "evaluate_intrinsic_objective",
    "MarginalPolytope",
    "BrojaResult",
    "broja_minimize",
    "maxent_with_marginals",
    "connected_information",
    "broja_intermediate_entropy_report",
    "PidScheme",
    "PidComponents",
    "assemble",
    "decompose",
    "cmi_identity_report",
    "CatalogEntry",
    "ParamSpec",
    "catalog_get",
    "catalog_entries",
    "catalog_names",
    "SkarpidError",
    "InvalidVariable",
    "NegativeProbability",
    "NotNormalized",
    "DuplicateOutcome",
    "ArityMismatch",
    "UnknownVariable",
    "ZeroProbabilityCondition",
    "AlphabetMismatch",
    "OutOfRange",
    "OverlappingSets",
    "SupportViolation",
    "ConvergenceFailure",
    "InconsistentDecomposition",
    "UnknownName",
    "ParameterOutOfRange",
]
