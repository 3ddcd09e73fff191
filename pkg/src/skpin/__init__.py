"""skpin: exact secrecy and omniscience analysis of multiterminal sources.

Computes the secret-key capacity, the minimum communication rate for
omniscience, the singleton-minimizer (type S) property, and -- for
qualifying uniform hypergraph PIN models -- the exact communication
complexity of reaching capacity.  The counting path runs on exact
rationals end to end; tabular sources use binary64 with fixed comparison
tolerances.  Also executes and machine-checks the availability-table
allocation procedure on complete uniform hypergraphs.
"""

from .allocation import (
    Allocation,
    AllocationCheck,
    AllocationState,
    EdgeOrder,
    TermDecomposition,
    edge_order,
    run_allocation,
    term_decomposition,
    verify_allocation,
)
from .capacity import (
    CapacityReport,
    ClubRelation,
    LambdaCheck,
    LambdaVector,
    LpReport,
    club_relation,
    conditional_sk_value,
    lp_capacity,
    sk_capacity,
    uniform_lambda,
    verify_lambda,
)
from .errors import InputError, PreconditionError, SkpinError, VerificationError
from .model import (
    EntropyOracle,
    FunctionObservable,
    Hypergraph,
    ObservableStats,
    PinSource,
    SumOracle,
    TabularSource,
    club,
    conditional_entropy,
    conditional_mutual_information,
    hidden_bit_source,
    load_hypergraph,
    load_pmf,
    observable_stats,
    subset_entropy,
)
from .partitions import (
    Partition,
    delta,
    enumerate_partitions,
    partition_from_subset,
    singleton_partition,
)
from .typecheck import (
    BoundCheckResult,
    RskResult,
    TypeSVerdict,
    complete_uniform_gap,
    is_type_s,
    observable_bound_check,
    rsk_uniform_pin,
    type_s_by_enumeration,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "AllocationCheck",
    "AllocationState",
    "BoundCheckResult",
    "CapacityReport",
    "ClubRelation",
    "EdgeOrder",
    "EntropyOracle",
    "FunctionObservable",
    "Hypergraph",
    "InputError",
    "LambdaCheck",
    "LambdaVector",
    "LpReport",
    "ObservableStats",
    "Partition",
    "PinSource",
    "PreconditionError",
    "RskResult",
    "SkpinError",
    "SumOracle",
    "TabularSource",
    "TermDecomposition",
    "TypeSVerdict",
    "VerificationError",
    "club",
    "club_relation",
    "complete_uniform_gap",
    "conditional_entropy",
    "conditional_mutual_information",
    "conditional_sk_value",
    "delta",
    "edge_order",
    "enumerate_partitions",
    "hidden_bit_source",
    "is_type_s",
    "load_hypergraph",
    "load_pmf",
    "lp_capacity",
    "observable_bound_check",
    "observable_stats",
    "partition_from_subset",
    "rsk_uniform_pin",
    "run_allocation",
    "singleton_partition",
    "sk_capacity",
    "subset_entropy",
    "term_decomposition",
    "type_s_by_enumeration",
    "uniform_lambda",
    "verify_allocation",
    "verify_lambda",
]
