"""Online maximum (weight) independent set in the graph sampling model."""
from .errors import (
    ConfigInvalid,
    DriftBoundViolated,
    InstanceTooLarge,
    InvalidParameters,
    KindMismatch,
    OracleTooSlow,
    PreconditionViolated,
    SimilarityViolated,
    SizeOverflow,
)
from .generators import (
    LowerBoundTree,
    gen_disks,
    gen_intervals,
    gen_lowerbound_tree,
    gen_sinr_conflicts,
    gen_temporal,
    sinr_conflict_graph,
)
from .graph import (
    ConflictGraph,
    GeometricInstance,
    binary_graph,
    brute_force_rho,
    decompose_feasible,
    derive_conflict_graph,
    disks,
    edge_weighted_graph,
    intervals,
    is_independent,
)
from .harness import RunConfig, TrialStats, export, invariant_suite, run_experiment
from .lowerbound import coverage_recursion, highstakes, lowerbound_experiment
from .online import (
    AlgTrace,
    SplitParams,
    TemporalInstance,
    alg1_unweighted,
    alg2_weighted,
    alg4_edgeweighted,
    split_temporal,
)
from .oracles import exact_mwis_small, greedy_mis, greedy_tree_offline, interval_mwis_exact
from .sampling import (
    ArrivalStream,
    NodeLaw,
    SamplingRealization,
    WeightDistribution,
    adapter_period,
    adapter_prophet,
    adapter_secretary,
    check_similarity,
    realize,
)

__version__ = "0.1.0"
