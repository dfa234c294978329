"""loometric: finite metric spaces, distance-equality patterns, loose
embeddings, Gromov-Hausdorff distance, and mesh/separation witness sets."""

from .embed import (
    ClusterNode,
    DimMismatch,
    Embedding,
    EpsTooLarge,
    GenericityExhausted,
    InfeasibleReport,
    IntervalAssignment,
    NotInjective,
    Violation,
    build_dendrogram,
    embed_line_branching,
    interval_assignment,
    pattern_block_pairs,
    penalty_and_grad,
    perturb_to_injective,
    solve_loose_embedding,
    verify_loose,
)
from .experiment import ExperimentReport, experiment_genericity, sample_hypercube_space
from .gh import (
    Correspondence,
    EmptySpace,
    EmptySubset,
    GhResult,
    NotACover,
    NotAPartition,
    PartitionWitness,
    check_dimension_witness,
    check_mnm,
    correspondence_distortion,
    cover_order,
    exhaustive_mnm_partition,
    find_mnm_partition,
    gh_bounds,
    gh_exact,
    hausdorff,
)
from .obstruction import (
    SimplexWitness,
    TooSmall,
    brute_force_max_simplex,
    dim_lower_bound,
    max_regular_simplex,
)
from .space import (
    Asymmetric,
    DistancePattern,
    EmptyThresholds,
    FiniteMetricSpace,
    MetricValidationError,
    NegativeEntry,
    NonzeroDiagonal,
    PatternBlock,
    StripFiltration,
    TriangleViolation,
    ZeroOffDiagonal,
    distance_pattern,
    is_injective,
    isolation_strip,
    points_ge_r,
    to_fraction,
    validate_metric,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
